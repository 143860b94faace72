#pragma once

#include "aad/scoring.hpp"

#include <vector>

namespace aad {

inline constexpr double kVarianceFloor = 1e-8;

/// Two Gaussians for the summed canonical correlations of the attended and
/// unattended speaker. The prior on which speaker is attended is fixed at
/// 0.5 and therefore not stored.
struct CorrelationModel
{
    double mu_a = 0.0;
    double var_a = 1.0;
    double mu_u = 0.0;
    double var_u = 1.0;
};

struct FitInfo
{
    int iterations = 0;
    bool converged = false;
    bool degenerate = false;   // every score identical; means equal, variances floored
};

struct SoftLabels
{
    std::vector<double> p1;
    std::vector<double> p2;
    CorrelationModel model;

    std::size_t size() const noexcept { return p1.size(); }

    /// Hard probabilities (1, 0) / (0, 1) matching the given labels.
    static SoftLabels from_assignment(const Assignment& labels);
    /// p1 = p2 = 0.5 for every segment.
    static SoftLabels uniform(std::size_t k);

    Assignment argmax() const;
};

/// EM over the pair structure: each segment holds exactly one attended and
/// one unattended score, and the latent variable is which one. The E-step
/// is the posterior below; the M-step takes posterior-weighted means and
/// variances over all 2K scores. Stops on a parameter change < 1e-6 or after
/// 100 rounds, then orders the components so mu_a >= mu_u.
/// Requires at least 4 pairs (Error(invalid_argument) otherwise).
CorrelationModel fit_correlation_model(const std::vector<ScorePair>& scores, FitInfo* info = nullptr);

/// Log-odds log p1 - log p2 for one pair. The normalizers cancel, leaving
///   (rho1 - rho2) * [(rho1 + rho2 - 2 mu_u) / (2 var_u) - (rho1 + rho2 - 2 mu_a) / (2 var_a)]
/// which is exactly antisymmetric in the pair.
double posterior_log_odds(const CorrelationModel& model, const ScorePair& pair);

/// (p1, p2) with p1 = 1 / (1 + exp(-L)) and p2 = 1 / (1 + exp(L)).
std::pair<double, double> posterior(const CorrelationModel& model, const ScorePair& pair);

SoftLabels soft_labels(const CorrelationModel& model, const std::vector<ScorePair>& scores);

} // namespace aad
