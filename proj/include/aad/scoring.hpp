#pragma once

#include "aad/signal.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace aad {

/// Decoder (EEG side) and encoder (audio side) weights, one column per
/// canonical component. `wu` is only present for two-encoder models.
struct CcaModel
{
    Eigen::MatrixXd wx;
    Eigen::MatrixXd wa;
    std::optional<Eigen::MatrixXd> wu;
    Eigen::VectorXd eigenvalues;

    int q() const noexcept { return static_cast<int>(wx.cols()); }
};

struct ScorePair
{
    double rho1 = 0.0;
    double rho2 = 0.0;
};

/// Pearson correlation of two equally long vectors; 0 when either has zero
/// variance.
double pearson(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b);

/// Sum over components of corr(X wx_q, S wa_q). Inputs are lag-embedded
/// segments. Throws Error(dimension_mismatch).
double score_segment(const CcaModel& model, const TimeSeries& x, const TimeSeries& s);

/// Label 1 when rho1 >= rho2, else 2. Only wx and wa are used.
std::pair<int, ScorePair> classify_segment(const CcaModel& model, const TimeSeries& x,
                                           const TimeSeries& s1, const TimeSeries& s2);

struct Classification
{
    Assignment labels;
    std::vector<ScorePair> scores;
};

Classification classify_all(const CcaModel& model, const SegmentSet& segments);

} // namespace aad
