#include "aad/labeler.hpp"

#include "aad/error.hpp"

#include <algorithm>
#include <cmath>

namespace aad {

namespace {

constexpr int kMaxEmRounds = 100;
constexpr double kEmTolerance = 1e-6;

double logistic(double x)
{
    return 1.0 / (1.0 + std::exp(-x));
}

} // namespace

SoftLabels SoftLabels::from_assignment(const Assignment& labels)
{
    SoftLabels out;
    out.p1.reserve(labels.size());
    out.p2.reserve(labels.size());
    for (int label : labels) {
        out.p1.push_back(label == 1 ? 1.0 : 0.0);
        out.p2.push_back(label == 1 ? 0.0 : 1.0);
    }
    return out;
}

SoftLabels SoftLabels::uniform(std::size_t k)
{
    SoftLabels out;
    out.p1.assign(k, 0.5);
    out.p2.assign(k, 0.5);
    return out;
}

Assignment SoftLabels::argmax() const
{
    Assignment labels(p1.size());
    for (std::size_t k = 0; k < p1.size(); ++k) labels[k] = p1[k] >= p2[k] ? 1 : 2;
    return labels;
}

CorrelationModel fit_correlation_model(const std::vector<ScorePair>& scores, FitInfo* info)
{
    const std::size_t k = scores.size();
    if (k < 4) fail(ErrorCode::invalid_argument, "fit_correlation_model: need at least 4 score pairs");
    const double n = static_cast<double>(k);

    // Start from per-pair maxima (attended) and minima (unattended).
    CorrelationModel m;
    {
        double sum_hi = 0.0, sum_lo = 0.0;
        for (const auto& s : scores) {
            sum_hi += std::max(s.rho1, s.rho2);
            sum_lo += std::min(s.rho1, s.rho2);
        }
        m.mu_a = sum_hi / n;
        m.mu_u = sum_lo / n;
        double ss_hi = 0.0, ss_lo = 0.0;
        for (const auto& s : scores) {
            ss_hi += std::pow(std::max(s.rho1, s.rho2) - m.mu_a, 2);
            ss_lo += std::pow(std::min(s.rho1, s.rho2) - m.mu_u, 2);
        }
        m.var_a = std::max(ss_hi / n, kVarianceFloor);
        m.var_u = std::max(ss_lo / n, kVarianceFloor);
    }

    const bool degenerate = std::all_of(scores.begin(), scores.end(), [&](const ScorePair& s) {
        return s.rho1 == scores.front().rho1 && s.rho2 == scores.front().rho1;
    });

    FitInfo local;
    std::vector<double> p1(k);
    for (int round = 1; round <= kMaxEmRounds; ++round) {
        local.iterations = round;
        for (std::size_t i = 0; i < k; ++i) p1[i] = posterior(m, scores[i]).first;

        CorrelationModel next;
        double sum_a = 0.0, sum_u = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double q1 = p1[i], q2 = 1.0 - p1[i];
            sum_a += q1 * scores[i].rho1 + q2 * scores[i].rho2;
            sum_u += q2 * scores[i].rho1 + q1 * scores[i].rho2;
        }
        next.mu_a = sum_a / n;
        next.mu_u = sum_u / n;
        double ss_a = 0.0, ss_u = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double q1 = p1[i], q2 = 1.0 - p1[i];
            const double r1 = scores[i].rho1, r2 = scores[i].rho2;
            ss_a += q1 * (r1 - next.mu_a) * (r1 - next.mu_a) + q2 * (r2 - next.mu_a) * (r2 - next.mu_a);
            ss_u += q2 * (r1 - next.mu_u) * (r1 - next.mu_u) + q1 * (r2 - next.mu_u) * (r2 - next.mu_u);
        }
        next.var_a = std::max(ss_a / n, kVarianceFloor);
        next.var_u = std::max(ss_u / n, kVarianceFloor);

        const double change = std::max({std::abs(next.mu_a - m.mu_a), std::abs(next.mu_u - m.mu_u),
                                        std::abs(next.var_a - m.var_a), std::abs(next.var_u - m.var_u)});
        m = next;
        if (change < kEmTolerance) {
            local.converged = true;
            break;
        }
    }

    if (m.mu_a < m.mu_u) {
        std::swap(m.mu_a, m.mu_u);
        std::swap(m.var_a, m.var_u);
    }
    local.degenerate = degenerate;
    if (info) *info = local;
    return m;
}

double posterior_log_odds(const CorrelationModel& model, const ScorePair& pair)
{
    const double sum = pair.rho1 + pair.rho2;
    const double bracket =
        (sum - 2.0 * model.mu_u) / (2.0 * model.var_u) - (sum - 2.0 * model.mu_a) / (2.0 * model.var_a);
    return (pair.rho1 - pair.rho2) * bracket;
}

std::pair<double, double> posterior(const CorrelationModel& model, const ScorePair& pair)
{
    const double l = posterior_log_odds(model, pair);
    return {logistic(l), logistic(-l)};
}

SoftLabels soft_labels(const CorrelationModel& model, const std::vector<ScorePair>& scores)
{
    SoftLabels out;
    out.model = model;
    out.p1.reserve(scores.size());
    out.p2.reserve(scores.size());
    for (const auto& s : scores) {
        auto [p1, p2] = posterior(model, s);
        out.p1.push_back(p1);
        out.p2.push_back(p2);
    }
    return out;
}

} // namespace aad
