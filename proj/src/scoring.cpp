#include "aad/scoring.hpp"

#include "aad/error.hpp"

#include <cmath>
#include <string>

namespace aad {

double pearson(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b)
{
    const Eigen::VectorXd ac = a.array() - a.mean();
    const Eigen::VectorXd bc = b.array() - b.mean();
    const double saa = ac.squaredNorm();
    const double sbb = bc.squaredNorm();
    if (saa <= 0.0 || sbb <= 0.0) return 0.0;
    return ac.dot(bc) / (std::sqrt(saa) * std::sqrt(sbb));
}

double score_segment(const CcaModel& model, const TimeSeries& x, const TimeSeries& s)
{
    if (x.channels() != model.wx.rows() || s.channels() != model.wa.rows() ||
        x.length() != s.length() || model.wa.cols() != model.wx.cols()) {
        fail(ErrorCode::dimension_mismatch,
             "score_segment: segment (" + std::to_string(x.channels()) + ", " +
                 std::to_string(s.channels()) + ") vs model (" + std::to_string(model.wx.rows()) +
                 ", " + std::to_string(model.wa.rows()) + ")");
    }
    const Eigen::MatrixXd px = x.samples * model.wx;
    const Eigen::MatrixXd ps = s.samples * model.wa;
    double rho = 0.0;
    for (Eigen::Index q = 0; q < px.cols(); ++q) rho += pearson(px.col(q), ps.col(q));
    return rho;
}

std::pair<int, ScorePair> classify_segment(const CcaModel& model, const TimeSeries& x,
                                           const TimeSeries& s1, const TimeSeries& s2)
{
    ScorePair pair{score_segment(model, x, s1), score_segment(model, x, s2)};
    return {pair.rho1 >= pair.rho2 ? 1 : 2, pair};
}

Classification classify_all(const CcaModel& model, const SegmentSet& segments)
{
    Classification out;
    out.labels.reserve(segments.size());
    out.scores.reserve(segments.size());
    for (std::size_t k = 0; k < segments.size(); ++k) {
        auto [label, pair] = classify_segment(model, segments.eeg[k], segments.spk1[k], segments.spk2[k]);
        out.labels.push_back(label);
        out.scores.push_back(pair);
    }
    return out;
}

} // namespace aad
