#include "aad/covariance.hpp"

#include "aad/error.hpp"
#include "aad/labeler.hpp"

#include <cmath>
#include <string>

namespace aad {

namespace {

// Attended (and, for the two-encoder problem, unattended) stream of one
// segment. Pointers refer into the SegmentSet or into `storage`.
struct SegmentStreams
{
    const Eigen::MatrixXd* attended = nullptr;
    const Eigen::MatrixXd* unattended = nullptr;
    Eigen::MatrixXd storage;
};

void check_labels(const SegmentSet& segments, const Assignment& labels)
{
    segments.validate();
    if (labels.size() != segments.size()) {
        fail(ErrorCode::dimension_mismatch,
             "labels: expected " + std::to_string(segments.size()) + " entries, got " +
                 std::to_string(labels.size()));
    }
    for (int label : labels) {
        if (label != 1 && label != 2) fail(ErrorCode::invalid_argument, "labels must be 1 or 2");
    }
}

Eigen::RowVectorXd stacked_mean(const std::vector<const Eigen::MatrixXd*>& parts)
{
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(parts.front()->cols());
    Eigen::Index rows = 0;
    for (const auto* p : parts) {
        sum += p->colwise().sum();
        rows += p->rows();
    }
    return sum / static_cast<double>(rows);
}

Eigen::MatrixXd lower_to_full(const Eigen::MatrixXd& lower)
{
    return lower.selfadjointView<Eigen::Lower>();
}

StatsBlocks accumulate(const SegmentSet& segments, const std::vector<SegmentStreams>& streams, bool two,
                       std::span<const std::size_t> subset = {})
{
    std::vector<const Eigen::MatrixXd*> xs, as, us;
    const auto add = [&](std::size_t k) {
        xs.push_back(&segments.eeg[k].samples);
        as.push_back(streams[k].attended);
        if (two) us.push_back(streams[k].unattended);
    };
    if (subset.empty()) {
        for (std::size_t k = 0; k < segments.size(); ++k) add(k);
    } else {
        for (auto k : subset) {
            if (k >= segments.size()) fail(ErrorCode::invalid_argument, "segment subset index out of range");
            add(k);
        }
    }
    const std::size_t k_total = xs.size();
    const Eigen::RowVectorXd mx = stacked_mean(xs);
    const Eigen::RowVectorXd ma = stacked_mean(as);
    const Eigen::RowVectorXd mu = two ? stacked_mean(us) : Eigen::RowVectorXd();

    const auto dx = mx.size();
    const auto ds = ma.size();
    Eigen::MatrixXd rxx = Eigen::MatrixXd::Zero(dx, dx);
    Eigen::MatrixXd raa = Eigen::MatrixXd::Zero(ds, ds);
    Eigen::MatrixXd rxa = Eigen::MatrixXd::Zero(dx, ds);
    Eigen::MatrixXd rxu, rau, ruu;
    if (two) {
        rxu = Eigen::MatrixXd::Zero(dx, ds);
        rau = Eigen::MatrixXd::Zero(ds, ds);
        ruu = Eigen::MatrixXd::Zero(ds, ds);
    }

    Eigen::MatrixXd xc, ac, uc;
    for (std::size_t k = 0; k < k_total; ++k) {
        xc = xs[k]->rowwise() - mx;
        ac = as[k]->rowwise() - ma;
        rxx.selfadjointView<Eigen::Lower>().rankUpdate(xc.transpose());
        raa.selfadjointView<Eigen::Lower>().rankUpdate(ac.transpose());
        rxa.noalias() += xc.transpose() * ac;
        if (two) {
            uc = us[k]->rowwise() - mu;
            ruu.selfadjointView<Eigen::Lower>().rankUpdate(uc.transpose());
            rxu.noalias() += xc.transpose() * uc;
            rau.noalias() += ac.transpose() * uc;
        }
    }

    StatsBlocks out{SymMatrix(lower_to_full(rxx)), SymMatrix(lower_to_full(raa)), rxa, std::nullopt};
    if (two) out.two = UnattendedBlocks{rxu, rau, SymMatrix(lower_to_full(ruu))};
    return out;
}

std::vector<SegmentStreams> hard_streams(const SegmentSet& segments, const Assignment& labels)
{
    std::vector<SegmentStreams> streams(segments.size());
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const bool first = labels[k] == 1;
        streams[k].attended = first ? &segments.spk1[k].samples : &segments.spk2[k].samples;
        streams[k].unattended = first ? &segments.spk2[k].samples : &segments.spk1[k].samples;
    }
    return streams;
}

} // namespace

StatsBlocks build_single(const SegmentSet& segments, const Assignment& labels)
{
    check_labels(segments, labels);
    return accumulate(segments, hard_streams(segments, labels), false);
}

StatsBlocks build_single(const SegmentSet& segments, const Assignment& labels,
                         std::span<const std::size_t> subset)
{
    check_labels(segments, labels);
    if (subset.empty()) fail(ErrorCode::invalid_argument, "build_single: empty segment subset");
    return accumulate(segments, hard_streams(segments, labels), false, subset);
}

StatsBlocks build_two(const SegmentSet& segments, const Assignment& labels)
{
    check_labels(segments, labels);
    return accumulate(segments, hard_streams(segments, labels), true);
}

StatsBlocks build_soft(const SegmentSet& segments, const SoftLabels& probs)
{
    segments.validate();
    if (probs.p1.size() != segments.size() || probs.p2.size() != segments.size()) {
        fail(ErrorCode::dimension_mismatch, "build_soft: probability count differs from segment count");
    }
    std::vector<SegmentStreams> streams(segments.size());
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const double p1 = probs.p1[k], p2 = probs.p2[k];
        if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0) || std::abs(p1 + p2 - 1.0) > 1e-9) {
            fail(ErrorCode::invalid_probability,
                 "build_soft: segment " + std::to_string(k) + " has invalid pair (" + std::to_string(p1) +
                     ", " + std::to_string(p2) + ")");
        }
        if (p2 == 0.0) {
            streams[k].attended = &segments.spk1[k].samples;
        } else if (p1 == 0.0) {
            streams[k].attended = &segments.spk2[k].samples;
        } else {
            streams[k].storage = p1 * segments.spk1[k].samples + p2 * segments.spk2[k].samples;
            streams[k].attended = &streams[k].storage;
        }
    }
    return accumulate(segments, streams, false);
}

PencilPair single_pencil(const StatsBlocks& stats, double ridge)
{
    const SymMatrix xx = apply_ridge(stats.rxx, ridge);
    const SymMatrix aa = apply_ridge(stats.raa, ridge);
    const auto dx = xx.dim();
    const auto ds = aa.dim();

    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dx + ds, dx + ds);
    d.topLeftCorner(dx, dx) = xx.matrix();
    d.bottomRightCorner(ds, ds) = aa.matrix();
    Eigen::MatrixXd r = d;
    r.topRightCorner(dx, ds) = stats.rxa;
    r.bottomLeftCorner(ds, dx) = stats.rxa.transpose();
    return PencilPair{SymMatrix(r), SymMatrix(d), ridge};
}

PencilPair two_encoder_pencil(const StatsBlocks& stats, double ridge)
{
    if (!stats.two) fail(ErrorCode::invalid_argument, "two_encoder_pencil: statistics lack unattended blocks");
    const auto& u = *stats.two;
    const SymMatrix xx = apply_ridge(stats.rxx, ridge);
    const auto dx = xx.dim();
    const auto ds = stats.raa.dim();

    Eigen::MatrixXd audio(2 * ds, 2 * ds);
    audio << stats.raa.matrix(), u.rau, u.rau.transpose(), u.ruu.matrix();
    const SymMatrix audio_loaded = apply_ridge(SymMatrix(audio), ridge);

    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dx + 2 * ds, dx + 2 * ds);
    d.topLeftCorner(dx, dx) = xx.matrix();
    d.bottomRightCorner(2 * ds, 2 * ds) = audio_loaded.matrix();
    Eigen::MatrixXd r = d;
    Eigen::MatrixXd cross(dx, 2 * ds);
    cross << stats.rxa, u.rxu;
    r.topRightCorner(dx, 2 * ds) = cross;
    r.bottomLeftCorner(2 * ds, dx) = cross.transpose();
    return PencilPair{SymMatrix(r), SymMatrix(d), ridge};
}

} // namespace aad
