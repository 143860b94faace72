#pragma once

#include "aad/pencil.hpp"
#include "aad/signal.hpp"

#include <optional>
#include <span>

namespace aad {

struct SoftLabels;

/// Extra blocks of the two-encoder problem (unattended speaker u).
struct UnattendedBlocks
{
    Eigen::MatrixXd rxu;   // X^T S_u
    Eigen::MatrixXd rau;   // S_a^T S_u
    SymMatrix ruu;         // S_u^T S_u
};

/// Gram blocks summed over segments. Every segment is centered with the
/// per-channel means of the whole (stacked) training set before the
/// products are taken; the Gram matrices are not divided by T.
struct StatsBlocks
{
    SymMatrix rxx;         // X^T X
    SymMatrix raa;         // S_a^T S_a
    Eigen::MatrixXd rxa;   // X^T S_a
    std::optional<UnattendedBlocks> two;
};

/// Attended stream per segment selected by `labels`.
StatsBlocks build_single(const SegmentSet& segments, const Assignment& labels);

/// build_single restricted to the segments listed in `subset`, without
/// copying them. `labels` is indexed like `segments`.
StatsBlocks build_single(const SegmentSet& segments, const Assignment& labels,
                         std::span<const std::size_t> subset);

/// As build_single plus the unattended blocks.
StatsBlocks build_two(const SegmentSet& segments, const Assignment& labels);

/// Attended stream replaced by p1 * S1 + p2 * S2 per segment. Segments with
/// a degenerate pair (p1 or p2 exactly 0) use the selected stream as is,
/// so hard probabilities reproduce build_single bit for bit.
/// Throws Error(invalid_probability) on p outside [0, 1] or p1 + p2 != 1.
StatsBlocks build_soft(const SegmentSet& segments, const SoftLabels& probs);

/// R = [Rxx Rxa; Rxa^T Raa], D = blockdiag(Rxx, Raa). The ridge is applied
/// to Rxx and Raa in both R and D, so R - D keeps only the cross blocks.
PencilPair single_pencil(const StatsBlocks& stats, double ridge);

/// Three-block pencil with D = blockdiag(Rxx, [Raa Rau; Rau^T Ruu]). The
/// stacked audio block is ridge-loaded as one matrix.
PencilPair two_encoder_pencil(const StatsBlocks& stats, double ridge);

} // namespace aad
