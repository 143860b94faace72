#pragma once

#include "aad/signal.hpp"

#include <cstdint>

namespace aad {

/// Planted forward model: every EEG channel is the same causal FIR response
/// applied to both speakers, weighted by attention, plus white noise. SNRs
/// are power ratios against unit-variance noise, averaged over channels.
struct SynthConfig
{
    std::size_t n_segments = 30;
    std::size_t segment_len_samples = 1200;   // 60 s at 20 Hz
    int d_eeg = 16;
    int d_audio = 1;
    double snr_attended = 0.0004;
    double snr_unattended = 0.00002;
    int forward_lags = 4;
    double sample_rate_hz = 20.0;
    std::uint64_t seed = 0;

    /// Throws Error(invalid_config). Equal SNRs are accepted (chance-level
    /// control data).
    void validate() const;
};

namespace snr_preset {
// Supervised inductive accuracy around 0.9 at K = 30; unsupervised
// variants land between chance and that ceiling at K <= 15.
inline constexpr double default_attended = 0.0004;
inline constexpr double default_unattended = 0.00002;
// Iteration-1 accuracy well below the converged one, leaving the most room
// for self-training to improve on its random start.
inline constexpr double medium_attended = 0.0003;
inline constexpr double medium_unattended = 0.000015;
// Unsupervised accuracy saturates near 1.
inline constexpr double high_attended = 0.004;
inline constexpr double high_unattended = 0.0002;
} // namespace snr_preset

struct SynthDataset
{
    SegmentSet segments;
    Assignment truth;
    SynthConfig config;
};

/// Deterministic given cfg.seed.
SynthDataset generate(const SynthConfig& cfg);

} // namespace aad
