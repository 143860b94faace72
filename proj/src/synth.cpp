#include "aad/synth.hpp"

#include "aad/error.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace aad {

namespace {

// Envelope-like features: white noise through two cascaded one-pole
// low-pass filters, standardized per column.
Eigen::MatrixXd smooth_features(Eigen::Index t, int d, std::mt19937_64& rng)
{
    constexpr double kPole = 0.7;
    constexpr Eigen::Index kBurnIn = 50;
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd out(t, d);
    for (int c = 0; c < d; ++c) {
        double y1 = 0.0, y2 = 0.0;
        for (Eigen::Index i = -kBurnIn; i < t; ++i) {
            y1 = kPole * y1 + (1.0 - kPole) * normal(rng);
            y2 = kPole * y2 + (1.0 - kPole) * y1;
            if (i >= 0) out(i, c) = y2;
        }
    }
    out.rowwise() -= out.colwise().mean();
    const Eigen::RowVectorXd sd = (out.colwise().squaredNorm() / static_cast<double>(t)).cwiseSqrt();
    for (int c = 0; c < d; ++c) {
        if (sd(c) > 0.0) out.col(c) /= sd(c);
    }
    return out;
}

// Random causal FIR kernels, one per (tap, feature) -> channel.
std::vector<Eigen::MatrixXd> random_kernels(int taps, int d_audio, int d_eeg, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Eigen::MatrixXd> h(taps);
    for (auto& tap : h) tap = Eigen::MatrixXd::NullaryExpr(d_audio, d_eeg, [&] { return normal(rng); });
    return h;
}

void scale_to_power(Eigen::MatrixXd& m, double power)
{
    const double current = m.squaredNorm() / static_cast<double>(m.size());
    if (current > 0.0) m *= std::sqrt(power / current);
}

} // namespace

void SynthConfig::validate() const
{
    if (n_segments < 1 || segment_len_samples < 2) fail(ErrorCode::invalid_config, "synth: empty recording");
    if (d_eeg < 1 || d_audio < 1) fail(ErrorCode::invalid_config, "synth: channel counts must be >= 1");
    if (forward_lags < 1) fail(ErrorCode::invalid_config, "synth: forward_lags must be >= 1");
    if (!(sample_rate_hz > 0.0)) fail(ErrorCode::invalid_config, "synth: sample rate must be positive");
    if (!(snr_unattended >= 0.0) || !(snr_attended >= snr_unattended)) {
        fail(ErrorCode::invalid_config, "synth: need snr_attended >= snr_unattended >= 0");
    }
}

SynthDataset generate(const SynthConfig& cfg)
{
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    const auto len = static_cast<Eigen::Index>(cfg.segment_len_samples);
    const auto t_total = len * static_cast<Eigen::Index>(cfg.n_segments);

    SynthDataset out;
    out.config = cfg;
    out.truth.resize(cfg.n_segments);
    for (auto& label : out.truth) label = 1 + static_cast<int>(rng() >> 63);

    const Eigen::MatrixXd s1 = smooth_features(t_total, cfg.d_audio, rng);
    const Eigen::MatrixXd s2 = smooth_features(t_total, cfg.d_audio, rng);
    // One forward kernel for both streams; attention only changes the gain.
    const auto h = random_kernels(cfg.forward_lags, cfg.d_audio, cfg.d_eeg, rng);

    Eigen::MatrixXd attended = Eigen::MatrixXd::Zero(t_total, cfg.d_eeg);
    Eigen::MatrixXd unattended = Eigen::MatrixXd::Zero(t_total, cfg.d_eeg);
    for (Eigen::Index t = 0; t < t_total; ++t) {
        const bool first = out.truth[static_cast<std::size_t>(t / len)] == 1;
        const Eigen::MatrixXd& sa = first ? s1 : s2;
        const Eigen::MatrixXd& su = first ? s2 : s1;
        for (int j = 0; j < cfg.forward_lags && j <= t; ++j) {
            attended.row(t).noalias() += sa.row(t - j) * h[j];
            unattended.row(t).noalias() += su.row(t - j) * h[j];
        }
    }
    scale_to_power(attended, cfg.snr_attended);
    scale_to_power(unattended, cfg.snr_unattended);

    std::normal_distribution<double> normal(0.0, 1.0);
    const Eigen::MatrixXd noise = Eigen::MatrixXd::NullaryExpr(t_total, cfg.d_eeg, [&] { return normal(rng); });

    const TimeSeries eeg{attended + unattended + noise, cfg.sample_rate_hz};
    out.segments = cut_segments(eeg, TimeSeries{s1, cfg.sample_rate_hz}, TimeSeries{s2, cfg.sample_rate_hz},
                                cfg.segment_len_samples);
    return out;
}

} // namespace aad
