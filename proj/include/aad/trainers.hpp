#pragma once

#include "aad/covariance.hpp"
#include "aad/labeler.hpp"
#include "aad/scoring.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aad {

enum class Method { single, two, soft, sum_init, cv_single, supervised };

inline constexpr Method kAllMethods[] = {Method::single,   Method::two,       Method::soft,
                                         Method::sum_init, Method::cv_single, Method::supervised};

std::string_view method_name(Method m) noexcept;
std::optional<Method> parse_method(std::string_view name) noexcept;

struct TrainConfig
{
    Method method = Method::single;
    int q = 2;
    double ridge = 1e-6;
    int max_iters = 20;
    std::uint64_t seed = 0;
    // EEG 0..150 ms after the stimulus, envelope 250 ms of history, at 20 Hz.
    LagSpec eeg_lags{-3, 0};
    LagSpec audio_lags{0, 5};

    void validate() const;
};

/// Optional overrides used by tests and by callers that want to start a
/// trainer from a known state.
struct TrainHooks
{
    /// Replaces the random initial labels of single / two / cv_single.
    std::optional<Assignment> initial_labels;
    /// Replaces the first-round probabilities of soft.
    std::optional<SoftLabels> initial_probs;
    /// Called with the statistics of every iteration (1-based).
    std::function<void(int, const StatsBlocks&)> on_stats;
};

struct TrainResult
{
    CcaModel model;
    Assignment final_labels;               // transductive predictions
    std::optional<SoftLabels> final_probs; // soft only
    std::vector<Assignment> label_history; // labels predicted at each iteration
    int iterations_run = 0;
    bool converged = false;
    int solver_calls = 0;
    double wall_time_seconds = 0.0;
    double cpu_time_seconds = 0.0;
};

/// Lag-embeds the segments the way the trainers do before building
/// statistics; use it to prepare held-out data for classify_all.
SegmentSet prepare_segments(const SegmentSet& raw, const TrainConfig& cfg);

/// Splits a pencil solution into decoder / encoder weights.
CcaModel model_from_solution(const PencilSolution& sol, Eigen::Index eeg_dim, Eigen::Index audio_dim,
                             bool two_encoders);

// All trainers take raw (unembedded) segments and report models that act on
// prepare_segments() output.

TrainResult train_single(const SegmentSet& segments, const TrainConfig& cfg, const TrainHooks& hooks = {});
TrainResult train_two(const SegmentSet& segments, const TrainConfig& cfg, const TrainHooks& hooks = {});
TrainResult train_soft(const SegmentSet& segments, const TrainConfig& cfg, const TrainHooks& hooks = {});
TrainResult train_sum_init(const SegmentSet& segments, const TrainConfig& cfg, const TrainHooks& hooks = {});
TrainResult train_cv_single(const SegmentSet& segments, const TrainConfig& cfg, const TrainHooks& hooks = {});
TrainResult train_supervised(const SegmentSet& segments, const Assignment& truth, const TrainConfig& cfg,
                             const TrainHooks& hooks = {});

/// Dispatches on cfg.method. `truth` is required for the supervised method
/// and ignored otherwise.
TrainResult train(const SegmentSet& segments, const TrainConfig& cfg, const Assignment* truth = nullptr,
                  const TrainHooks& hooks = {});

} // namespace aad
