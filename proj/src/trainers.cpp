#include "aad/trainers.hpp"

#include "aad/error.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <numeric>
#include <random>

namespace aad {

namespace {

constexpr double kSoftTolerance = 1e-3;

double thread_cpu_seconds()
{
    timespec ts{};
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

/// Records wall and thread CPU time from construction until stop().
class Stopwatch
{
public:
    Stopwatch() : _wall(std::chrono::steady_clock::now()), _cpu(thread_cpu_seconds()) {}

    void stop(TrainResult& result) const
    {
        result.wall_time_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - _wall).count();
        result.cpu_time_seconds = thread_cpu_seconds() - _cpu;
    }

private:
    std::chrono::steady_clock::time_point _wall;
    double _cpu;
};

void require_segments(const SegmentSet& segments, std::size_t min_k, const char* who)
{
    segments.validate();
    if (segments.size() < min_k) {
        fail(ErrorCode::invalid_argument,
             std::string(who) + ": needs at least " + std::to_string(min_k) + " segments, got " +
                 std::to_string(segments.size()));
    }
}

Assignment random_labels(std::size_t k, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    Assignment labels(k);
    for (auto& l : labels) l = 1 + static_cast<int>(rng() >> 63);
    return labels;
}

Assignment initial_labels(std::size_t k, const TrainConfig& cfg, const TrainHooks& hooks)
{
    if (hooks.initial_labels) {
        if (hooks.initial_labels->size() != k) {
            fail(ErrorCode::dimension_mismatch, "initial labels: length differs from segment count");
        }
        return *hooks.initial_labels;
    }
    return random_labels(k, cfg.seed);
}

CcaModel solve_single(const StatsBlocks& stats, const TrainConfig& cfg, int& solver_calls)
{
    const auto sol = solve_pencil(single_pencil(stats, cfg.ridge), cfg.q);
    ++solver_calls;
    return model_from_solution(sol, stats.rxx.dim(), stats.raa.dim(), false);
}

CcaModel solve_two(const StatsBlocks& stats, const TrainConfig& cfg, int& solver_calls)
{
    const auto sol = solve_pencil(two_encoder_pencil(stats, cfg.ridge), cfg.q);
    ++solver_calls;
    return model_from_solution(sol, stats.rxx.dim(), stats.raa.dim(), true);
}

void notify(const TrainHooks& hooks, int iteration, const StatsBlocks& stats)
{
    if (hooks.on_stats) hooks.on_stats(iteration, stats);
}

enum class HardVariant { single, two, sum_init };

// Alternates statistics -> GEVD -> reclassification until the labels stop
// changing. The sum-initialized variant trains its first round on both
// speakers with equal weight, so it has no labels to compare against until
// round two.
TrainResult run_hard(const SegmentSet& raw, const TrainConfig& cfg, const TrainHooks& hooks,
                     HardVariant variant)
{
    cfg.validate();
    require_segments(raw, 2, "hard-label trainer");
    Stopwatch clock;
    const SegmentSet data = prepare_segments(raw, cfg);
    const std::size_t k = data.size();

    TrainResult result;
    Assignment labels;
    if (variant != HardVariant::sum_init) labels = initial_labels(k, cfg, hooks);

    for (int it = 1; it <= cfg.max_iters; ++it) {
        const bool blended = variant == HardVariant::sum_init && it == 1;
        StatsBlocks stats = blended                       ? build_soft(data, SoftLabels::uniform(k))
                            : variant == HardVariant::two ? build_two(data, labels)
                                                          : build_single(data, labels);
        notify(hooks, it, stats);
        result.model = variant == HardVariant::two ? solve_two(stats, cfg, result.solver_calls)
                                                   : solve_single(stats, cfg, result.solver_calls);
        Assignment next = classify_all(result.model, data).labels;
        result.label_history.push_back(next);
        result.iterations_run = it;
        const bool same = !blended && next == labels;
        labels = std::move(next);
        if (same) {
            result.converged = true;
            break;
        }
    }
    result.final_labels = labels;
    clock.stop(result);
    return result;
}

// Column scaling so each random decoder component has unit energy over the
// data, and each encoder component unit energy averaged over both speakers.
CcaModel random_model(const SegmentSet& data, const TrainConfig& cfg)
{
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    CcaModel model;
    model.wx = Eigen::MatrixXd::NullaryExpr(data.eeg_dim(), cfg.q, [&] { return normal(rng); });
    model.wa = Eigen::MatrixXd::NullaryExpr(data.audio_dim(), cfg.q, [&] { return normal(rng); });
    model.eigenvalues = Eigen::VectorXd::Zero(cfg.q);

    Eigen::VectorXd ex = Eigen::VectorXd::Zero(cfg.q);
    Eigen::VectorXd ea = Eigen::VectorXd::Zero(cfg.q);
    for (std::size_t k = 0; k < data.size(); ++k) {
        const auto& x = data.eeg[k].samples;
        ex += ((x.rowwise() - x.colwise().mean()) * model.wx).colwise().squaredNorm().transpose();
        for (const auto* s : {&data.spk1[k].samples, &data.spk2[k].samples}) {
            ea += 0.5 * ((s->rowwise() - s->colwise().mean()) * model.wa).colwise().squaredNorm().transpose();
        }
    }
    for (int q = 0; q < cfg.q; ++q) {
        if (ex(q) > 0.0) model.wx.col(q) /= std::sqrt(ex(q));
        if (ea(q) > 0.0) model.wa.col(q) /= std::sqrt(ea(q));
    }
    return model;
}

double max_abs_change(const SoftLabels& a, const SoftLabels& b)
{
    double change = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) change = std::max(change, std::abs(a.p1[k] - b.p1[k]));
    return change;
}

} // namespace

std::string_view method_name(Method m) noexcept
{
    switch (m) {
    case Method::single: return "single";
    case Method::two: return "two";
    case Method::soft: return "soft";
    case Method::sum_init: return "sum_init";
    case Method::cv_single: return "cv_single";
    case Method::supervised: return "supervised";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept
{
    for (Method m : kAllMethods) {
        if (method_name(m) == name) return m;
    }
    return std::nullopt;
}

void TrainConfig::validate() const
{
    if (q < 1) fail(ErrorCode::invalid_config, "q must be >= 1");
    if (max_iters < 1) fail(ErrorCode::invalid_config, "max_iters must be >= 1");
    if (!(ridge >= 0.0)) fail(ErrorCode::invalid_config, "ridge must be >= 0");
    if (eeg_lags.min_lag > eeg_lags.max_lag || audio_lags.min_lag > audio_lags.max_lag) {
        fail(ErrorCode::invalid_config, "lag range with min > max");
    }
}

SegmentSet prepare_segments(const SegmentSet& raw, const TrainConfig& cfg)
{
    return embed_segments(raw, cfg.eeg_lags, cfg.audio_lags);
}

CcaModel model_from_solution(const PencilSolution& sol, Eigen::Index eeg_dim, Eigen::Index audio_dim,
                             bool two_encoders)
{
    const Eigen::Index expected = eeg_dim + (two_encoders ? 2 : 1) * audio_dim;
    if (sol.vectors.rows() != expected) {
        fail(ErrorCode::dimension_mismatch, "model_from_solution: eigenvector length does not match blocks");
    }
    CcaModel model;
    model.wx = sol.vectors.topRows(eeg_dim);
    model.wa = sol.vectors.middleRows(eeg_dim, audio_dim);
    if (two_encoders) model.wu = sol.vectors.bottomRows(audio_dim);
    model.eigenvalues = sol.eigenvalues;
    return model;
}

TrainResult train_single(const SegmentSet& segments, const TrainConfig& cfg, const TrainHooks& hooks)
{
    return run_hard(segments, cfg, hooks, HardVariant::single);
}

TrainResult train_two(const SegmentSet& segments, const TrainConfig& cfg, const TrainHooks& hooks)
{
    return run_hard(segments, cfg, hooks, HardVariant::two);
}

TrainResult train_sum_init(const SegmentSet& segments, const TrainConfig& cfg, const TrainHooks& hooks)
{
    return run_hard(segments, cfg, hooks, HardVariant::sum_init);
}

TrainResult train_soft(const SegmentSet& raw, const TrainConfig& cfg, const TrainHooks& hooks)
{
    cfg.validate();
    require_segments(raw, 4, "train_soft");
    Stopwatch clock;
    const SegmentSet data = prepare_segments(raw, cfg);
    const std::size_t k = data.size();

    TrainResult result;
    result.model = random_model(data, cfg);
    std::optional<SoftLabels> previous;
    SoftLabels probs;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        if (it == 1 && hooks.initial_probs) {
            if (hooks.initial_probs->size() != k) {
                fail(ErrorCode::dimension_mismatch, "initial probabilities: length differs from segment count");
            }
            probs = *hooks.initial_probs;
        } else {
            const auto scores = classify_all(result.model, data).scores;
            probs = soft_labels(fit_correlation_model(scores), scores);
        }
        const StatsBlocks stats = build_soft(data, probs);
        notify(hooks, it, stats);
        result.model = solve_single(stats, cfg, result.solver_calls);
        result.label_history.push_back(probs.argmax());
        result.iterations_run = it;
        const bool settled = previous && max_abs_change(probs, *previous) < kSoftTolerance;
        previous = probs;
        if (settled) {
            result.converged = true;
            break;
        }
    }
    result.final_labels = probs.argmax();
    result.final_probs = std::move(probs);
    clock.stop(result);
    return result;
}

TrainResult train_cv_single(const SegmentSet& raw, const TrainConfig& cfg, const TrainHooks& hooks)
{
    cfg.validate();
    require_segments(raw, 3, "train_cv_single");
    Stopwatch clock;
    const SegmentSet data = prepare_segments(raw, cfg);
    const std::size_t k = data.size();

    TrainResult result;
    Assignment labels = initial_labels(k, cfg, hooks);
    std::vector<std::size_t> others(k - 1);
    for (int it = 1; it <= cfg.max_iters; ++it) {
        // Every held-out prediction uses the previous round's labels; the
        // new labels are applied together after the sweep.
        Assignment next(k);
        for (std::size_t held = 0; held < k; ++held) {
            std::size_t j = 0;
            for (std::size_t i = 0; i < k; ++i) {
                if (i != held) others[j++] = i;
            }
            const StatsBlocks stats = build_single(data, labels, others);
            const CcaModel model = solve_single(stats, cfg, result.solver_calls);
            next[held] = classify_segment(model, data.eeg[held], data.spk1[held], data.spk2[held]).first;
        }
        result.label_history.push_back(next);
        result.iterations_run = it;
        const bool same = next == labels;
        labels = std::move(next);
        if (same) {
            result.converged = true;
            break;
        }
    }
    const StatsBlocks stats = build_single(data, labels);
    notify(hooks, result.iterations_run, stats);
    result.model = solve_single(stats, cfg, result.solver_calls);
    result.final_labels = labels;
    clock.stop(result);
    return result;
}

TrainResult train_supervised(const SegmentSet& raw, const Assignment& truth, const TrainConfig& cfg,
                             const TrainHooks& hooks)
{
    cfg.validate();
    require_segments(raw, 1, "train_supervised");
    Stopwatch clock;
    const SegmentSet data = prepare_segments(raw, cfg);

    TrainResult result;
    const StatsBlocks stats = build_single(data, truth);
    notify(hooks, 1, stats);
    result.model = solve_single(stats, cfg, result.solver_calls);
    result.final_labels = classify_all(result.model, data).labels;
    result.label_history.push_back(result.final_labels);
    result.iterations_run = 1;
    result.converged = true;
    clock.stop(result);
    return result;
}

TrainResult train(const SegmentSet& segments, const TrainConfig& cfg, const Assignment* truth,
                  const TrainHooks& hooks)
{
    switch (cfg.method) {
    case Method::single: return train_single(segments, cfg, hooks);
    case Method::two: return train_two(segments, cfg, hooks);
    case Method::soft: return train_soft(segments, cfg, hooks);
    case Method::sum_init: return train_sum_init(segments, cfg, hooks);
    case Method::cv_single: return train_cv_single(segments, cfg, hooks);
    case Method::supervised:
        if (!truth) fail(ErrorCode::invalid_argument, "supervised training needs ground-truth labels");
        return train_supervised(segments, *truth, cfg, hooks);
    }
    fail(ErrorCode::invalid_argument, "unknown method");
}

} // namespace aad
