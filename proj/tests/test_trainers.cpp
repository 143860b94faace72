#include "aad/error.hpp"
#include "aad/synth.hpp"
#include "aad/trainers.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace aad;

namespace {

SynthDataset make(std::size_t k, std::uint64_t seed, double sa = snr_preset::high_attended,
                  double su = snr_preset::high_unattended)
{
    SynthConfig sc;
    sc.n_segments = k;
    sc.snr_attended = sa;
    sc.snr_unattended = su;
    sc.seed = seed;
    return generate(sc);
}

bool same_model(const CcaModel& a, const CcaModel& b)
{
    return a.wx == b.wx && a.wa == b.wa && a.eigenvalues == b.eigenvalues;
}

} // namespace

TEST_CASE("method names round-trip")
{
    for (Method m : kAllMethods) CHECK(parse_method(method_name(m)) == m);
    CHECK_FALSE(parse_method("bogus").has_value());
}

TEST_CASE("config validation")
{
    TrainConfig cfg;
    cfg.q = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.max_iters = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.ridge = -1;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("single-encoder self-training at high SNR")
{
    int good = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto ds = make(30, 300 + s);
        TrainConfig cfg;
        cfg.seed = s;
        const auto r = train_single(ds.segments, cfg);
        good += accuracy(r.final_labels, ds.truth) > 0.9;
        CHECK(r.label_history.size() == static_cast<std::size_t>(r.iterations_run));
        CHECK(r.wall_time_seconds >= 0.0);
    }
    CHECK(good >= 18);
}

TEST_CASE("truth is a fixed point at high SNR")
{
    const auto ds = make(30, 41);
    TrainHooks hooks;
    hooks.initial_labels = ds.truth;
    for (auto* trainer : {&train_single, &train_two}) {
        const auto r = (*trainer)(ds.segments, TrainConfig{}, hooks);
        CHECK(r.converged);
        CHECK(r.iterations_run <= 2);
        CHECK(r.final_labels == ds.truth);
    }
}

TEST_CASE("two segments terminate")
{
    const auto ds = make(2, 5);
    TrainConfig cfg;
    cfg.max_iters = 5;
    for (auto* trainer : {&train_single, &train_two, &train_sum_init}) {
        const auto r = (*trainer)(ds.segments, cfg, {});
        CHECK(r.iterations_run >= 1);
        CHECK(r.iterations_run <= 5);
        CHECK(r.final_labels.size() == 2);
    }
}

TEST_CASE("too few segments")
{
    const auto ds = make(3, 6);
    CHECK_THROWS_AS(train_soft(ds.segments, TrainConfig{}), Error);
    CHECK_THROWS_AS(train_single(ds.segments.subset({0}), TrainConfig{}), Error);
}

TEST_CASE("two-encoder pencil dimension and held-out scores")
{
    const auto ds = make(40, 8);
    TrainConfig cfg;
    const auto eeg_lagged = ds.segments.eeg_dim() * cfg.eeg_lags.count();
    const auto audio_lagged = ds.segments.audio_dim() * cfg.audio_lags.count();
    TrainHooks hooks;
    Eigen::Index dim = 0;
    hooks.initial_labels = subset(ds.truth, [] {
        std::vector<std::size_t> v(20);
        std::iota(v.begin(), v.end(), 0);
        return v;
    }());
    hooks.on_stats = [&](int, const StatsBlocks& s) {
        dim = two_encoder_pencil(s, cfg.ridge).r.dim();
    };
    std::vector<std::size_t> train_idx(20), test_idx(20);
    std::iota(train_idx.begin(), train_idx.end(), 0);
    std::iota(test_idx.begin(), test_idx.end(), 20);
    cfg.max_iters = 1;
    const auto r = train_two(ds.segments.subset(train_idx), cfg, hooks);
    CHECK(dim == eeg_lagged + 2 * audio_lagged);
    REQUIRE(r.model.wu.has_value());

    const auto test = prepare_segments(ds.segments.subset(test_idx), cfg);
    const auto truth = subset(ds.truth, test_idx);
    const auto scores = classify_all(r.model, test).scores;
    double att = 0, unatt = 0;
    for (std::size_t k = 0; k < scores.size(); ++k) {
        att += truth[k] == 1 ? scores[k].rho1 : scores[k].rho2;
        unatt += truth[k] == 1 ? scores[k].rho2 : scores[k].rho1;
    }
    CHECK(att > unatt);
}

TEST_CASE("pinned hard probabilities reproduce one single-encoder update")
{
    const auto ds = make(12, 9, snr_preset::default_attended, snr_preset::default_unattended);
    const Assignment start{1, 2, 2, 1, 1, 1, 2, 2, 1, 2, 1, 2};
    TrainConfig cfg;
    cfg.max_iters = 1;
    TrainHooks hard;
    hard.initial_labels = start;
    TrainHooks soft;
    soft.initial_probs = SoftLabels::from_assignment(start);
    const auto a = train_single(ds.segments, cfg, hard);
    const auto b = train_soft(ds.segments, cfg, soft);
    CHECK(same_model(a.model, b.model));
}

TEST_CASE("soft training at high SNR")
{
    double mean_p = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto ds = make(30, 500 + s);
        TrainConfig cfg;
        cfg.seed = s;
        bool valid = true;
        TrainHooks hooks;
        const auto r = train_soft(ds.segments, cfg, hooks);
        REQUIRE(r.final_probs.has_value());
        const auto& p = *r.final_probs;
        double m = 0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            valid = valid && p.p1[k] >= 0 && p.p1[k] <= 1 && std::fabs(p.p1[k] + p.p2[k] - 1) <= 1e-9;
            m += ds.truth[k] == 1 ? p.p1[k] : p.p2[k];
        }
        CHECK(valid);
        CHECK(r.final_labels == p.argmax());
        mean_p += m / p.size();
    }
    CHECK(mean_p / 20 > 0.8);
}

TEST_CASE("soft probabilities stay valid at every iteration")
{
    const auto ds = make(20, 10, snr_preset::default_attended, snr_preset::default_unattended);
    TrainConfig cfg;
    cfg.seed = 3;
    TrainHooks hooks;
    int calls = 0;
    hooks.on_stats = [&](int it, const StatsBlocks& s) {
        ++calls;
        CHECK(it == calls);
        CHECK(s.rxx.matrix().allFinite());
    };
    const auto r = train_soft(ds.segments, cfg, hooks);
    CHECK(calls == r.iterations_run);
}

TEST_CASE("sum initialization starts from the blended statistics")
{
    const auto ds = make(10, 11, snr_preset::default_attended, snr_preset::default_unattended);
    TrainConfig cfg;
    std::optional<StatsBlocks> first;
    TrainHooks hooks;
    hooks.on_stats = [&](int it, const StatsBlocks& s) {
        if (it == 1) first = s;
    };
    const auto r = train_sum_init(ds.segments, cfg, hooks);
    REQUIRE(first.has_value());
    const auto ref = build_soft(prepare_segments(ds.segments, cfg), SoftLabels::uniform(10));
    CHECK(first->rxx.matrix() == ref.rxx.matrix());
    CHECK(first->raa.matrix() == ref.raa.matrix());
    CHECK(first->rxa == ref.rxa);
    CHECK(r.iterations_run >= 2);

    TrainConfig other = cfg;
    other.seed = 999;
    const auto r2 = train_sum_init(ds.segments, other);
    CHECK(r2.final_labels == r.final_labels);
    CHECK(same_model(r2.model, r.model));
}

TEST_CASE("sum initialization is not worse than random starts with little data")
{
    double sum_acc = 0, single_acc = 0;
    int trials = 0;
    for (std::size_t k : {5, 10, 15}) {
        for (std::uint64_t s = 0; s < 8; ++s) {
            const auto ds = make(k, 700 + 10 * k + s, snr_preset::default_attended, snr_preset::default_unattended);
            TrainConfig cfg;
            cfg.seed = s;
            sum_acc += accuracy(train_sum_init(ds.segments, cfg).final_labels, ds.truth);
            single_acc += accuracy(train_single(ds.segments, cfg).final_labels, ds.truth);
            ++trials;
        }
    }
    CHECK(trials >= 20);
    CHECK(sum_acc >= single_acc);
}

TEST_CASE("cross-validated variant")
{
    const auto ds = make(12, 12);
    TrainConfig cfg;
    cfg.seed = 1;
    const auto r = train_cv_single(ds.segments, cfg);
    CHECK(r.solver_calls == r.iterations_run * 12 + 1);
    CHECK(accuracy(r.final_labels, ds.truth) >= accuracy(train_single(ds.segments, cfg).final_labels, ds.truth) - 0.1);
}

TEST_CASE("supervised reference")
{
    const auto ds = make(20, 13);
    TrainConfig cfg;
    const auto r = train_supervised(ds.segments, ds.truth, cfg);
    CHECK(r.converged);
    CHECK(r.iterations_run == 1);
    CHECK(r.solver_calls == 1);

    std::vector<std::size_t> perm(20);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    const auto p = train_supervised(ds.segments.subset(perm), subset(ds.truth, perm), cfg);
    CHECK((p.model.wx - r.model.wx).norm() <= 1e-8 * r.model.wx.norm());
    CHECK((p.model.wa - r.model.wa).norm() <= 1e-8 * r.model.wa.norm());

    CHECK_THROWS_AS(train(ds.segments, TrainConfig{Method::supervised}), Error);
    TrainConfig sup;
    sup.method = Method::supervised;
    CHECK(train(ds.segments, sup, &ds.truth).final_labels == r.final_labels);
}

TEST_CASE("seeded runs are reproducible")
{
    const auto ds = make(15, 14, snr_preset::default_attended, snr_preset::default_unattended);
    for (Method m : {Method::single, Method::two, Method::soft, Method::cv_single}) {
        TrainConfig cfg;
        cfg.method = m;
        cfg.seed = 77;
        const auto a = train(ds.segments, cfg);
        const auto b = train(ds.segments, cfg);
        CHECK(a.final_labels == b.final_labels);
        CHECK(same_model(a.model, b.model));
    }
}
