#include "aad/error.hpp"
#include "aad/synth.hpp"
#include "aad/trainers.hpp"

#include <doctest.h>

#include <numeric>

using namespace aad;

namespace {

double supervised_inductive(const SynthConfig& sc, std::size_t n_train)
{
    const auto ds = generate(sc);
    std::vector<std::size_t> tr(n_train), te(sc.n_segments - n_train);
    std::iota(tr.begin(), tr.end(), 0);
    std::iota(te.begin(), te.end(), n_train);
    const TrainConfig cfg;
    const auto r = train_supervised(ds.segments.subset(tr), subset(ds.truth, tr), cfg);
    return accuracy(classify_all(r.model, prepare_segments(ds.segments.subset(te), cfg)).labels,
                    subset(ds.truth, te));
}

} // namespace

TEST_CASE("shapes and labels")
{
    SynthConfig sc;
    sc.n_segments = 7;
    sc.segment_len_samples = 300;
    sc.d_eeg = 5;
    sc.d_audio = 2;
    const auto ds = generate(sc);
    REQUIRE(ds.segments.size() == 7);
    CHECK(ds.truth.size() == 7);
    for (int l : ds.truth) CHECK((l == 1 || l == 2));
    CHECK(ds.segments.eeg[3].samples.rows() == 300);
    CHECK(ds.segments.eeg[3].samples.cols() == 5);
    CHECK(ds.segments.spk2[6].samples.cols() == 2);
    CHECK(ds.segments.eeg[0].sample_rate_hz == 20.0);
}

TEST_CASE("identical seeds give identical data")
{
    SynthConfig sc;
    sc.n_segments = 4;
    sc.seed = 17;
    const auto a = generate(sc);
    const auto b = generate(sc);
    CHECK(a.truth == b.truth);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(a.segments.eeg[k].samples == b.segments.eeg[k].samples);
        CHECK(a.segments.spk1[k].samples == b.segments.spk1[k].samples);
    }
    sc.seed = 18;
    CHECK(generate(sc).segments.eeg[0].samples != a.segments.eeg[0].samples);
}

TEST_CASE("both labels occur in a long draw")
{
    SynthConfig sc;
    sc.n_segments = 40;
    sc.segment_len_samples = 100;
    const auto ds = generate(sc);
    const auto ones = std::count(ds.truth.begin(), ds.truth.end(), 1);
    CHECK(ones > 5);
    CHECK(ones < 35);
}

TEST_CASE("equal SNRs decode at chance")
{
    double acc = 0;
    for (std::uint64_t s = 0; s < 4; ++s) {
        SynthConfig sc;
        sc.n_segments = 80;
        sc.snr_attended = snr_preset::default_attended;
        sc.snr_unattended = snr_preset::default_attended;
        sc.seed = 40 + s;
        acc += supervised_inductive(sc, 30);
    }
    CHECK(std::fabs(acc / 4 - 0.5) < 0.1);
}

TEST_CASE("strong attended response without distractor decodes perfectly")
{
    SynthConfig sc;
    sc.n_segments = 60;
    sc.snr_attended = snr_preset::high_attended;
    sc.snr_unattended = 0.0;
    sc.seed = 3;
    CHECK(supervised_inductive(sc, 30) == 1.0);
}

TEST_CASE("higher SNR is easier")
{
    double low = 0, high = 0;
    for (std::uint64_t s = 0; s < 3; ++s) {
        SynthConfig sc;
        sc.n_segments = 60;
        sc.seed = 60 + s;
        sc.snr_attended = snr_preset::default_attended / 4;
        sc.snr_unattended = snr_preset::default_unattended / 4;
        low += supervised_inductive(sc, 20);
        sc.snr_attended = snr_preset::high_attended;
        sc.snr_unattended = snr_preset::high_unattended;
        high += supervised_inductive(sc, 20);
    }
    CHECK(high > low);
}

TEST_CASE("invalid synthetic configs")
{
    auto code_of = [](SynthConfig sc) {
        try {
            generate(sc);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::io_error;
    };
    SynthConfig sc;
    sc.snr_unattended = sc.snr_attended * 2;
    CHECK(code_of(sc) == ErrorCode::invalid_config);
    sc = {};
    sc.n_segments = 0;
    CHECK(code_of(sc) == ErrorCode::invalid_config);
    sc = {};
    sc.d_eeg = 0;
    CHECK(code_of(sc) == ErrorCode::invalid_config);
    sc = {};
    sc.snr_unattended = -1;
    CHECK(code_of(sc) == ErrorCode::invalid_config);
}
