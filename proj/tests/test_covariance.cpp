#include "oracles.hpp"

#include "aad/covariance.hpp"
#include "aad/error.hpp"
#include "aad/labeler.hpp"

#include <doctest.h>

using namespace aad;
using Eigen::MatrixXd;

namespace {

SegmentSet random_set(std::size_t k, Eigen::Index t, Eigen::Index dx, Eigen::Index da, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    SegmentSet s;
    for (std::size_t i = 0; i < k; ++i) {
        s.eeg.push_back({oracle::random_matrix(t, dx, rng).array() + 0.3, 20.0});
        s.spk1.push_back({oracle::random_matrix(t, da, rng).array() - 1.0, 20.0});
        s.spk2.push_back({oracle::random_matrix(t, da, rng).array() * 2.0, 20.0});
    }
    return s;
}

std::vector<MatrixXd> streams(const std::vector<TimeSeries>& v)
{
    std::vector<MatrixXd> out;
    for (const auto& ts : v) out.push_back(ts.samples);
    return out;
}

std::vector<MatrixXd> picked(const SegmentSet& s, const Assignment& labels, bool attended)
{
    std::vector<MatrixXd> out;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const bool one = (labels[k] == 1) == attended;
        out.push_back(one ? s.spk1[k].samples : s.spk2[k].samples);
    }
    return out;
}

double rel_err(const MatrixXd& a, const MatrixXd& b)
{
    return (a - b).norm() / std::max(1.0, b.norm());
}

} // namespace

TEST_CASE("self-correlation of one segment")
{
    std::mt19937_64 rng(1);
    const MatrixXd x = oracle::random_matrix(50, 2, rng);
    SegmentSet s;
    s.eeg.push_back({x, 20.0});
    s.spk1.push_back({x, 20.0});
    s.spk2.push_back({-x, 20.0});
    const auto b = build_single(s, {1});
    CHECK(b.rxa == b.rxx.matrix());
    CHECK(b.raa.matrix() == b.rxx.matrix());
}

TEST_CASE("single-encoder blocks match the concatenation oracle")
{
    const auto s = random_set(3, 40, 4, 2, 3);
    const Assignment labels{1, 2, 2};
    const auto b = build_single(s, labels);
    const auto x = streams(s.eeg);
    const auto a = picked(s, labels, true);
    CHECK(rel_err(b.rxx.matrix(), oracle::stacked_cross(x, x)) < 1e-12);
    CHECK(rel_err(b.raa.matrix(), oracle::stacked_cross(a, a)) < 1e-12);
    CHECK(rel_err(b.rxa, oracle::stacked_cross(x, a)) < 1e-12);
    CHECK_FALSE(b.two.has_value());
}

TEST_CASE("flipping every label swaps the speakers")
{
    const auto s = random_set(4, 30, 3, 2, 4);
    SegmentSet swapped = s;
    std::swap(swapped.spk1, swapped.spk2);
    const auto b = build_single(s, {1, 2, 1, 1});
    const auto f = build_single(swapped, {2, 1, 2, 2});
    CHECK(b.rxa == f.rxa);
    CHECK(b.raa.matrix() == f.raa.matrix());
}

TEST_CASE("subset overload matches building on a copy")
{
    const auto s = random_set(5, 30, 3, 1, 5);
    const Assignment labels{1, 2, 2, 1, 2};
    const std::vector<std::size_t> idx{0, 2, 3};
    const auto viaspan = build_single(s, labels, idx);
    const auto viacopy = build_single(s.subset(idx), subset(labels, idx));
    CHECK(rel_err(viaspan.rxx.matrix(), viacopy.rxx.matrix()) < 1e-14);
    CHECK(rel_err(viaspan.rxa, viacopy.rxa) < 1e-14);
    CHECK(rel_err(viaspan.raa.matrix(), viacopy.raa.matrix()) < 1e-14);
}

TEST_CASE("two-encoder blocks")
{
    const auto s = random_set(3, 40, 4, 2, 6);
    const Assignment labels{2, 1, 2};
    const auto b = build_two(s, labels);
    REQUIRE(b.two.has_value());
    const auto x = streams(s.eeg);
    const auto a = picked(s, labels, true);
    const auto u = picked(s, labels, false);
    CHECK(rel_err(b.two->rxu, oracle::stacked_cross(x, u)) < 1e-12);
    CHECK(rel_err(b.two->rau, oracle::stacked_cross(a, u)) < 1e-12);
    CHECK(rel_err(b.two->ruu.matrix(), oracle::stacked_cross(u, u)) < 1e-12);
    CHECK(rel_err(b.rxa, oracle::stacked_cross(x, a)) < 1e-12);

    const auto ones = build_two(s, {1, 1, 1});
    CHECK(rel_err(ones.raa.matrix(), oracle::stacked_cross(streams(s.spk1), streams(s.spk1))) < 1e-12);
    CHECK(rel_err(ones.two->ruu.matrix(), oracle::stacked_cross(streams(s.spk2), streams(s.spk2))) < 1e-12);

    const auto pencil = two_encoder_pencil(b, 1e-6);
    CHECK(pencil.r.dim() == 4 + 2 * 2);
    CHECK(pencil.d.dim() == 4 + 2 * 2);
}

TEST_CASE("hard probabilities reproduce build_single bitwise")
{
    const auto s = random_set(6, 35, 3, 2, 7);
    const Assignment labels{1, 2, 2, 1, 1, 2};
    const auto hard = build_single(s, labels);
    const auto soft = build_soft(s, SoftLabels::from_assignment(labels));
    CHECK(soft.rxx.matrix() == hard.rxx.matrix());
    CHECK(soft.raa.matrix() == hard.raa.matrix());
    CHECK(soft.rxa == hard.rxa);
}

TEST_CASE("soft statistics match the weighted-stream oracle")
{
    const auto s = random_set(3, 40, 3, 2, 8);
    SoftLabels p;
    p.p1 = {0.2, 0.5, 0.9};
    for (double v : p.p1) p.p2.push_back(1.0 - v);
    std::vector<MatrixXd> mixed;
    for (std::size_t k = 0; k < 3; ++k) mixed.push_back(p.p1[k] * s.spk1[k].samples + p.p2[k] * s.spk2[k].samples);
    const auto b = build_soft(s, p);
    const auto x = streams(s.eeg);
    CHECK(rel_err(b.rxa, oracle::stacked_cross(x, mixed)) < 1e-12);
    CHECK(rel_err(b.raa.matrix(), oracle::stacked_cross(mixed, mixed)) < 1e-12);

    const auto half = build_soft(s, SoftLabels::uniform(3));
    std::vector<MatrixXd> sum;
    for (std::size_t k = 0; k < 3; ++k) sum.push_back(0.5 * (s.spk1[k].samples + s.spk2[k].samples));
    CHECK(rel_err(half.raa.matrix(), oracle::stacked_cross(sum, sum)) < 1e-12);
}

TEST_CASE("invalid probabilities")
{
    const auto s = random_set(2, 20, 2, 1, 9);
    auto code_of = [&](std::vector<double> p1, std::vector<double> p2) {
        SoftLabels p;
        p.p1 = std::move(p1);
        p.p2 = std::move(p2);
        try {
            build_soft(s, p);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::io_error;
    };
    CHECK(code_of({1.2, 0.5}, {-0.2, 0.5}) == ErrorCode::invalid_probability);
    CHECK(code_of({0.6, 0.5}, {0.6, 0.5}) == ErrorCode::invalid_probability);
    CHECK(code_of({0.5, 0.5}, {0.5, 0.5 + 1e-12}) == ErrorCode::io_error);   // within tolerance: accepted
    CHECK(code_of({0.5}, {0.5}) == ErrorCode::dimension_mismatch);
}

TEST_CASE("single pencil layout and ridge")
{
    const auto s = random_set(3, 40, 3, 2, 10);
    const auto b = build_single(s, {1, 1, 2});
    const auto p = single_pencil(b, 0.0);
    CHECK(p.r.dim() == 5);
    const MatrixXd diff = p.r.matrix() - p.d.matrix();
    CHECK(diff.topLeftCorner(3, 3).cwiseAbs().maxCoeff() == 0.0);
    CHECK(diff.bottomRightCorner(2, 2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(diff.topRightCorner(3, 2) == b.rxa);
    CHECK(p.d.matrix().topRightCorner(3, 2).cwiseAbs().maxCoeff() == 0.0);

    const auto loaded = single_pencil(b, 0.1);
    const double shift = 0.1 * b.rxx.trace() / 3;
    CHECK(loaded.d(0, 0) - b.rxx(0, 0) == doctest::Approx(shift));
    CHECK(loaded.r(0, 0) == loaded.d(0, 0));
}
