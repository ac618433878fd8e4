#include "doctest.h"

#include "far/fo.hpp"
#include "far/synth.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>

using namespace far;
using fo::FreqWeightMode;
using fo::Norm;
using fo::WeightVariant;

namespace {

constexpr double pi = std::numbers::pi;

RTensor shift_time(const RTensor &f, std::size_t by) {
    const Shape4 s = f.shape4();
    std::vector<double> out(f.numel());
    for (std::size_t c = 0; c < s.c; ++c)
        for (std::size_t t = 0; t < s.t; ++t)
            for (std::size_t h = 0; h < s.h; ++h)
                for (std::size_t w = 0; w < s.w; ++w)
                    out[s.index(c, (t + by) % s.t, h, w)] = f[s.index(c, t, h, w)];
    return RTensor(f.dims(), std::move(out));
}

} // namespace

TEST_CASE("frequency weights") {
    const auto q = fo::frequency_weights(4, WeightVariant::Quadratic);
    CHECK(q[0] == 0.0);
    CHECK(q[1] == doctest::Approx(pi * pi / 4).epsilon(1e-15));
    CHECK(q[2] == doctest::Approx(pi * pi).epsilon(1e-15));
    CHECK(q[3] == doctest::Approx(pi * pi / 4).epsilon(1e-15));

    const auto l = fo::frequency_weights(4, WeightVariant::Literal);
    CHECK(l[0] == 0.0);
    CHECK(l[1] == doctest::Approx(std::exp(-pi)).epsilon(1e-14));
    CHECK(l[2] == doctest::Approx(std::exp(-2 * pi)).epsilon(1e-14));
    CHECK(l[3] == doctest::Approx(std::exp(-3 * pi)).epsilon(1e-14));

    for (std::size_t t = 1; t <= 17; ++t) {
        const auto w = fo::frequency_weights(t, WeightVariant::Quadratic);
        REQUIRE(w.size() == t);
        CHECK(w[0] == 0.0);
        for (std::size_t k = 1; k < t; ++k) {
            CHECK(w[k] == w[t - k]);
            CHECK(w[k] == doctest::Approx(oracle::quadratic_weight(k, t)).epsilon(1e-14));
            CHECK(fo::frequency_weights(t, WeightVariant::Literal)[k] ==
                  doctest::Approx(oracle::literal_weight(k, t)).epsilon(1e-14));
        }
    }
}

TEST_CASE("mask of the nyquist line") {
    const RTensor f(Dims{1, 4, 1, 1}, {1, -1, 1, -1});
    const DynamicMask m = fo::compute_mask(f, {});
    CHECK(m(0, 0, 0) == doctest::Approx(16 * pi * pi).epsilon(1e-14));
}

TEST_CASE("mask matches the loop oracle") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Shape4 s{2, 6, 4, 4};
        const RTensor f = testing::uniform(s, seed);
        for (bool literal : {false, true})
            for (bool l1 : {false, true}) {
                const FreqWeightMode mode{literal ? WeightVariant::Literal : WeightVariant::Quadratic,
                                          l1 ? Norm::L1 : Norm::L2};
                const auto ref = oracle::mask(testing::vec(f), s.c, s.t, s.h, s.w, literal, l1);
                CHECK(oracle::max_abs_diff(testing::vec(fo::compute_mask(f, mode).values()), ref) < 1e-9);
            }
    }
}

TEST_CASE("static input is annihilated") {
    const Shape4 s{2, 7, 3, 3};
    const RTensor base = testing::uniform(Shape4{2, 1, 3, 3}, 4);
    std::vector<double> v(s.numel());
    for (std::size_t c = 0; c < s.c; ++c)
        for (std::size_t t = 0; t < s.t; ++t)
            for (std::size_t i = 0; i < s.plane(); ++i)
                v[s.index(c, t, 0, 0) + i] = base[c * s.plane() + i];
    const RTensor f(s.dims(), v);
    for (const auto held = fo::compute_mask(f, {}).values(); double m : held.data())
        CHECK(std::abs(m) < 1e-12);
    for (const auto held = fo::disentangle(f, {}); double x : held.data())
        CHECK(std::abs(x) < 1e-12);
    for (const auto held = fo::disentangle(make_tensor(s, ZeroFill{}), {}); double x : held.data())
        CHECK(x == 0.0);
    // A single frame carries no motion.
    for (const auto held = fo::compute_mask(testing::uniform(Shape4{1, 1, 2, 2}, 3), {}).values(); double m : held.data())
        CHECK(m == 0.0);
}

TEST_CASE("mask invariants") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Shape4 s{1 + seed % 3, 2 + seed % 7, 1 + seed % 4, 2 + seed % 3};
        const RTensor f = testing::uniform(s, seed, -5.0, 5.0);
        const RTensor m = fo::compute_mask(f, {}).values();
        for (double v : m.data())
            CHECK(v >= 0.0);
        const RTensor shifted = fo::compute_mask(shift_time(f, 1 + seed % s.t), {}).values();
        CHECK(max_abs_diff(m, shifted) < 1e-10 * std::max(1.0, max_abs_diff(m, scale(m, 0.0))));

        const double alpha = 1.7;
        const RTensor ms = fo::compute_mask(scale(f, alpha), {}).values();
        for (std::size_t i = 0; i < m.numel(); ++i)
            CHECK(ms[i] == doctest::Approx(alpha * alpha * m[i]).epsilon(1e-9));
        const RTensor d = fo::disentangle(f, {});
        const RTensor ds = fo::disentangle(scale(f, alpha), {});
        for (std::size_t i = 0; i < d.numel(); ++i)
            CHECK(ds[i] == doctest::Approx(alpha * alpha * alpha * d[i]).epsilon(1e-9));
    }
}

TEST_CASE("higher tones get larger masks") {
    for (std::size_t t : {4u, 7u, 8u, 16u}) {
        double prev = -1.0;
        for (std::size_t k = 0; k <= t / 2; ++k) {
            std::vector<double> line(t);
            for (std::size_t i = 0; i < t; ++i)
                line[i] = std::cos(2 * pi * double(k * i) / double(t));
            const double m = fo::compute_mask(RTensor(Dims{1, t, 1, 1}, line), {}).values()[0];
            CHECK(m >= prev);
            prev = m;
        }
    }
}

TEST_CASE("strict and residual application") {
    const Shape4 s{2, 4, 3, 3};
    const RTensor f = testing::uniform(s, 8);
    const DynamicMask m = fo::compute_mask(f, {});
    const RTensor strict = fo::apply_mask(f, m, {});
    CHECK(max_abs_diff(strict, mul(f, m.values())) == 0.0);

    const RTensor norm = fo::normalize_per_channel(m);
    for (std::size_t c = 0; c < s.c; ++c) {
        double mx = 0.0, ref = 0.0;
        for (std::size_t i = 0; i < s.plane(); ++i) {
            mx = std::max(mx, norm[c * s.plane() + i]);
            ref = std::max(ref, m.values()[c * s.plane() + i]);
        }
        CHECK(mx == doctest::Approx(1.0));
        for (std::size_t i = 0; i < s.plane(); ++i)
            CHECK(norm[c * s.plane() + i] == doctest::Approx(m.values()[c * s.plane() + i] / ref));
    }
    const RTensor res = fo::apply_mask(f, m, {fo::Application::Residual, 0.5});
    for (std::size_t c = 0; c < s.c; ++c)
        for (std::size_t t = 0; t < s.t; ++t)
            for (std::size_t i = 0; i < s.plane(); ++i) {
                const std::size_t at = s.index(c, t, 0, 0) + i;
                CHECK(res[at] == doctest::Approx(f[at] * (1 + 0.5 * norm[c * s.plane() + i])).epsilon(1e-14));
            }
    const RTensor zero_mask = fo::apply_mask(f, DynamicMask(make_tensor(Dims{2, 3, 3}, ZeroFill{})),
                                             {fo::Application::Residual, 1.0});
    CHECK(zero_mask == f);
}

TEST_CASE("flop model") {
    const FlopReport one = fo::fo_flops(Shape4{1, 1, 1, 1});
    CHECK(one.term("temporal_fft") == 0.0);
    CHECK(one.term("apply") == 1.0);
    const Shape4 s{3, 8, 5, 5};
    const FlopReport r = fo::fo_flops(s);
    const double lines = 3 * 25;
    CHECK(r.term("temporal_fft") == lines * 5 * 8 * 3);
    CHECK(r.term("mask_reduction") == lines * 8 * 3);
    CHECK(r.term("apply") == double(s.numel()));
    CHECK(r.total() == r.term("temporal_fft") + r.term("mask_reduction") + r.term("apply"));
    // Doubling T multiplies the transform term by 2 log2(2T) / log2(T).
    const FlopReport d = fo::fo_flops(Shape4{3, 16, 5, 5});
    CHECK(d.term("temporal_fft") / r.term("temporal_fft") == doctest::Approx(2.0 * 4.0 / 3.0));
}
