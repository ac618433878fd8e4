#include "doctest.h"

#include "far/error.hpp"
#include "far/fo.hpp"
#include "far/synth.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace far;
using namespace far::synth;

TEST_CASE("standard scene layout") {
    const SceneSpec spec = standard_scene(1, 0.0);
    const Scene s = generate(spec);
    const Shape4 sh = s.features.shape4();
    CHECK(sh == Shape4{2, 8, 16, 16});
    CHECK(s.labels.at(0, 3, 3) == RegionKind::DynamicSalient);
    CHECK(s.labels.at(5, 3, 12) == RegionKind::StaticSalient);
    CHECK(s.labels.at(2, 12, 3) == RegionKind::DynamicNonsalient);
    CHECK(s.labels.at(7, 12, 12) == RegionKind::StaticNonsalient);
    CHECK(s.labels.at(0, 0, 0) == RegionKind::StaticNonsalient);
    for (std::size_t t = 0; t < 8; ++t) {
        const double osc = 1.0 + 0.5 * std::cos(2 * std::numbers::pi * 2.0 * double(t) / 8.0);
        CHECK(s.features[sh.index(1, t, 3, 3)] == doctest::Approx(osc));
        CHECK(s.features[sh.index(0, t, 3, 12)] == 1.0);
        CHECK(s.features[sh.index(0, t, 12, 3)] == doctest::Approx(0.2 * osc));
        CHECK(s.features[sh.index(0, t, 12, 12)] == 0.2);
        CHECK(s.features[sh.index(0, t, 0, 0)] == 0.0);
    }
}

TEST_CASE("determinism and noise") {
    CHECK(generate(standard_scene(5)).features == generate(standard_scene(5)).features);
    CHECK_FALSE(generate(standard_scene(5)).features == generate(standard_scene(6)).features);
    const Scene noisy = generate(standard_scene(5, 0.05));
    const Scene clean = generate(standard_scene(5, 0.0));
    const RTensor diff = add(noisy.features, scale(clean.features, -1));
    double sum = 0, sq = 0;
    for (double v : diff.data()) {
        sum += v;
        sq += v * v;
    }
    const double n = double(diff.numel());
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::sqrt(sq / n) == doctest::Approx(0.05).epsilon(0.1));
}

TEST_CASE("static region has zero mask") {
    SceneSpec spec;
    spec.shape = Shape4{1, 8, 8, 8};
    spec.regions = {{{2, 6, 2, 6}, RegionKind::StaticSalient}};
    const Scene s = generate(spec);
    for (const auto held = fo::compute_mask(s.features, {}).values(); double m : held.data())
        CHECK(std::abs(m) < 1e-12);
    for (const auto held = fo::disentangle(s.features, {}); double v : held.data())
        CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("nyquist oscillation mask") {
    SceneSpec spec;
    spec.shape = Shape4{1, 8, 4, 4};
    spec.regions = {{{0, 2, 0, 2}, RegionKind::DynamicSalient}};
    spec.motion = Motion{MotionKind::Oscillate, 4.0, 0.0};
    const Scene s = generate(spec);
    std::vector<oracle::cd> line(8);
    for (std::size_t t = 0; t < 8; ++t)
        line[t] = 1.0 + 0.5 * std::cos(std::numbers::pi * double(t));
    const auto F = oracle::dft(line, -1);
    // Only DC and Nyquist carry energy; DC has zero weight.
    const double expected = std::norm(F[4]) * oracle::quadratic_weight(4, 8);
    CHECK(expected == doctest::Approx(16.0 * std::numbers::pi * std::numbers::pi));
    const DynamicMask m = fo::compute_mask(s.features, {});
    CHECK(m(0, 1, 1) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(m(0, 3, 3) == 0.0);
}

TEST_CASE("translation moves labels with the content") {
    SceneSpec spec;
    spec.shape = Shape4{1, 4, 8, 8};
    spec.regions = {{{0, 2, 0, 2}, RegionKind::DynamicSalient}};
    spec.motion = Motion{MotionKind::Translate, 0.0, 1.5};
    const Scene s = generate(spec);
    const Shape4 sh = s.features.shape4();
    for (std::size_t t = 0; t < 4; ++t) {
        const std::size_t d = static_cast<std::size_t>(std::floor(1.5 * double(t)));
        for (std::size_t h = 0; h < 8; ++h)
            for (std::size_t w = 0; w < 8; ++w) {
                const bool inside = h < 2 && ((w + 8 - d % 8) % 8) < 2;
                CHECK((s.labels.at(t, h, w) == RegionKind::DynamicSalient) == inside);
                CHECK((s.features[sh.index(0, t, h, w)] == 1.0) == inside);
            }
    }
}

TEST_CASE("camera pan gives a roughly uniform mask") {
    SceneSpec spec = standard_scene(3, 0.0);
    spec.motion = Motion{MotionKind::Pan, 0.0, 1.0};
    const Scene s = generate(spec);
    const DynamicMask m = fo::compute_mask(s.features, {});
    // Normalise by region energy so amplitude differences do not dominate.
    const double ds = m(0, 3, 3) / (spec.amp_salient * spec.amp_salient);
    const double dn = m(0, 12, 3) / (spec.amp_nonsalient * spec.amp_nonsalient);
    const double ss = m(0, 3, 12) / (spec.amp_salient * spec.amp_salient);
    const double sn = m(0, 12, 12) / (spec.amp_nonsalient * spec.amp_nonsalient);
    for (double a : {ds, dn, ss, sn})
        for (double b : {ds, dn, ss, sn}) {
            REQUIRE(b > 0);
            CHECK(a / b <= 2.0);
        }
}

TEST_CASE("region means") {
    const Scene s = generate(standard_scene(2, 0.0));
    for (const auto &[k, v] : region_mean_amplitudes(make_tensor(s.features.shape4(), ZeroFill{}), s.labels))
        CHECK(v == 0.0);
    SceneSpec spec = standard_scene(2, 0.0);
    spec.motion = Motion{MotionKind::Oscillate, 0.0, 0.0};
    spec.regions = {{{1, 7, 1, 7}, RegionKind::StaticSalient}, {{9, 15, 9, 15}, RegionKind::DynamicNonsalient}};
    // At zero frequency a dynamic region sits at 1.5 times its amplitude.
    const Scene flat = generate(spec);
    const auto means = region_mean_amplitudes(flat.features, flat.labels);
    CHECK(means.at(RegionKind::StaticSalient) == 1.0);
    CHECK(means.at(RegionKind::DynamicNonsalient) == doctest::Approx(0.3));
    CHECK(means.count(RegionKind::DynamicSalient) == 0);
}

TEST_CASE("residual ordering on the standard scene") {
    int ordered = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Scene s = generate(standard_scene(seed, 0.05));
        const RTensor out = fo::disentangle(s.features, {}, {fo::Application::Residual, 1.0});
        const auto m = region_mean_amplitudes(out, s.labels);
        ordered += m.at(RegionKind::DynamicSalient) > m.at(RegionKind::StaticSalient) &&
                   m.at(RegionKind::StaticSalient) > m.at(RegionKind::DynamicNonsalient) &&
                   m.at(RegionKind::DynamicNonsalient) > m.at(RegionKind::StaticNonsalient);
    }
    CHECK(ordered >= 19);
}

TEST_CASE("scene text round trip and validation") {
    SceneSpec spec = standard_scene(11, 0.125);
    spec.motion = Motion{MotionKind::Translate, 0.0, 0.75};
    const std::string text = format_scene(spec);
    std::istringstream in(text);
    const SceneSpec back = parse_scene(in);
    CHECK(format_scene(back) == text);
    CHECK(generate(back).features == generate(spec).features);

    std::istringstream overlap("shape = 1 4 8 8\nregion = static-salient 0 4 0 4\nregion = dynamic-salient 2 6 2 6\n");
    CHECK_THROWS_AS(parse_scene(overlap), ArgumentError);
    std::istringstream outside("shape = 1 4 8 8\nregion = static-salient 0 9 0 4\n");
    CHECK_THROWS_AS(parse_scene(outside), ArgumentError);
    std::istringstream amps("shape = 1 4 8 8\namp_salient = 0.1\namp_nonsalient = 0.2\n");
    CHECK_THROWS_AS(parse_scene(amps), ArgumentError);
    std::istringstream bad_key("colour = red\n");
    CHECK_THROWS_AS(parse_scene(bad_key), ArgumentError);
    CHECK(parse_region_kind("dynamic-nonsalient") == RegionKind::DynamicNonsalient);
    CHECK(to_string(RegionKind::StaticSalient) == "static-salient");
}
