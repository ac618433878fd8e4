#include "doctest.h"

#include "far/error.hpp"
#include "far/ftf.hpp"
#include "far/parallel.hpp"
#include "far/rng.hpp"
#include "far/tensor.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <limits>

using namespace far;

TEST_CASE("fills") {
    const RTensor z = make_tensor(Shape4{1, 2, 2, 2}, ZeroFill{});
    CHECK(z.numel() == 8);
    for (double v : z.data())
        CHECK(v == 0.0);
    const RTensor c = make_tensor(Shape4{1, 1, 1, 1}, ConstantFill{3.5});
    CHECK(c[0] == 3.5);
}

TEST_CASE("seeded uniform fill matches the reference generator") {
    const RTensor u = make_tensor(Shape4{2, 4, 3, 3}, UniformFill{-1.0, 1.0, 42});
    // Recorded from an independent implementation of the same generator.
    CHECK(u[0] == -0.8322740578802357);
    CHECK(u[1] == -0.2420394986746628);
    CHECK(u[71] == -0.07553345385176646);
    CHECK(testing::vec(u) == oracle::uniform(72, -1.0, 1.0, 42));

    CHECK(Rng(0).next() == 0x99ec5f36cb75f2b4ULL);
    oracle::Xoshiro ref(12345);
    Rng rng(12345);
    for (int i = 0; i < 1000; ++i)
        REQUIRE(rng.next() == ref());
}

TEST_CASE("seeded fills do not depend on thread count") {
    set_num_threads(1);
    const RTensor a = make_tensor(Shape4{3, 5, 7, 7}, UniformFill{0.0, 2.0, 9});
    set_num_threads(4);
    const RTensor b = make_tensor(Shape4{3, 5, 7, 7}, UniformFill{0.0, 2.0, 9});
    set_num_threads(1);
    CHECK(a == b);
}

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(Shape4::make(0, 1, 1, 1), ShapeError);
    const std::size_t big = std::numeric_limits<std::size_t>::max() / 2;
    CHECK_THROWS_AS(make_tensor(Dims{big, big}, ZeroFill{}), ShapeError);
    CHECK_THROWS_AS(RTensor(Dims{2, 2}, std::vector<double>(3)), ShapeError);
    CHECK_THROWS(RTensor(Dims{1}, std::vector<double>{std::numeric_limits<double>::quiet_NaN()}));
    CHECK_THROWS(RTensor(Dims{1}, std::vector<double>{std::numeric_limits<double>::infinity()}));
}

TEST_CASE("elementwise identities") {
    const RTensor x = testing::uniform(Shape4{2, 3, 4, 5}, 1);
    const RTensor ones = make_tensor(Shape4{2, 3, 4, 5}, ConstantFill{1.0});
    CHECK(mul(x, ones) == x);
    for (const auto held = scale(x, 0.0); double v : held.data())
        CHECK(v == 0.0);
    const RTensor twice = add(x, x);
    CHECK(max_abs_diff(twice, scale(x, 2.0)) == 0.0);
    CHECK(max_abs_diff(add(x, 1.5), add(x, ConstantFill{1.5}.value)) == 0.0);
    CHECK_THROWS_AS(add(x, testing::uniform(Shape4{2, 3, 4, 4}, 2)), ShapeError);
}

TEST_CASE("mask broadcast over frames matches the index loop") {
    for (std::size_t c = 1; c <= 3; ++c)
        for (std::size_t t = 1; t <= 4; ++t)
            for (std::size_t h = 1; h <= 5; ++h)
                for (std::size_t w = 1; w <= 5; w += 2) {
                    const Shape4 s{c, t, h, w};
                    const RTensor x = testing::uniform(s, c * 100 + t * 10 + h + w);
                    const RTensor m = make_tensor(Dims{c, h, w}, UniformFill{0.0, 1.0, 7 + w});
                    const RTensor y = mul(x, m);
                    for (std::size_t ci = 0; ci < c; ++ci)
                        for (std::size_t ti = 0; ti < t; ++ti)
                            for (std::size_t hi = 0; hi < h; ++hi)
                                for (std::size_t wi = 0; wi < w; ++wi)
                                    REQUIRE(y[s.index(ci, ti, hi, wi)] ==
                                            x[s.index(ci, ti, hi, wi)] * m[(ci * h + hi) * w + wi]);
                }
    CHECK_THROWS_AS(mul(testing::uniform(Shape4{1, 2, 2, 2}, 1), make_tensor(Dims{1, 2, 3}, ZeroFill{})),
                    ShapeError);
}

TEST_CASE("dynamic mask rejects negative entries") {
    CHECK_THROWS(DynamicMask(RTensor(Dims{1, 1, 2}, std::vector<double>{1.0, -0.5})));
    const DynamicMask m(RTensor(Dims{1, 1, 2}, std::vector<double>{1.0, 0.5}));
    CHECK(m(0, 0, 1) == 0.5);
}

TEST_CASE("ftf round trip") {
    Rng rng(5);
    for (int i = 0; i < 10000; ++i) {
        const std::size_t rank = 1 + rng.below(4);
        Dims d(rank);
        for (auto &e : d)
            e = 1 + rng.below(4);
        const RTensor t = make_tensor(d, UniformFill{-1e3, 1e3, static_cast<std::uint64_t>(i)});
        const AnyTensor back = decode_ftf(encode_ftf(t));
        REQUIRE(std::get<RTensor>(back) == t);
    }
    const CTensor z(Dims{2, 3}, std::vector<Complex>{{1, 2}, {3, -4}, {0, 0}, {-1e-300, 5}, {7, 8}, {9, 10}});
    CHECK(std::get<CTensor>(decode_ftf(encode_ftf(z))) == z);

    const auto path = std::filesystem::temp_directory_path() / "far_test_roundtrip.ftf";
    const RTensor t = testing::uniform(Shape4{2, 3, 4, 5}, 3);
    write_ftf(t, path);
    CHECK(read_ftf_real(path) == t);
    std::filesystem::remove(path);
}

TEST_CASE("ftf layout") {
    const RTensor t(Dims{2}, std::vector<double>{1.0, -2.0});
    const auto b = encode_ftf(t);
    REQUIRE(b.size() == 4 + 1 + 1 + 2 + 4 + 16);
    CHECK(std::string(b.begin(), b.begin() + 4) == "FTF1");
    CHECK(b[4] == 0);
    CHECK(b[5] == 1);
    CHECK(b[6] == 0);
    CHECK(b[7] == 0);
    CHECK(b[8] == 2);
    CHECK(b[9] == 0);
    // 1.0 little-endian
    CHECK(b[12 + 7] == 0x3f);
    CHECK(b[12 + 6] == 0xf0);
}

TEST_CASE("ftf rejects corrupt input") {
    try {
        decode_ftf({});
        FAIL("empty input accepted");
    } catch (const FormatError &e) {
        CHECK(std::string(e.what()).find("bad magic") != std::string::npos);
    }
    auto b = encode_ftf(testing::uniform(Shape4{1, 2, 2, 2}, 1));
    auto truncated = b;
    truncated.pop_back();
    CHECK_THROWS_AS(decode_ftf(truncated), FormatError);
    auto extra = b;
    extra.push_back(0);
    CHECK_THROWS_AS(decode_ftf(extra), FormatError);
    auto bad_rank = b;
    bad_rank[5] = 5;
    CHECK_THROWS_AS(decode_ftf(bad_rank), FormatError);
    auto bad_dtype = b;
    bad_dtype[4] = 2;
    CHECK_THROWS_AS(decode_ftf(bad_dtype), FormatError);
    auto bad_dims = b;
    bad_dims[8] = 3; // product no longer matches the payload
    CHECK_THROWS_AS(decode_ftf(bad_dims), FormatError);
    CHECK_THROWS_AS(read_ftf("/nonexistent/far.ftf"), IoError);
}
