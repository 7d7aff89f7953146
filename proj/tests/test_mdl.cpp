#include "doctest.h"

#include "oracles.hpp"

#include "mdlseg/error.hpp"
#include "mdlseg/mdl.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace mdlseg;

namespace {

MdlParams fixed(int bits, std::optional<std::size_t> cap = std::nullopt) {
    MdlParams p;
    p.precision_bits = bits;
    p.max_segment_length = cap;
    return p;
}

double rel_diff(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }

FeatureSequence noise(std::size_t n, std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return oracle::random_instance(n, d, oracle::Structure::Noise, rng);
}

FeatureSequence synth(std::vector<std::size_t> lengths, std::uint64_t seed, std::size_t d = 2) {
    SynthConfig c;
    c.segment_lengths = std::move(lengths);
    c.d = d;
    c.separation = 10.0;
    c.noise_sigma = 0.1;
    c.seed = seed;
    return synth_sequence(c).features;
}

} // namespace

TEST_CASE("single-point segment costs 2dm plus the floored density") {
    const FeatureSequence seq(1, 1, {0.375});
    const double expected = 64.0 + oracle::neg_log2_normal(0.375, 0.375, 1e-4);
    const double bits = segment_bitcost(seq, 0, 1, fixed(32));
    CHECK(bits == doctest::Approx(expected).epsilon(1e-12));
    CHECK(bits == doctest::Approx(64.0 - 5.318).epsilon(1e-4));
    CHECK(bits == doctest::Approx(64.0 + 0.5 * std::log2(2.0 * std::numbers::pi * 1e-4)).epsilon(1e-12));
}

TEST_CASE("identical vectors pay only the floored normalizer") {
    const FeatureSequence seq(7, 1, std::vector<double>(7, -2.5));
    const double data = segment_bitcost(seq, 0, 7, fixed(16)) - 2.0 * 16;
    CHECK(data == doctest::Approx(7 * 0.5 * std::log2(2.0 * std::numbers::pi * 1e-4)).epsilon(1e-12));
}

TEST_CASE("segment cost matches a point-by-point density evaluation") {
    const auto seq = noise(6, 2, 11);
    CHECK(rel_diff(segment_bitcost(seq, 0, 6, fixed(64)), oracle::segment_bits(seq, 0, 6, 64, 1e-4)) < 1e-12);
    const auto wide = noise(30, 5, 12);
    for (std::size_t i = 0; i < 30; i += 7) {
        for (std::size_t j = i + 1; j <= 30; j += 5) {
            CHECK(rel_diff(segment_bitcost(wide, i, j, fixed(32)), oracle::segment_bits(wide, i, j, 32, 1e-4)) <
                  1e-12);
        }
    }
}

TEST_CASE("variance floor and parameter cost") {
    const FeatureSequence seq(4, 1, {0.0, 0.001, 0.0, 0.001});  // ML variance 2.5e-7
    MdlParams p = fixed(64);
    CHECK(rel_diff(segment_bitcost(seq, 0, 4, p), oracle::segment_bits(seq, 0, 4, 64, 1e-4)) < 1e-12);
    p.var_floor = 1e-9;
    CHECK(rel_diff(segment_bitcost(seq, 0, 4, p), oracle::segment_bits(seq, 0, 4, 64, 1e-9)) < 1e-12);
    CHECK(segment_bitcost(seq, 0, 4, fixed(64)) - segment_bitcost(seq, 0, 4, fixed(16)) == doctest::Approx(96.0));
}

TEST_CASE("segment cost argument checks") {
    const auto seq = noise(5, 1, 1);
    CHECK_THROWS_AS(segment_bitcost(seq, 2, 2, fixed(64)), ValidationError);
    CHECK_THROWS_AS(segment_bitcost(seq, 3, 1, fixed(64)), ValidationError);
    CHECK_THROWS_AS(segment_bitcost(seq, 0, 6, fixed(64)), ValidationError);
    CHECK_THROWS_AS(segment_bitcost(seq, 0, 4, fixed(64, 3)), ValidationError);
}

TEST_CASE("parameter validation") {
    CHECK(MdlParams{}.max_segment_length == std::optional<std::size_t>(300));
    CHECK(MdlParams{}.var_floor == 1e-4);
    MdlParams p;
    p.precision_bits = 8;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = {};
    p.max_segment_length = 0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = {};
    p.var_floor = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = {};
    CHECK(p.resolved_for(FeatureSequence(2, 1, {0.5, 1.0})).precision_bits == 16);
    p.precision_bits = 64;
    CHECK(p.resolved_for(FeatureSequence(2, 1, {0.5, 1.0})).precision_bits == 64);
}

TEST_CASE("cost table coverage") {
    const auto four = build_cost_table(noise(4, 1, 2), fixed(64));
    CHECK(four.entry_count() == 10);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j <= 4; ++j) {
            CHECK(four.contains(i, j));
        }
    }

    const auto capped = build_cost_table(noise(300, 2, 3), fixed(64, 10));
    std::size_t expected = 0;
    for (std::size_t i = 0; i < 300; ++i) {
        for (std::size_t j = i + 1; j <= 300; ++j) {
            if (j - i <= 10) {
                ++expected;
                CHECK(capped.contains(i, j));
            } else {
                CHECK_FALSE(capped.admissible(i, j));
            }
        }
    }
    CHECK(capped.entry_count() == expected);
    CHECK_THROWS_AS((void)capped.cost(0, 11), ValidationError);
}

TEST_CASE("cost table agrees with direct recomputation") {
    std::mt19937_64 rng(5);
    for (auto kind : {oracle::Structure::Constant, oracle::Structure::Clusters, oracle::Structure::Noise}) {
        const auto seq = oracle::random_instance(40, 3, kind, rng);
        const auto params = fixed(64);
        const auto table = build_cost_table(seq, params);
        for (std::size_t i = 0; i < 40; ++i) {
            for (std::size_t j = i + 1; j <= 40; ++j) {
                CHECK(rel_diff(table.cost(i, j), segment_bitcost(seq, i, j, params)) <= 1e-9);
            }
        }
    }
}

TEST_CASE("cost table does not depend on the thread count") {
    const auto seq = synth({30, 25, 45}, 9, 4);
    const auto one = build_cost_table(seq, fixed(64, 60), 1);
    for (unsigned threads : {2U, 3U, 8U}) {
        const auto many = build_cost_table(seq, fixed(64, 60), threads);
        bool identical = true;
        for (std::size_t i = 0; i < seq.n(); ++i) {
            for (std::size_t j = i + 1; j <= seq.n(); ++j) {
                if (one.admissible(i, j)) {
                    identical = identical && one.cost(i, j) == many.cost(i, j);
                }
            }
        }
        CHECK(identical);
    }
}

TEST_CASE("dp on a single frame") {
    const FeatureSequence seq(1, 2, {1.0, 2.0});
    const auto table = build_cost_table(seq, fixed(16));
    const auto r = dp_segment(table);
    CHECK(r.segmentation.breaks().empty());
    CHECK(r.total_bits == table.cost(0, 1));
}

TEST_CASE("dp breaks ties toward the earlier break") {
    SegmentCostTable table(2, std::nullopt);
    table.set(0, 1, 1.0);
    table.set(1, 2, 1.0);
    table.set(0, 2, 2.0);
    const auto r = dp_segment(table);
    CHECK(r.segmentation.breaks() == std::vector<std::size_t>{1});
    CHECK(r.total_bits == 2.0);
}

TEST_CASE("dp reports a missing table entry") {
    SegmentCostTable table(3, std::nullopt);
    table.set(0, 1, 1.0);
    table.set(1, 3, 1.0);
    CHECK_THROWS_AS(dp_segment(table), ValidationError);
}

// Ten synthetic frames are stored as doubles, so m = 64 and an extra
// segment costs 2*2*64 bits: more than splitting saves. The exhaustive
// search decides that case; at m = 16 the true breaks are optimal.
TEST_CASE("two well separated halves") {
    const auto seq = synth({5, 5}, 7);
    const auto dp = segment_sequence(seq);
    const auto bf = brute_force_segment(seq, {});
    CHECK(bf.partitions_evaluated == 512);
    CHECK(bf.best.segmentation == dp.segmentation);
    CHECK(bf.best.total_bits == dp.total_bits);

    const auto cheap = segment_sequence(seq, fixed(16));
    CHECK(cheap.segmentation.breaks() == std::vector<std::size_t>{5});
    CHECK(brute_force_segment(seq, fixed(16)).best.segmentation == cheap.segmentation);
}

TEST_CASE("three segments of four") {
    const auto seq = synth({4, 4, 4}, 1);
    CHECK(brute_force_segment(seq, {}).best.segmentation == segment_sequence(seq).segmentation);
    const auto cheap = segment_sequence(seq, fixed(16));
    CHECK(cheap.segmentation.breaks() == std::vector<std::size_t>{4, 8});
    CHECK(brute_force_segment(seq, fixed(16)).best.segmentation == cheap.segmentation);
}

TEST_CASE("longer synthetic segments are found at the inferred precision") {
    const auto seq = synth({40, 25, 33}, 7);
    CHECK(segment_sequence(seq).segmentation.breaks() == std::vector<std::size_t>{40, 65});
}

TEST_CASE("exhaustive search basics") {
    const FeatureSequence twins(2, 1, {3.0, 3.0});
    CHECK(brute_force_segment(twins, {}).best.segmentation.breaks().empty());
    CHECK(brute_force_segment(noise(3, 1, 4), fixed(64)).partitions_evaluated == 4);
    CHECK(brute_force_segment(noise(6, 1, 4), fixed(64, 2)).partitions_evaluated == 13);  // compositions of 6 into 1s and 2s
    CHECK_THROWS_WITH_AS(brute_force_segment(noise(21, 1, 4), fixed(64)),
                         doctest::Contains("instance too large for exhaustive search"), ValidationError);
}

TEST_CASE("dp equals exhaustive search on random instances") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(t % 11);
        const auto seq = oracle::random_instance(n, 1 + t % 3, static_cast<oracle::Structure>(t % 3), rng);
        const auto params = fixed(t % 2 ? 32 : 64, t % 4 == 0 ? std::optional<std::size_t>(1 + n / 2) : std::nullopt);
        const auto dp = segment_sequence(seq, params);
        const auto bf = brute_force_segment(seq, params).best;
        CHECK(dp.segmentation == bf.segmentation);
        CHECK(dp.total_bits == bf.total_bits);
    }
}

TEST_CASE("constant sequences stay whole") {
    for (std::size_t n : {1U, 2U, 7U, 12U, 150U}) {
        const FeatureSequence seq(n, 3, std::vector<double>(n * 3, 0.75));
        CHECK(segment_sequence(seq).segmentation.breaks().empty());
        if (n <= 12) {
            CHECK(brute_force_segment(seq, {}).best.segmentation.breaks().empty());
        }
    }
}

TEST_CASE("total bits add up over the chosen segments") {
    const auto seq = synth({12, 30, 7, 22}, 21, 3);
    const auto params = fixed(64);
    const auto r = segment_sequence(seq, params);
    double sum = 0.0;
    for (const auto& s : r.segmentation.segments()) {
        sum += segment_bitcost(seq, s.start, s.end, params);
    }
    CHECK(rel_diff(r.total_bits, sum) <= 1e-9);
}

TEST_CASE("splitting an optimal segment never helps") {
    const auto seq = synth({15, 25, 10}, 5, 2);
    const auto params = fixed(64);
    const auto r = segment_sequence(seq, params);
    for (const auto& s : r.segmentation.segments()) {
        const double whole = segment_bitcost(seq, s.start, s.end, params);
        for (std::size_t cut = s.start + 1; cut < s.end; ++cut) {
            CHECK(segment_bitcost(seq, s.start, cut, params) + segment_bitcost(seq, cut, s.end, params) > whole);
        }
    }
}

TEST_CASE("a generous cap gives the uncapped answer") {
    const auto seq = synth({20, 35, 28, 41}, 13, 2);
    const auto free = segment_sequence(seq, fixed(64));
    std::size_t longest = 0;
    for (const auto& s : free.segmentation.segments()) {
        longest = std::max(longest, s.length());
    }
    for (std::size_t cap : {longest, longest + 1, 2 * longest, std::size_t{300}}) {
        const auto capped = segment_sequence(seq, fixed(64, cap));
        CHECK(capped.segmentation == free.segmentation);
        CHECK(capped.total_bits == free.total_bits);
    }
    const auto tight = segment_sequence(seq, fixed(64, longest / 2));
    for (const auto& s : tight.segmentation.segments()) {
        CHECK(s.length() <= longest / 2);
    }
}

TEST_CASE("translating every vector leaves the breaks alone") {
    const auto seq = synth({18, 9, 26}, 17, 3);
    auto shifted = seq.values();
    for (std::size_t k = 0; k < shifted.size(); ++k) {
        shifted[k] += k % 3 == 0 ? 250.0 : -31.5;
    }
    const FeatureSequence moved(seq.n(), seq.d(), shifted);
    CHECK(segment_sequence(moved, fixed(64)).segmentation == segment_sequence(seq, fixed(64)).segmentation);
}
