#pragma once

// Independent reference implementations used to check the library. Each one
// takes the slow, obvious route: enumerate every candidate, evaluate every
// density point by point, sweep every window.

#include "mdlseg/feature_io.hpp"
#include "mdlseg/hungarian.hpp"
#include "mdlseg/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

// -log2 of a univariate normal density, evaluated from the pdf itself.
inline double neg_log2_normal(double x, double mean, double var) {
    const double pdf = std::exp(-(x - mean) * (x - mean) / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
    if (pdf > 0.0 && std::isfinite(pdf)) {
        return -std::log2(pdf);
    }
    // pdf underflowed; fall back to the log form for this one point
    return ((x - mean) * (x - mean) / (2.0 * var) + 0.5 * std::log(2.0 * std::numbers::pi * var)) / std::numbers::ln2;
}

// Bits for frames [i, j): 2*d*m plus per-point, per-dimension code lengths
// under the ML diagonal Gaussian with floored variances.
inline double segment_bits(const mdlseg::FeatureSequence& seq, std::size_t i, std::size_t j, int m,
                           double var_floor) {
    const std::size_t d = seq.d();
    const double t = static_cast<double>(j - i);
    double bits = 2.0 * static_cast<double>(d) * m;
    for (std::size_t c = 0; c < d; ++c) {
        double mean = 0.0;
        for (std::size_t r = i; r < j; ++r) {
            mean += seq.at(r, c);
        }
        mean /= t;
        double var = 0.0;
        for (std::size_t r = i; r < j; ++r) {
            var += (seq.at(r, c) - mean) * (seq.at(r, c) - mean);
        }
        var = std::max(var / t, var_floor);
        for (std::size_t r = i; r < j; ++r) {
            bits += neg_log2_normal(seq.at(r, c), mean, var);
        }
    }
    return bits;
}

// Frames i and j (i < j) share a segment when no break b has i < b <= j.
inline bool same_segment(const mdlseg::Segmentation& s, std::size_t i, std::size_t j) {
    return std::none_of(s.breaks().begin(), s.breaks().end(), [&](std::size_t b) { return i < b && b <= j; });
}

inline std::size_t breaks_in(const mdlseg::Segmentation& s, std::size_t i, std::size_t j) {
    return static_cast<std::size_t>(
        std::count_if(s.breaks().begin(), s.breaks().end(), [&](std::size_t b) { return i < b && b <= j; }));
}

inline double pk(const mdlseg::Segmentation& hyp, const mdlseg::Segmentation& ref, std::size_t k) {
    const std::size_t n = ref.n();
    std::size_t errors = 0;
    for (std::size_t i = 0; i + k < n; ++i) {
        if (same_segment(hyp, i, i + k) != same_segment(ref, i, i + k)) {
            ++errors;
        }
    }
    return static_cast<double>(errors) / static_cast<double>(n - k);
}

inline double windowdiff(const mdlseg::Segmentation& hyp, const mdlseg::Segmentation& ref, std::size_t k) {
    const std::size_t n = ref.n();
    std::size_t errors = 0;
    for (std::size_t i = 0; i + k < n; ++i) {
        if (breaks_in(hyp, i, i + k) != breaks_in(ref, i, i + k)) {
            ++errors;
        }
    }
    return static_cast<double>(errors) / static_cast<double>(n - k);
}

// Adjusted Rand index (percent) from explicit pair enumeration.
inline double ari(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    const std::size_t n = a.size();
    double both = 0.0;
    double in_a = 0.0;
    double in_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool sa = a[i] == a[j];
            const bool sb = b[i] == b[j];
            both += sa && sb ? 1.0 : 0.0;
            in_a += sa ? 1.0 : 0.0;
            in_b += sb ? 1.0 : 0.0;
        }
    }
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    const double expected = in_a * in_b / pairs;
    const double max_index = (in_a + in_b) / 2.0;
    return 100.0 * (both - expected) / (max_index - expected);
}

struct BestAssignment {
    double total = std::numeric_limits<double>::infinity();
    std::vector<std::optional<std::size_t>> row_to_col;
};

// Minimum over every injective row->column map that assigns min(rows, cols)
// rows, summing entries in row order. Candidates are visited in
// lexicographic order of row_to_col (unassigned sorts last), and only a
// strictly smaller total replaces the incumbent.
inline BestAssignment enumerate_assignments(const mdlseg::Matrix& cost) {
    const std::size_t rows = cost.rows();
    const std::size_t cols = cost.cols();
    const std::size_t assigned_rows = std::min(rows, cols);
    BestAssignment best;
    std::vector<std::optional<std::size_t>> current(rows);
    std::vector<bool> used(cols, false);
    auto recurse = [&](auto&& self, std::size_t r, std::size_t count) -> void {
        if (r == rows) {
            if (count != assigned_rows) {
                return;
            }
            double total = 0.0;
            for (std::size_t i = 0; i < rows; ++i) {
                if (current[i]) {
                    total += cost(i, *current[i]);
                }
            }
            if (total < best.total) {
                best.total = total;
                best.row_to_col = current;
            }
            return;
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (!used[c]) {
                used[c] = true;
                current[r] = c;
                self(self, r + 1, count + 1);
                used[c] = false;
            }
        }
        if (rows - r - 1 + count >= assigned_rows) {
            current[r] = std::nullopt;
            self(self, r + 1, count);
        }
    };
    recurse(recurse, 0, 0);
    return best;
}

// Speaker -> character by exhaustive search: every eligible speaker (one
// with a finite cost somewhere) may take any character, at most `capacity`
// per character, and min(eligible, capacity * characters) of them must be
// placed. The best mapping has the fewest infinite pairs, then the smallest
// finite sum, ties going to the lexicographically smallest mapping with
// UNASSIGNED last. A placed pair survives only when its cost is finite and below
// the threshold.
inline std::vector<std::optional<std::size_t>> brute_force_names(const std::vector<std::vector<double>>& c2,
                                                                 std::optional<double> threshold,
                                                                 std::size_t capacity) {
    const std::size_t characters = c2.size();
    const std::size_t speakers = characters ? c2.front().size() : 0;
    std::vector<std::optional<std::size_t>> none(speakers);
    if (!threshold || characters == 0) {
        return none;
    }
    const double limit = *threshold;
    std::vector<std::size_t> eligible;
    for (std::size_t s = 0; s < speakers; ++s) {
        for (std::size_t i = 0; i < characters; ++i) {
            if (std::isfinite(c2[i][s])) {
                eligible.push_back(s);
                break;
            }
        }
    }
    const std::size_t must_place = std::min(eligible.size(), capacity * characters);

    std::vector<std::optional<std::size_t>> current(speakers);
    std::vector<std::optional<std::size_t>> best;
    std::size_t best_inf = std::numeric_limits<std::size_t>::max();
    double best_sum = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> load(characters, 0);
    auto recurse = [&](auto&& self, std::size_t e, std::size_t placed, std::size_t inf, double sum) -> void {
        if (e == eligible.size()) {
            // Totals that differ only by summation order count as equal, so
            // the first (lexicographically smallest) optimum is kept.
            const double slack = 1e-12 * std::max(1.0, std::fabs(best_sum));
            if (placed == must_place && (inf < best_inf || (inf == best_inf && sum < best_sum - slack))) {
                best_inf = inf;
                best_sum = sum;
                best = current;
            }
            return;
        }
        const std::size_t s = eligible[e];
        for (std::size_t i = 0; i < characters; ++i) {
            if (load[i] < capacity) {
                ++load[i];
                current[s] = i;
                const bool finite = std::isfinite(c2[i][s]);
                self(self, e + 1, placed + 1, inf + (finite ? 0 : 1), sum + (finite ? c2[i][s] : 0.0));
                --load[i];
            }
        }
        current[s] = std::nullopt;
        self(self, e + 1, placed, inf, sum);
    };
    recurse(recurse, 0, 0, 0, 0.0);

    for (std::size_t s = 0; s < speakers; ++s) {
        if (best[s] && !(std::isfinite(c2[*best[s]][s]) && c2[*best[s]][s] < limit)) {
            best[s] = std::nullopt;
        }
    }
    return best;
}

// Random segmentation of [0, n) with each interior position a break with
// probability p.
inline mdlseg::Segmentation random_segmentation(std::size_t n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<std::size_t> breaks;
    for (std::size_t b = 1; b < n; ++b) {
        if (coin(rng)) {
            breaks.push_back(b);
        }
    }
    return {n, breaks};
}

enum class Structure { Constant, Clusters, Noise };

// Small instances mixing flat stretches, well-separated clusters and plain
// noise, with occasional exact repeats so that ties can arise.
inline mdlseg::FeatureSequence random_instance(std::size_t n, std::size_t d, Structure kind, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> values(n * d);
    switch (kind) {
    case Structure::Constant: {
        std::vector<double> level(d);
        for (auto& x : level) {
            x = std::round(normal(rng) * 4.0) / 4.0;
        }
        for (std::size_t r = 0; r < n; ++r) {
            std::copy(level.begin(), level.end(), values.begin() + static_cast<std::ptrdiff_t>(r * d));
        }
        break;
    }
    case Structure::Clusters: {
        std::uniform_int_distribution<std::size_t> pieces(1, std::max<std::size_t>(1, n / 2));
        const std::size_t k = pieces(rng);
        std::vector<std::vector<double>> centers(k, std::vector<double>(d));
        for (auto& c : centers) {
            for (auto& x : c) {
                x = normal(rng) * 5.0;
            }
        }
        for (std::size_t r = 0; r < n; ++r) {
            const auto& c = centers[std::min(k - 1, r * k / n)];
            for (std::size_t j = 0; j < d; ++j) {
                values[r * d + j] = c[j] + 0.1 * normal(rng);
            }
        }
        break;
    }
    case Structure::Noise:
        for (auto& x : values) {
            x = normal(rng);
        }
        break;
    }
    return {n, d, std::move(values)};
}

} // namespace oracle
