#include "mdlseg/mdl.hpp"

#include "mdlseg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

namespace mdlseg {

namespace {

constexpr double kLn2Pi = 1.8378770664093453;  // ln(2*pi)

// Bits for a segment of `count` frames given, per dimension, the sum of
// squared residuals about the segment mean.
double gaussian_code_length(std::size_t count, std::span<const double> residual_ss, std::size_t d, int m,
                            double var_floor) {
    const auto t = static_cast<double>(count);
    double nats = 0.5 * t * static_cast<double>(d) * kLn2Pi;
    for (double rss : residual_ss) {
        const double var = std::max(rss / t, var_floor);
        nats += 0.5 * t * std::log(var) + 0.5 * rss / var;
    }
    return 2.0 * static_cast<double>(d) * m + nats / std::numbers::ln2;
}

void check_range(const FeatureSequence& seq, std::size_t i, std::size_t j, const MdlParams& params) {
    if (j <= i || j > seq.n()) {
        throw ValidationError("segment [" + std::to_string(i) + ", " + std::to_string(j) +
                              ") is empty or outside [0, " + std::to_string(seq.n()) + ")");
    }
    if (params.max_segment_length && j - i > *params.max_segment_length) {
        throw ValidationError("segment length " + std::to_string(j - i) + " exceeds L = " +
                              std::to_string(*params.max_segment_length));
    }
}

} // namespace

void MdlParams::validate() const {
    if (precision_bits && *precision_bits != 16 && *precision_bits != 32 && *precision_bits != 64) {
        throw ValidationError("precision must be 16, 32 or 64 bits");
    }
    if (max_segment_length && *max_segment_length == 0) {
        throw ValidationError("max segment length must be >= 1");
    }
    if (!(var_floor > 0.0) || !std::isfinite(var_floor)) {
        throw ValidationError("variance floor must be positive and finite");
    }
}

MdlParams MdlParams::resolved_for(const FeatureSequence& seq) const {
    validate();
    MdlParams out = *this;
    if (!out.precision_bits) {
        out.precision_bits = infer_precision_bits(seq);
    }
    return out;
}

double segment_bitcost(const FeatureSequence& seq, std::size_t i, std::size_t j, const MdlParams& params) {
    const MdlParams p = params.resolved_for(seq);
    check_range(seq, i, j, p);
    const std::size_t d = seq.d();
    const auto t = static_cast<double>(j - i);
    std::vector<double> mean(d, 0.0);
    for (std::size_t k = i; k < j; ++k) {
        for (std::size_t c = 0; c < d; ++c) {
            mean[c] += seq.at(k, c);
        }
    }
    for (auto& mu : mean) {
        mu /= t;
    }
    std::vector<double> rss(d, 0.0);
    for (std::size_t k = i; k < j; ++k) {
        for (std::size_t c = 0; c < d; ++c) {
            const double r = seq.at(k, c) - mean[c];
            rss[c] += r * r;
        }
    }
    return gaussian_code_length(j - i, rss, d, *p.precision_bits, p.var_floor);
}

SegmentCostTable::SegmentCostTable(std::size_t n, std::optional<std::size_t> max_segment_length)
    : n_(n), max_len_(max_segment_length) {
    if (n_ == 0) {
        throw ValidationError("cost table needs n >= 1");
    }
    if (max_len_ && *max_len_ == 0) {
        throw ValidationError("max segment length must be >= 1");
    }
    width_ = max_len_ ? std::min(*max_len_, n_) : n_;
    costs_.assign(n_ * width_, std::numeric_limits<double>::quiet_NaN());
}

bool SegmentCostTable::contains(std::size_t i, std::size_t j) const {
    return admissible(i, j) && !std::isnan(costs_[slot(i, j)]);
}

double SegmentCostTable::cost(std::size_t i, std::size_t j) const {
    if (!contains(i, j)) {
        throw ValidationError("cost table has no entry for segment [" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
    }
    return costs_[slot(i, j)];
}

void SegmentCostTable::set(std::size_t i, std::size_t j, double bits) {
    if (!admissible(i, j)) {
        throw ValidationError("segment [" + std::to_string(i) + ", " + std::to_string(j) +
                              ") is not admissible for this table");
    }
    if (!std::isfinite(bits)) {
        throw ValidationError("segment cost must be finite");
    }
    costs_[slot(i, j)] = bits;
}

std::size_t SegmentCostTable::entry_count() const {
    // Rows i < n - width + 1 are full; the last width - 1 rows shrink.
    const std::size_t w = width_;
    return (n_ - w + 1) * w + (w - 1) * w / 2;
}

SegmentCostTable build_cost_table(const FeatureSequence& seq, const MdlParams& params, unsigned threads) {
    const MdlParams p = params.resolved_for(seq);
    const std::size_t n = seq.n();
    const std::size_t d = seq.d();
    const int m = *p.precision_bits;

    // Center each dimension before accumulating so the v^2 sums do not
    // swamp the within-segment spread.
    std::vector<double> center(d, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t c = 0; c < d; ++c) {
            center[c] += seq.at(k, c);
        }
    }
    for (auto& c : center) {
        c /= static_cast<double>(n);
    }
    std::vector<double> sum((n + 1) * d, 0.0);
    std::vector<double> sum_sq((n + 1) * d, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t c = 0; c < d; ++c) {
            const double x = seq.at(k, c) - center[c];
            sum[(k + 1) * d + c] = sum[k * d + c] + x;
            sum_sq[(k + 1) * d + c] = sum_sq[k * d + c] + x * x;
        }
    }

    SegmentCostTable table(n, p.max_segment_length);
    const std::size_t width = table.width();

    auto fill_rows = [&](std::size_t worker, std::size_t workers) {
        std::vector<double> rss(d);
        for (std::size_t i = worker; i < n; i += workers) {
            const std::size_t last = std::min(n, i + width);
            for (std::size_t j = i + 1; j <= last; ++j) {
                const auto t = static_cast<double>(j - i);
                for (std::size_t c = 0; c < d; ++c) {
                    const double s = sum[j * d + c] - sum[i * d + c];
                    const double q = sum_sq[j * d + c] - sum_sq[i * d + c];
                    rss[c] = std::max(q - s * s / t, 0.0);
                }
                table.set(i, j, gaussian_code_length(j - i, rss, d, m, p.var_floor));
            }
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, n));
    if (workers == 1) {
        fill_rows(0, 1);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(fill_rows, w, workers);
        }
    }
    return table;
}

SegmentationResult dp_segment(const SegmentCostTable& table) {
    const std::size_t n = table.n();
    const std::size_t width = table.width();
    std::vector<double> best(n + 1, 0.0);
    std::vector<std::size_t> next(n + 1, n);
    for (std::size_t i = n; i-- > 0;) {
        double best_cost = std::numeric_limits<double>::infinity();
        std::size_t best_k = n;
        const std::size_t last = std::min(n, i + width);
        for (std::size_t k = i + 1; k <= last; ++k) {
            const double c = table.cost(i, k) + best[k];
            if (c < best_cost) {
                best_cost = c;
                best_k = k;
            }
        }
        best[i] = best_cost;
        next[i] = best_k;
    }
    std::vector<std::size_t> breaks;
    for (std::size_t i = next[0]; i < n; i = next[i]) {
        breaks.push_back(i);
    }
    return {Segmentation(n, std::move(breaks)), best[0]};
}

ExhaustiveResult brute_force_segment(const FeatureSequence& seq, const MdlParams& params) {
    const std::size_t n = seq.n();
    if (n > kMaxBruteForceFrames) {
        throw ValidationError("instance too large for exhaustive search (n = " + std::to_string(n) +
                              ", limit " + std::to_string(kMaxBruteForceFrames) + ")");
    }
    const SegmentCostTable table = build_cost_table(seq, params, 1);
    const std::size_t width = table.width();

    std::vector<std::size_t> best_ends;
    double best_total = std::numeric_limits<double>::infinity();
    std::size_t evaluated = 0;
    std::vector<std::size_t> ends;
    const std::uint64_t masks = std::uint64_t{1} << (n - 1);
    for (std::uint64_t mask = 0; mask < masks; ++mask) {
        // Bit b-1 set means a break at b.
        ends.clear();
        for (std::size_t b = 1; b < n; ++b) {
            if ((mask >> (b - 1)) & 1U) {
                ends.push_back(b);
            }
        }
        ends.push_back(n);
        bool fits = true;
        std::size_t start = 0;
        for (std::size_t e : ends) {
            fits = fits && e - start <= width;
            start = e;
        }
        if (!fits) {
            continue;
        }
        ++evaluated;
        // Right fold, the order in which dp_segment accumulates.
        double total = 0.0;
        for (std::size_t s = ends.size(); s-- > 0;) {
            const std::size_t seg_start = s == 0 ? 0 : ends[s - 1];
            total = table.cost(seg_start, ends[s]) + total;
        }
        if (total < best_total || (total == best_total && ends < best_ends)) {
            best_total = total;
            best_ends = ends;
        }
    }
    best_ends.pop_back();
    return {{Segmentation(n, std::move(best_ends)), best_total}, evaluated};
}

SegmentationResult segment_sequence(const FeatureSequence& seq, const MdlParams& params, unsigned threads) {
    return dp_segment(build_cost_table(seq, params, threads));
}

} // namespace mdlseg
