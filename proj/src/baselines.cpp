#include "mdlseg/baselines.hpp"

#include "mdlseg/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace mdlseg {

Segmentation uniform_breaks(std::size_t n, std::size_t mean_len) {
    if (n == 0 || mean_len == 0) {
        throw ValidationError("uniform baseline needs n >= 1 and mean_len >= 1");
    }
    std::vector<std::size_t> breaks;
    for (std::size_t b = mean_len; b < n; b += mean_len) {
        breaks.push_back(b);
    }
    return Segmentation(n, std::move(breaks));
}

Segmentation uniform_oracle_breaks(std::size_t n, std::size_t k_true) {
    if (k_true == 0 || k_true > n) {
        throw ValidationError("uniform-oracle baseline needs 1 <= k_true <= n (k_true = " +
                              std::to_string(k_true) + ", n = " + std::to_string(n) + ")");
    }
    std::vector<std::size_t> breaks;
    for (std::size_t i = 1; i < k_true; ++i) {
        // round(i*n/k_true), halves rounded up
        const std::size_t b = (2 * i * n + k_true) / (2 * k_true);
        if (b > 0 && b < n && (breaks.empty() || breaks.back() < b)) {
            breaks.push_back(b);
        }
    }
    return Segmentation(n, std::move(breaks));
}

Segmentation labels_to_breaks(std::span<const std::size_t> labels, std::size_t n) {
    if (labels.size() != n) {
        throw ValidationError("label count " + std::to_string(labels.size()) + " does not match n = " +
                              std::to_string(n));
    }
    std::vector<std::size_t> breaks;
    for (std::size_t i = 1; i < n; ++i) {
        if (labels[i] != labels[i - 1]) {
            breaks.push_back(i);
        }
    }
    return Segmentation(n, std::move(breaks));
}

std::vector<std::size_t> kmeans_labels(const FeatureSequence& seq, std::size_t k, std::size_t max_iters,
                                       std::uint64_t seed) {
    const std::size_t n = seq.n();
    const std::size_t d = seq.d();
    if (k == 0 || k > n) {
        throw ValidationError("k-means needs 1 <= k <= n (k = " + std::to_string(k) + ", n = " +
                              std::to_string(n) + ")");
    }
    if (max_iters == 0) {
        throw ValidationError("k-means needs max_iters >= 1");
    }

    std::vector<std::size_t> indices(n);
    std::iota(indices.begin(), indices.end(), 0);
    std::vector<std::size_t> picked;
    picked.reserve(k);
    std::mt19937_64 rng(seed);
    std::sample(indices.begin(), indices.end(), std::back_inserter(picked), k, rng);

    std::vector<double> centers(k * d);
    for (std::size_t c = 0; c < k; ++c) {
        std::copy_n(seq.row(picked[c]).begin(), d, centers.begin() + static_cast<std::ptrdiff_t>(c * d));
    }

    std::vector<std::size_t> labels(n, std::numeric_limits<std::size_t>::max());
    std::vector<double> sums(k * d);
    std::vector<std::size_t> counts(k);
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const auto v = seq.row(i);
            std::size_t best = 0;
            double best_dist = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                double dist = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    const double diff = v[j] - centers[c * d + j];
                    dist += diff * diff;
                }
                if (dist < best_dist) {
                    best_dist = dist;
                    best = c;
                }
            }
            if (labels[i] != best) {
                labels[i] = best;
                changed = true;
            }
        }
        if (!changed) {
            break;
        }
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto v = seq.row(i);
            ++counts[labels[i]];
            for (std::size_t j = 0; j < d; ++j) {
                sums[labels[i] * d + j] += v[j];
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                continue;  // empty cluster keeps its center
            }
            for (std::size_t j = 0; j < d; ++j) {
                centers[c * d + j] = sums[c * d + j] / static_cast<double>(counts[c]);
            }
        }
    }
    return labels;
}

Segmentation contiguous_kmeans(const FeatureSequence& seq, const BaselineSpec& spec) {
    const auto labels = kmeans_labels(seq, spec.k_clusters, spec.max_iters, spec.seed);
    return labels_to_breaks(labels, seq.n());
}

Segmentation run_baseline(const FeatureSequence& seq, const BaselineSpec& spec) {
    switch (spec.kind) {
    case BaselineKind::Uniform:
        return uniform_breaks(seq.n(), spec.mean_len);
    case BaselineKind::UniformOracle:
        return uniform_oracle_breaks(seq.n(), spec.k_true);
    case BaselineKind::ContiguousKmeans:
        return contiguous_kmeans(seq, spec);
    }
    throw ValidationError("unknown baseline kind");
}

} // namespace mdlseg
