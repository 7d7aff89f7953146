#pragma once

// Reference segmenters: evenly spaced breaks, evenly spaced breaks with the
// true scene count, and k-means labels turned into contiguous segments.

#include "mdlseg/feature_io.hpp"
#include "mdlseg/segmentation.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mdlseg {

enum class BaselineKind { Uniform, UniformOracle, ContiguousKmeans };

struct BaselineSpec {
    BaselineKind kind = BaselineKind::Uniform;
    std::size_t mean_len = 1;     // Uniform
    std::size_t k_true = 1;       // UniformOracle
    std::size_t k_clusters = 2;   // ContiguousKmeans
    std::size_t max_iters = 100;  // ContiguousKmeans
    std::uint64_t seed = 0;       // ContiguousKmeans
};

/// Breaks at mean_len, 2*mean_len, ... strictly below n.
Segmentation uniform_breaks(std::size_t n, std::size_t mean_len);

/// k_true near-equal segments: breaks at round(i*n/k_true), i = 1..k_true-1.
Segmentation uniform_oracle_breaks(std::size_t n, std::size_t k_true);

/// A break wherever labels[i] != labels[i-1].
Segmentation labels_to_breaks(std::span<const std::size_t> labels, std::size_t n);

/// Lloyd iterations from k distinct sampled frames, stopping when the
/// assignment no longer changes or after max_iters rounds.
std::vector<std::size_t> kmeans_labels(const FeatureSequence& seq, std::size_t k, std::size_t max_iters,
                                       std::uint64_t seed);

Segmentation contiguous_kmeans(const FeatureSequence& seq, const BaselineSpec& spec);

/// Dispatches on spec.kind.
Segmentation run_baseline(const FeatureSequence& seq, const BaselineSpec& spec);

} // namespace mdlseg
