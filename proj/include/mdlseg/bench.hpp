#pragma once

// Runs every segmenter over a manifest of (features, annotations) pairs and
// scores each against all annotators.

#include "mdlseg/feature_io.hpp"
#include "mdlseg/mdl.hpp"
#include "mdlseg/metrics.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mdlseg {

inline constexpr std::array<std::string_view, 4> kBenchMethods = {"mdlseg", "unif", "unif-oracle", "kmeans"};

struct BenchItem {
    std::string name;
    std::filesystem::path features;
    std::filesystem::path annotations;
};

/// JSON manifest {"items": [{"name", "features", "annotations"}]}; relative
/// paths resolve against the manifest's directory.
std::vector<BenchItem> read_manifest(const std::filesystem::path& path);

struct BenchInput {
    std::string name;
    FeatureSequence features;
    std::vector<ReferenceAnnotation> references;
};

struct BenchConfig {
    MdlParams mdl;
    unsigned threads = 1;
    /// unif segment length; defaults to the mean reference segment length
    /// over the whole manifest.
    std::optional<std::size_t> mean_len;
    /// kmeans cluster count; defaults to the item's reference scene count.
    std::optional<std::size_t> kmeans_k;
    std::size_t kmeans_max_iters = 100;
    std::uint64_t seed = 0;
    std::optional<std::size_t> window_k;
};

struct BenchRow {
    std::string item;
    std::string method;
    std::size_t n = 0;
    std::optional<MultiRefReport> scores;  // empty when the run failed
    std::string error;
    double runtime_s = 0.0;
    [[nodiscard]] double per_frame_runtime_s() const { return n ? runtime_s / static_cast<double>(n) : 0.0; }
};

/// Mean reference segment length over every annotator of every item,
/// rounded, at least 1.
std::size_t dataset_mean_segment_length(const std::vector<BenchInput>& inputs);

/// One row per (input, method), inputs outermost.
std::vector<BenchRow> run_bench(const std::vector<BenchInput>& inputs, const BenchConfig& config);

/// Loads each manifest item; an item that fails to load yields error rows
/// for every method and the run carries on.
std::vector<BenchRow> run_bench(const std::vector<BenchItem>& items, const BenchConfig& config);

/// Comma-separated table with a header row.
std::string bench_table_csv(const std::vector<BenchRow>& rows);

} // namespace mdlseg
