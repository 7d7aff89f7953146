#pragma once

#include "mdlseg/segmentation.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mdlseg {

enum class FeatureFormat { Csv, Binary };

/// Picks the on-disk format from a file extension: ".bin" is binary,
/// anything else is CSV.
FeatureFormat format_from_path(const std::filesystem::path& path);

/// Time-ordered keyframe feature vectors, n rows of dimension d, stored
/// row-major. Immutable after construction.
class FeatureSequence {
public:
    /// Throws ValidationError on n == 0, d == 0, a size mismatch, a
    /// non-finite value or decreasing timestamps.
    FeatureSequence(std::size_t n, std::size_t d, std::vector<double> values,
                    std::optional<std::vector<double>> timestamps = std::nullopt);

    [[nodiscard]] std::size_t n() const { return n_; }
    [[nodiscard]] std::size_t d() const { return d_; }
    [[nodiscard]] double at(std::size_t row, std::size_t col) const { return values_[row * d_ + col]; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * d_, d_};
    }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] const std::optional<std::vector<double>>& timestamps() const { return timestamps_; }

    friend bool operator==(const FeatureSequence&, const FeatureSequence&) = default;

private:
    std::size_t n_;
    std::size_t d_;
    std::vector<double> values_;
    std::optional<std::vector<double>> timestamps_;
};

/// One annotator's reference breaks.
struct ReferenceAnnotation {
    std::string annotator_id;
    Segmentation segmentation;
};

// CSV: optional header "# t,f0,f1,..." (leading timestamp column) or
// "# f0,f1,...". One keyframe per row.
FeatureSequence read_features_csv(std::istream& in);
void write_features_csv(std::ostream& out, const FeatureSequence& seq);

// Binary: "MDLS", u16 version (1), u64 n, u32 d, u8 precision tag
// (16/32/64), then n*d little-endian values at that width. Timestamps are
// not stored.
FeatureSequence read_features_binary(std::istream& in);

/// precision_bits defaults to infer_precision_bits(seq). Throws
/// ValidationError if a value is not exact at the requested width.
void write_features_binary(std::ostream& out, const FeatureSequence& seq,
                           std::optional<int> precision_bits = std::nullopt);

/// Throws IoError when the file cannot be opened or does not parse, with
/// the offending row/column in the message.
FeatureSequence load_features(const std::filesystem::path& path, FeatureFormat format);
void save_features(const std::filesystem::path& path, const FeatureSequence& seq, FeatureFormat format);

/// True when `value` survives a round trip through an IEEE float of the
/// given width (16, 32 or 64).
bool exactly_representable(double value, int bits);

/// Smallest width in {16, 32, 64} at which every value is exact.
int infer_precision_bits(const FeatureSequence& seq);

struct SynthConfig {
    std::vector<std::size_t> segment_lengths;
    std::size_t d = 2;
    double separation = 10.0;
    double noise_sigma = 0.1;
    std::uint64_t seed = 0;
};

struct SyntheticInstance {
    FeatureSequence features;
    ReferenceAnnotation truth;
};

/// Piecewise-isotropic-Gaussian sequence: segment k is drawn around its own
/// mean, all means pairwise at least `separation` apart. Pure function of
/// the config.
SyntheticInstance synth_sequence(const SynthConfig& config);

// Annotation file: first line "n=<N>", then "annotator_id: b1 b2 ... bk"
// per annotator.
std::vector<ReferenceAnnotation> read_annotations(std::istream& in);
void write_annotations(std::ostream& out, std::span<const ReferenceAnnotation> annotations);
std::vector<ReferenceAnnotation> load_annotations(const std::filesystem::path& path);
void save_annotations(const std::filesystem::path& path, std::span<const ReferenceAnnotation> annotations);

} // namespace mdlseg
