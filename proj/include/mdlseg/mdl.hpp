#pragma once

// Minimum-description-length segmentation: each segment is coded as a
// diagonal Gaussian fitted to its own frames, paying 2*d*m bits for the
// mean and variances plus -log2 p(v) for every frame. The optimal
// contiguous partition is found exactly by dynamic programming.

#include "mdlseg/feature_io.hpp"
#include "mdlseg/segmentation.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace mdlseg {

/// Keyframe cap used for full-length films (roughly ten minutes of
/// I-frames).
inline constexpr std::size_t kDefaultMaxSegmentLength = 300;
inline constexpr double kDefaultVarFloor = 1e-4;
/// Largest n accepted by the exhaustive search (2^(n-1) partitions).
inline constexpr std::size_t kMaxBruteForceFrames = 20;

struct MdlParams {
    /// Float width m in bits; nullopt infers it from the data.
    std::optional<int> precision_bits;
    /// Longest admissible segment L, in frames; nullopt means uncapped.
    std::optional<std::size_t> max_segment_length = kDefaultMaxSegmentLength;
    /// Per-dimension variances are clamped to at least this value.
    double var_floor = kDefaultVarFloor;

    /// Throws ValidationError on m not in {16,32,64}, L == 0 or a
    /// non-positive floor.
    void validate() const;
    /// Copy with precision_bits filled in from `seq` when unset.
    [[nodiscard]] MdlParams resolved_for(const FeatureSequence& seq) const;
};

/// Code length in bits of frames [i, j) as a single segment. Evaluated
/// directly (two-pass mean and residuals) with no caching.
double segment_bitcost(const FeatureSequence& seq, std::size_t i, std::size_t j, const MdlParams& params);

/// B[i][j] for every 0 <= i < j <= n with j - i <= L. Entries can be left
/// unset, which dp_segment reports as an error.
class SegmentCostTable {
public:
    SegmentCostTable(std::size_t n, std::optional<std::size_t> max_segment_length);

    [[nodiscard]] std::size_t n() const { return n_; }
    [[nodiscard]] std::optional<std::size_t> max_segment_length() const { return max_len_; }
    /// Longest segment that is actually admissible, min(L, n).
    [[nodiscard]] std::size_t width() const { return width_; }

    [[nodiscard]] bool admissible(std::size_t i, std::size_t j) const {
        return i < j && j <= n_ && j - i <= width_;
    }
    [[nodiscard]] bool contains(std::size_t i, std::size_t j) const;
    /// Throws ValidationError for an inadmissible or unset pair.
    [[nodiscard]] double cost(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, double bits);

    /// Number of admissible (i, j) pairs.
    [[nodiscard]] std::size_t entry_count() const;

private:
    [[nodiscard]] std::size_t slot(std::size_t i, std::size_t j) const { return i * width_ + (j - i - 1); }

    std::size_t n_;
    std::optional<std::size_t> max_len_;
    std::size_t width_;
    std::vector<double> costs_;
};

/// Fills the table from per-dimension prefix sums of v and v^2, O(N*L*d).
/// Rows are split across `threads` workers; the result does not depend on
/// the thread count.
SegmentCostTable build_cost_table(const FeatureSequence& seq, const MdlParams& params, unsigned threads = 1);

struct SegmentationResult {
    Segmentation segmentation;
    double total_bits;
};

/// C(i) = min over i < k <= min(n, i+L) of B(i,k) + C(k), C(n) = 0, solved
/// back to front. Among equal totals the smallest k wins at every step.
SegmentationResult dp_segment(const SegmentCostTable& table);

struct ExhaustiveResult {
    SegmentationResult best;
    std::size_t partitions_evaluated;
};

/// Enumerates every contiguous partition that respects L, scoring each with
/// the same table entries and summation order as dp_segment. Ties go to the
/// lexicographically smallest list of segment end points. Throws
/// ValidationError when n > kMaxBruteForceFrames.
ExhaustiveResult brute_force_segment(const FeatureSequence& seq, const MdlParams& params);

/// Infers m when unset, builds the table and runs the DP.
SegmentationResult segment_sequence(const FeatureSequence& seq, const MdlParams& params = {},
                                    unsigned threads = 1);

} // namespace mdlseg
