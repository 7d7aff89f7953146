#pragma once

#include <cstddef>
#include <vector>

namespace mdlseg {

/// Half-open index range [start, end) of one segment.
struct Segment {
    std::size_t start = 0;
    std::size_t end = 0;

    [[nodiscard]] std::size_t length() const { return end - start; }
    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Contiguous partition of [0, n) stored as its sorted interior break
/// indices. A break b means frames b-1 and b belong to different segments.
class Segmentation {
public:
    /// Throws ValidationError unless n >= 1 and breaks are strictly
    /// increasing and inside (0, n).
    Segmentation(std::size_t n, std::vector<std::size_t> breaks);

    [[nodiscard]] std::size_t n() const { return n_; }
    [[nodiscard]] const std::vector<std::size_t>& breaks() const { return breaks_; }
    [[nodiscard]] std::size_t segment_count() const { return breaks_.size() + 1; }
    [[nodiscard]] std::vector<Segment> segments() const;

    /// Segment index of every frame; non-decreasing, starts at 0.
    [[nodiscard]] std::vector<std::size_t> frame_labels() const;

    friend bool operator==(const Segmentation&, const Segmentation&) = default;

private:
    std::size_t n_;
    std::vector<std::size_t> breaks_;
};

} // namespace mdlseg
