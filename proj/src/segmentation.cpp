#include "mdlseg/segmentation.hpp"

#include "mdlseg/error.hpp"

#include <string>

namespace mdlseg {

Segmentation::Segmentation(std::size_t n, std::vector<std::size_t> breaks)
    : n_(n), breaks_(std::move(breaks)) {
    if (n_ == 0) {
        throw ValidationError("segmentation must cover at least one frame");
    }
    std::size_t previous = 0;
    for (std::size_t b : breaks_) {
        if (b <= previous || b >= n_) {
            throw ValidationError("break " + std::to_string(b) +
                                  " is out of order or outside (0, " + std::to_string(n_) + ")");
        }
        previous = b;
    }
}

std::vector<Segment> Segmentation::segments() const {
    std::vector<Segment> out;
    out.reserve(segment_count());
    std::size_t start = 0;
    for (std::size_t b : breaks_) {
        out.push_back({start, b});
        start = b;
    }
    out.push_back({start, n_});
    return out;
}

std::vector<std::size_t> Segmentation::frame_labels() const {
    std::vector<std::size_t> labels(n_);
    std::size_t label = 0;
    std::size_t next = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        if (next < breaks_.size() && breaks_[next] == i) {
            ++label;
            ++next;
        }
        labels[i] = label;
    }
    return labels;
}

} // namespace mdlseg
