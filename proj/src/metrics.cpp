#include "mdlseg/metrics.hpp"

#include "mdlseg/error.hpp"
#include "mdlseg/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace mdlseg {

namespace {

struct Contingency {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> cells;  // rows x cols
    std::vector<std::size_t> row_totals;
    std::vector<std::size_t> col_totals;
    std::size_t total = 0;

    [[nodiscard]] std::size_t at(std::size_t r, std::size_t c) const { return cells[r * cols + c]; }
};

// Dense ids in order of first appearance.
std::vector<std::size_t> densify(std::span<const std::size_t> labels, std::size_t& count) {
    std::map<std::size_t, std::size_t> ids;
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (std::size_t l : labels) {
        out.push_back(ids.try_emplace(l, ids.size()).first->second);
    }
    count = ids.size();
    return out;
}

Contingency contingency(std::span<const std::size_t> hyp, std::span<const std::size_t> ref) {
    if (hyp.size() != ref.size()) {
        throw ValidationError("label sequences differ in length (" + std::to_string(hyp.size()) + " vs " +
                              std::to_string(ref.size()) + ")");
    }
    if (hyp.empty()) {
        throw ValidationError("label sequences are empty");
    }
    Contingency t;
    const auto h = densify(hyp, t.rows);
    const auto r = densify(ref, t.cols);
    t.cells.assign(t.rows * t.cols, 0);
    t.row_totals.assign(t.rows, 0);
    t.col_totals.assign(t.cols, 0);
    for (std::size_t i = 0; i < h.size(); ++i) {
        ++t.cells[h[i] * t.cols + r[i]];
        ++t.row_totals[h[i]];
        ++t.col_totals[r[i]];
    }
    t.total = h.size();
    return t;
}

// Entropy in nats, each term written as p * (ln N - ln count) so that
// mutual information of a labeling with itself reproduces it bit for bit.
double entropy(const std::vector<std::size_t>& totals, double log_n, double n) {
    double h = 0.0;
    for (std::size_t c : totals) {
        if (c > 0) {
            const double x = static_cast<double>(c);
            h += (x / n) * (log_n - std::log(x));
        }
    }
    return h;
}

double pairs(double x) { return x * (x - 1.0) / 2.0; }

void check_same_n(const Segmentation& hyp, const Segmentation& ref) {
    if (hyp.n() != ref.n()) {
        throw ValidationError("hypothesis covers " + std::to_string(hyp.n()) + " frames, reference " +
                              std::to_string(ref.n()));
    }
}

std::size_t window_or_default(const Segmentation& hyp, const Segmentation& ref, std::optional<std::size_t> k) {
    check_same_n(hyp, ref);
    const std::size_t w = k.value_or(default_window_k(ref));
    if (w == 0) {
        throw ValidationError("window size must be >= 1");
    }
    if (ref.n() <= w) {
        throw ValidationError("window size " + std::to_string(w) + " needs n > k (n = " + std::to_string(ref.n()) +
                              ")");
    }
    return w;
}

} // namespace

std::vector<std::size_t> frame_labels(const Segmentation& seg) { return seg.frame_labels(); }

double cluster_accuracy(std::span<const std::size_t> hyp, std::span<const std::size_t> ref) {
    const Contingency t = contingency(hyp, ref);
    Matrix overlap(t.rows, t.cols);
    for (std::size_t r = 0; r < t.rows; ++r) {
        for (std::size_t c = 0; c < t.cols; ++c) {
            overlap(r, c) = static_cast<double>(t.at(r, c));
        }
    }
    const Assignment best = hungarian(overlap, Objective::Maximize);
    return 100.0 * best.total / static_cast<double>(t.total);
}

double nmi(std::span<const std::size_t> hyp, std::span<const std::size_t> ref) {
    const Contingency t = contingency(hyp, ref);
    const auto n = static_cast<double>(t.total);
    const double log_n = std::log(n);
    const double h_hyp = entropy(t.row_totals, log_n, n);
    const double h_ref = entropy(t.col_totals, log_n, n);
    if (h_hyp == 0.0 && h_ref == 0.0) {
        return 100.0;
    }
    double mi = 0.0;
    for (std::size_t r = 0; r < t.rows; ++r) {
        for (std::size_t c = 0; c < t.cols; ++c) {
            const std::size_t cell = t.at(r, c);
            if (cell == 0) {
                continue;
            }
            const double x = static_cast<double>(cell);
            mi += (x / n) * ((log_n - std::log(static_cast<double>(t.col_totals[c]))) +
                             (std::log(x) - std::log(static_cast<double>(t.row_totals[r]))));
        }
    }
    const double score = 100.0 * (mi / ((h_hyp + h_ref) / 2.0));
    return std::clamp(score, 0.0, 100.0);
}

double ari(std::span<const std::size_t> hyp, std::span<const std::size_t> ref) {
    const Contingency t = contingency(hyp, ref);
    if (t.total < 2) {
        return 100.0;
    }
    double index = 0.0;
    for (std::size_t cell : t.cells) {
        index += pairs(static_cast<double>(cell));
    }
    double sum_rows = 0.0;
    for (std::size_t c : t.row_totals) {
        sum_rows += pairs(static_cast<double>(c));
    }
    double sum_cols = 0.0;
    for (std::size_t c : t.col_totals) {
        sum_cols += pairs(static_cast<double>(c));
    }
    const double expected = sum_rows * sum_cols / pairs(static_cast<double>(t.total));
    const double max_index = (sum_rows + sum_cols) / 2.0;
    // Both labelings trivial (one cluster each, or all singletons).
    if (max_index == expected) {
        return 100.0;
    }
    return std::min(100.0, 100.0 * ((index - expected) / (max_index - expected)));
}

std::size_t default_window_k(const Segmentation& ref) {
    const std::size_t segments = ref.segment_count();
    // round-half-down(n / (2 * segments))
    const std::size_t k = (ref.n() + segments - 1) / (2 * segments);
    return std::max<std::size_t>(1, k);
}

double pk(const Segmentation& hyp, const Segmentation& ref, std::optional<std::size_t> k) {
    const std::size_t w = window_or_default(hyp, ref, k);
    const auto h = hyp.frame_labels();
    const auto r = ref.frame_labels();
    const std::size_t windows = ref.n() - w;
    std::size_t errors = 0;
    for (std::size_t i = 0; i < windows; ++i) {
        const bool same_hyp = h[i] == h[i + w];
        const bool same_ref = r[i] == r[i + w];
        errors += same_hyp != same_ref ? 1 : 0;
    }
    return static_cast<double>(errors) / static_cast<double>(windows);
}

double windowdiff(const Segmentation& hyp, const Segmentation& ref, std::optional<std::size_t> k) {
    const std::size_t w = window_or_default(hyp, ref, k);
    const std::size_t n = ref.n();
    // Labels count the breaks at or before each frame, so the breaks in
    // (i, i+k] number label[i+k] - label[i].
    const auto h = hyp.frame_labels();
    const auto r = ref.frame_labels();
    const std::size_t windows = n - w;
    std::size_t errors = 0;
    for (std::size_t i = 0; i < windows; ++i) {
        errors += (h[i + w] - h[i]) != (r[i + w] - r[i]) ? 1 : 0;
    }
    return static_cast<double>(errors) / static_cast<double>(windows);
}

double ded(const Segmentation& hyp, const Segmentation& ref) {
    check_same_n(hyp, ref);
    return 100.0 - cluster_accuracy(hyp.frame_labels(), ref.frame_labels());
}

MetricReport evaluate(const Segmentation& hyp, const Segmentation& ref, std::optional<std::size_t> k) {
    check_same_n(hyp, ref);
    const auto h = hyp.frame_labels();
    const auto r = ref.frame_labels();
    MetricReport out;
    out.window_k = window_or_default(hyp, ref, k);
    out.acc = cluster_accuracy(h, r);
    out.nmi = nmi(h, r);
    out.ari = ari(h, r);
    out.pk_error = pk(hyp, ref, out.window_k);
    out.pk_score = 100.0 * (1.0 - out.pk_error);
    out.windowdiff_error = windowdiff(hyp, ref, out.window_k);
    out.ded_error = 100.0 - out.acc;
    return out;
}

MultiRefReport aggregate_multi(const Segmentation& hyp, std::span<const ReferenceAnnotation> refs,
                               std::optional<std::size_t> k) {
    if (refs.empty()) {
        throw ValidationError("no reference annotations to evaluate against");
    }
    MultiRefReport out;
    for (const auto& ref : refs) {
        if (ref.segmentation.n() != hyp.n()) {
            throw ValidationError("annotator '" + ref.annotator_id + "' covers " +
                                  std::to_string(ref.segmentation.n()) + " frames, hypothesis " +
                                  std::to_string(hyp.n()));
        }
        out.per_annotator.push_back({ref.annotator_id, evaluate(hyp, ref.segmentation, k)});
    }

    const MetricReport& first = out.per_annotator.front().report;
    MetricReport best = first;
    MetricReport sum{};
    bool same_k = true;
    for (const auto& [id, m] : out.per_annotator) {
        best.acc = std::max(best.acc, m.acc);
        best.nmi = std::max(best.nmi, m.nmi);
        best.ari = std::max(best.ari, m.ari);
        best.pk_error = std::min(best.pk_error, m.pk_error);
        best.pk_score = std::max(best.pk_score, m.pk_score);
        best.windowdiff_error = std::min(best.windowdiff_error, m.windowdiff_error);
        best.ded_error = std::min(best.ded_error, m.ded_error);
        sum.acc += m.acc;
        sum.nmi += m.nmi;
        sum.ari += m.ari;
        sum.pk_error += m.pk_error;
        sum.pk_score += m.pk_score;
        sum.windowdiff_error += m.windowdiff_error;
        sum.ded_error += m.ded_error;
        same_k = same_k && m.window_k == first.window_k;
    }
    const auto count = static_cast<double>(out.per_annotator.size());
    out.mean = MetricReport{sum.acc / count,
                            sum.nmi / count,
                            sum.ari / count,
                            sum.pk_error / count,
                            sum.pk_score / count,
                            sum.windowdiff_error / count,
                            sum.ded_error / count,
                            0};
    // A mean of equal values can round past them; it never beats the best.
    out.mean.acc = std::min(out.mean.acc, best.acc);
    out.mean.nmi = std::min(out.mean.nmi, best.nmi);
    out.mean.ari = std::min(out.mean.ari, best.ari);
    out.mean.pk_error = std::max(out.mean.pk_error, best.pk_error);
    out.mean.pk_score = std::min(out.mean.pk_score, best.pk_score);
    out.mean.windowdiff_error = std::max(out.mean.windowdiff_error, best.windowdiff_error);
    out.mean.ded_error = std::max(out.mean.ded_error, best.ded_error);
    best.window_k = same_k ? first.window_k : 0;
    out.mean.window_k = best.window_k;
    out.best = best;
    return out;
}

} // namespace mdlseg
