#pragma once

// Segmentation scores: Pk, WindowDiff and differential edit distance over
// break positions, plus cluster accuracy, NMI and ARI over frame labels.

#include "mdlseg/feature_io.hpp"
#include "mdlseg/segmentation.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mdlseg {

struct MetricReport {
    double acc = 0.0;               // percent, higher is better
    double nmi = 0.0;               // percent, higher is better
    double ari = 0.0;               // percent in [-100, 100], higher is better
    double pk_error = 0.0;          // fraction, lower is better
    double pk_score = 0.0;          // 100 * (1 - pk_error)
    double windowdiff_error = 0.0;  // fraction, lower is better
    double ded_error = 0.0;         // percent, lower is better
    std::size_t window_k = 0;       // 0 when aggregated over differing k

    friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

struct AnnotatorReport {
    std::string annotator_id;
    MetricReport report;
};

struct MultiRefReport {
    std::vector<AnnotatorReport> per_annotator;
    MetricReport best;  // closest annotator, chosen per metric
    MetricReport mean;
};

std::vector<std::size_t> frame_labels(const Segmentation& seg);

/// Best one-to-one matching of hypothesis labels to reference labels,
/// as percent of frames matched. Labels are nominal.
double cluster_accuracy(std::span<const std::size_t> hyp, std::span<const std::size_t> ref);

/// I(H;R) / ((H(H) + H(R)) / 2), in percent, natural logs. Two
/// single-cluster labelings score 100.
double nmi(std::span<const std::size_t> hyp, std::span<const std::size_t> ref);

/// Adjusted Rand index in percent.
double ari(std::span<const std::size_t> hyp, std::span<const std::size_t> ref);

/// Half the mean reference segment length, halves rounded down, at least 1.
std::size_t default_window_k(const Segmentation& ref);

/// Fraction of windows [i, i+k], i in [0, n-k), on which hyp and ref
/// disagree about frames i and i+k sharing a segment.
double pk(const Segmentation& hyp, const Segmentation& ref, std::optional<std::size_t> k = std::nullopt);

/// Fraction of windows on which hyp and ref place a different number of
/// breaks in (i, i+k].
double windowdiff(const Segmentation& hyp, const Segmentation& ref, std::optional<std::size_t> k = std::nullopt);

/// Percent of frames outside the best one-to-one overlap matching of
/// hypothesis segments to reference segments; 100 - acc.
double ded(const Segmentation& hyp, const Segmentation& ref);

MetricReport evaluate(const Segmentation& hyp, const Segmentation& ref, std::optional<std::size_t> k = std::nullopt);

/// Throws ValidationError for an empty reference list or an n mismatch.
MultiRefReport aggregate_multi(const Segmentation& hyp, std::span<const ReferenceAnnotation> refs,
                               std::optional<std::size_t> k = std::nullopt);

} // namespace mdlseg
