#pragma once

// Structured-text (JSON) documents exchanged by the command-line tools.

#include "mdlseg/metrics.hpp"
#include "mdlseg/name_assignment.hpp"
#include "mdlseg/segmentation.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace mdlseg {

using Json = nlohmann::ordered_json;

/// Written into every document as "spec_version".
inline constexpr int kDocumentVersion = 1;

/// {"spec_version", "method", "n", "breaks", "total_bits", "segments"};
/// total_bits is null for segmenters that do not score bits.
Json segmentation_document(const Segmentation& seg, std::optional<double> total_bits, std::string_view method);

/// Reads "n" and "breaks"; throws IoError when they are missing or invalid.
Segmentation segmentation_from_document(const Json& doc);

Json metric_report_json(const MetricReport& report);
Json multi_ref_document(const MultiRefReport& report);

struct AssignmentInput {
    FaceBank bank;
    SceneFaces faces;
    std::vector<Speaker> speakers;
};

/// {"characters": [{"name", "faces": [[...]]}], "scenes": [[[...]]],
///  "speakers": [{"id", "scenes": [...]}]}
AssignmentInput assignment_input_from_document(const Json& doc);
Json assignment_input_document(const AssignmentInput& input);
Json name_assignment_document(const AssignmentProblem& problem, const NameAssignment& names);

/// Pretty-printed with a trailing newline.
std::string to_text(const Json& doc);
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace mdlseg
