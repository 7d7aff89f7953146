#include "mdlseg/documents.hpp"

#include "mdlseg/error.hpp"

#include <fstream>
#include <sstream>

namespace mdlseg {

Json segmentation_document(const Segmentation& seg, std::optional<double> total_bits, std::string_view method) {
    Json doc;
    doc["spec_version"] = kDocumentVersion;
    doc["method"] = method;
    doc["n"] = seg.n();
    doc["breaks"] = seg.breaks();
    doc["total_bits"] = total_bits ? Json(*total_bits) : Json(nullptr);
    Json segments = Json::array();
    for (const auto& s : seg.segments()) {
        segments.push_back({{"start", s.start}, {"end", s.end}});
    }
    doc["segments"] = std::move(segments);
    return doc;
}

Segmentation segmentation_from_document(const Json& doc) {
    try {
        return Segmentation(doc.at("n").get<std::size_t>(), doc.at("breaks").get<std::vector<std::size_t>>());
    } catch (const Json::exception& e) {
        throw IoError(std::string("segmentation document: ") + e.what());
    } catch (const ValidationError& e) {
        throw IoError(std::string("segmentation document: ") + e.what());
    }
}

Json metric_report_json(const MetricReport& r) {
    return Json{{"acc", r.acc},
                {"nmi", r.nmi},
                {"ari", r.ari},
                {"pk_error", r.pk_error},
                {"pk_score", r.pk_score},
                {"windowdiff_error", r.windowdiff_error},
                {"ded_error", r.ded_error},
                {"window_k", r.window_k}};
}

Json multi_ref_document(const MultiRefReport& report) {
    Json doc;
    doc["spec_version"] = kDocumentVersion;
    Json per = Json::array();
    for (const auto& a : report.per_annotator) {
        Json entry = metric_report_json(a.report);
        entry["annotator_id"] = a.annotator_id;
        per.push_back(std::move(entry));
    }
    doc["per_annotator"] = std::move(per);
    doc["best"] = metric_report_json(report.best);
    doc["mean"] = metric_report_json(report.mean);
    return doc;
}

AssignmentInput assignment_input_from_document(const Json& doc) {
    try {
        AssignmentInput input;
        for (const auto& c : doc.at("characters")) {
            input.bank.characters.push_back(
                {c.at("name").get<std::string>(), c.at("faces").get<std::vector<FaceVector>>()});
        }
        input.faces.scenes = doc.at("scenes").get<std::vector<std::vector<FaceVector>>>();
        for (const auto& s : doc.at("speakers")) {
            input.speakers.push_back({s.at("id").get<std::string>(), s.at("scenes").get<std::vector<std::size_t>>()});
        }
        return input;
    } catch (const Json::exception& e) {
        throw IoError(std::string("assignment problem document: ") + e.what());
    }
}

Json assignment_input_document(const AssignmentInput& input) {
    Json doc;
    Json characters = Json::array();
    for (const auto& c : input.bank.characters) {
        characters.push_back({{"name", c.name}, {"faces", c.faces}});
    }
    doc["characters"] = std::move(characters);
    doc["scenes"] = input.faces.scenes;
    Json speakers = Json::array();
    for (const auto& s : input.speakers) {
        speakers.push_back({{"id", s.id}, {"scenes", s.scenes}});
    }
    doc["speakers"] = std::move(speakers);
    return doc;
}

Json name_assignment_document(const AssignmentProblem& problem, const NameAssignment& names) {
    Json doc;
    doc["spec_version"] = kDocumentVersion;
    const auto& threshold = problem.speaker_costs.threshold;
    doc["threshold"] = threshold ? Json(*threshold) : Json(nullptr);
    Json entries = Json::array();
    for (const auto& e : names.entries) {
        entries.push_back({{"speaker", e.speaker_id}, {"character", e.character.value_or("UNASSIGNED")}});
    }
    doc["assignments"] = std::move(entries);
    return doc;
}

std::string to_text(const Json& doc) { return doc.dump(2) + "\n"; }

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size()))) {
        throw IoError("cannot write " + path.string());
    }
}

} // namespace mdlseg
