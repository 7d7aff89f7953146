#include "mdlseg/bench.hpp"

#include "mdlseg/baselines.hpp"
#include "mdlseg/documents.hpp"
#include "mdlseg/error.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace mdlseg {

namespace {

std::size_t reference_scene_count(const BenchInput& input) {
    double total = 0.0;
    for (const auto& r : input.references) {
        total += static_cast<double>(r.segmentation.segment_count());
    }
    const auto k = static_cast<std::size_t>(std::llround(total / static_cast<double>(input.references.size())));
    return std::clamp<std::size_t>(k, 1, input.features.n());
}

std::vector<BenchRow> bench_input(const BenchInput& input, const BenchConfig& config, std::size_t mean_len) {
    std::vector<BenchRow> rows;
    for (std::string_view method : kBenchMethods) {
        BenchRow row{input.name, std::string(method), input.features.n(), std::nullopt, {}, 0.0};
        try {
            if (input.references.empty()) {
                throw ValidationError("item has no reference annotations");
            }
            const auto start = std::chrono::steady_clock::now();
            std::optional<Segmentation> hyp;
            if (method == "mdlseg") {
                hyp = segment_sequence(input.features, config.mdl, config.threads).segmentation;
            } else if (method == "unif") {
                hyp = uniform_breaks(input.features.n(), mean_len);
            } else if (method == "unif-oracle") {
                hyp = uniform_oracle_breaks(input.features.n(), reference_scene_count(input));
            } else {
                BaselineSpec spec;
                spec.kind = BaselineKind::ContiguousKmeans;
                spec.k_clusters = config.kmeans_k.value_or(reference_scene_count(input));
                spec.max_iters = config.kmeans_max_iters;
                spec.seed = config.seed;
                hyp = contiguous_kmeans(input.features, spec);
            }
            row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            row.scores = aggregate_multi(*hyp, input.references, config.window_k);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

} // namespace

std::vector<BenchItem> read_manifest(const std::filesystem::path& path) {
    const Json doc = read_json_file(path);
    const auto base = path.parent_path();
    std::vector<BenchItem> items;
    try {
        for (const auto& entry : doc.at("items")) {
            std::filesystem::path features = entry.at("features").get<std::string>();
            std::filesystem::path annotations = entry.at("annotations").get<std::string>();
            if (features.is_relative()) {
                features = base / features;
            }
            if (annotations.is_relative()) {
                annotations = base / annotations;
            }
            const std::string name = entry.contains("name") ? entry.at("name").get<std::string>()
                                                            : features.stem().string();
            items.push_back({name, features, annotations});
        }
    } catch (const Json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
    return items;
}

std::size_t dataset_mean_segment_length(const std::vector<BenchInput>& inputs) {
    double frames = 0.0;
    double segments = 0.0;
    for (const auto& input : inputs) {
        for (const auto& r : input.references) {
            frames += static_cast<double>(r.segmentation.n());
            segments += static_cast<double>(r.segmentation.segment_count());
        }
    }
    if (segments == 0.0) {
        return 1;
    }
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(frames / segments)));
}

std::vector<BenchRow> run_bench(const std::vector<BenchInput>& inputs, const BenchConfig& config) {
    const std::size_t mean_len = config.mean_len.value_or(dataset_mean_segment_length(inputs));
    std::vector<BenchRow> rows;
    for (const auto& input : inputs) {
        auto item_rows = bench_input(input, config, mean_len);
        rows.insert(rows.end(), std::make_move_iterator(item_rows.begin()), std::make_move_iterator(item_rows.end()));
    }
    return rows;
}

std::vector<BenchRow> run_bench(const std::vector<BenchItem>& items, const BenchConfig& config) {
    std::vector<std::optional<BenchInput>> loaded;
    std::vector<std::string> load_errors(items.size());
    std::vector<BenchInput> good;
    for (std::size_t i = 0; i < items.size(); ++i) {
        try {
            auto features = load_features(items[i].features, format_from_path(items[i].features));
            auto refs = load_annotations(items[i].annotations);
            loaded.emplace_back(BenchInput{items[i].name, std::move(features), std::move(refs)});
            good.push_back(*loaded.back());
        } catch (const std::exception& e) {
            loaded.emplace_back(std::nullopt);
            load_errors[i] = e.what();
        }
    }
    const std::size_t mean_len = config.mean_len.value_or(dataset_mean_segment_length(good));
    std::vector<BenchRow> rows;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (!loaded[i]) {
            for (std::string_view method : kBenchMethods) {
                rows.push_back({items[i].name, std::string(method), 0, std::nullopt, load_errors[i], 0.0});
            }
            continue;
        }
        auto item_rows = bench_input(*loaded[i], config, mean_len);
        rows.insert(rows.end(), std::make_move_iterator(item_rows.begin()), std::make_move_iterator(item_rows.end()));
    }
    return rows;
}

std::string bench_table_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out.precision(10);
    out << "item,method,n,status,window_k";
    for (const char* metric : {"acc", "nmi", "ari", "pk_score", "pk_error", "windowdiff_error", "ded_error"}) {
        out << ',' << metric << "_best," << metric << "_mean";
    }
    out << ",runtime_s,per_frame_runtime_s\n";
    for (const auto& row : rows) {
        out << csv_field(row.item) << ',' << row.method << ',' << row.n << ','
            << (row.scores ? std::string("ok") : csv_field("error: " + row.error));
        if (row.scores) {
            const auto& b = row.scores->best;
            const auto& m = row.scores->mean;
            out << ',' << b.window_k << ',' << b.acc << ',' << m.acc << ',' << b.nmi << ',' << m.nmi << ',' << b.ari
                << ',' << m.ari << ',' << b.pk_score << ',' << m.pk_score << ',' << b.pk_error << ',' << m.pk_error
                << ',' << b.windowdiff_error << ',' << m.windowdiff_error << ',' << b.ded_error << ','
                << m.ded_error;
        } else {
            out << std::string(15, ',');
        }
        out << ',' << row.runtime_s << ',' << row.per_frame_runtime_s() << '\n';
    }
    return out.str();
}

} // namespace mdlseg
