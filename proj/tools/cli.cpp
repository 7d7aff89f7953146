#include "cli.hpp"

#include "mdlseg/baselines.hpp"
#include "mdlseg/bench.hpp"
#include "mdlseg/documents.hpp"
#include "mdlseg/error.hpp"
#include "mdlseg/feature_io.hpp"
#include "mdlseg/mdl.hpp"
#include "mdlseg/name_assignment.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mdlseg::cli {

namespace {

struct Options {
    std::string input;
    std::string output;
    std::string refs;
    std::string format;
    std::string max_scene_len = "none";
    double var_floor = kDefaultVarFloor;
    std::string precision_bits = "auto";
    unsigned threads = 1;
    std::string method;
    std::optional<std::size_t> mean_len;
    std::optional<std::size_t> k;
    std::size_t max_iters = 100;
    std::uint64_t seed = 0;
    std::optional<std::size_t> window_k;
    std::string lengths;
    std::size_t d = 2;
    double separation = 10.0;
    double noise = 0.1;
};

std::size_t parse_count(const std::string& text, const std::string& flag) {
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    const auto result = std::from_chars(text.data(), end, value);
    if (text.empty() || result.ec != std::errc() || result.ptr != end) {
        throw ValidationError(flag + " expects a non-negative integer, got '" + text + "'");
    }
    return value;
}

MdlParams mdl_params(const Options& o) {
    MdlParams p;
    p.var_floor = o.var_floor;
    if (o.precision_bits != "auto") {
        p.precision_bits = std::stoi(o.precision_bits);
    }
    p.max_segment_length = std::nullopt;
    if (o.max_scene_len != "none") {
        p.max_segment_length = parse_count(o.max_scene_len, "--max-scene-len");
    }
    p.validate();
    return p;
}

FeatureFormat feature_format(const Options& o, const std::string& path) {
    if (o.format == "csv") {
        return FeatureFormat::Csv;
    }
    if (o.format == "binary") {
        return FeatureFormat::Binary;
    }
    return format_from_path(path);
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
    if (o.output.empty()) {
        out << text;
    } else {
        write_text_file(o.output, text);
    }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void add_mdl_options(CLI::App& cmd, Options& o) {
    cmd.add_option("--max-scene-len", o.max_scene_len, "Longest segment in keyframes, or 'none'");
    cmd.add_option("--var-floor", o.var_floor, "Minimum per-dimension variance")->check(CLI::PositiveNumber);
    cmd.add_option("--precision-bits", o.precision_bits, "Parameter precision m")
        ->check(CLI::IsMember({"16", "32", "64", "auto"}));
    cmd.add_option("--threads", o.threads, "Worker threads for the cost table")->check(CLI::Range(1U, 1024U));
}

void add_io_options(CLI::App& cmd, Options& o, bool input_required = true) {
    auto* in = cmd.add_option("--input", o.input, "Input file");
    if (input_required) {
        in->required();
    }
    cmd.add_option("--output,--out", o.output, "Output file (default: standard output)");
    cmd.add_option("--format", o.format, "Feature file format (default: from extension)")
        ->check(CLI::IsMember({"csv", "binary"}));
}

int cmd_segment(const Options& o, bool exhaustive, std::ostream& out, std::ostream& err) {
    const MdlParams params = mdl_params(o);
    const auto seq = load_features(o.input, feature_format(o, o.input));
    const auto start = std::chrono::steady_clock::now();
    const SegmentationResult result =
        exhaustive ? brute_force_segment(seq, params).best : segment_sequence(seq, params, o.threads);
    const double wall = seconds_since(start);
    emit(o, to_text(segmentation_document(result.segmentation, result.total_bits, exhaustive ? "oracle" : "mdlseg")),
         out);
    std::ostream& info = o.output.empty() ? err : out;
    info << "n=" << seq.n() << " breaks=" << result.segmentation.breaks().size()
         << " total_bits=" << result.total_bits << " wall_s=" << wall << '\n';
    return kExitOk;
}

int cmd_baseline(const Options& o, std::ostream& out, std::ostream& err) {
    const auto seq = load_features(o.input, feature_format(o, o.input));
    if (o.method == "mdlseg") {
        return cmd_segment(o, false, out, err);
    }
    BaselineSpec spec;
    if (o.method == "unif") {
        if (!o.mean_len) {
            throw ValidationError("--method unif needs --mean-len");
        }
        spec.kind = BaselineKind::Uniform;
        spec.mean_len = *o.mean_len;
    } else if (o.method == "unif-oracle") {
        if (!o.k) {
            throw ValidationError("--method unif-oracle needs --k (true scene count)");
        }
        spec.kind = BaselineKind::UniformOracle;
        spec.k_true = *o.k;
    } else {
        if (!o.k) {
            throw ValidationError("--method kmeans needs --k (cluster count)");
        }
        spec.kind = BaselineKind::ContiguousKmeans;
        spec.k_clusters = *o.k;
        spec.max_iters = o.max_iters;
        spec.seed = o.seed;
    }
    const auto start = std::chrono::steady_clock::now();
    const Segmentation seg = run_baseline(seq, spec);
    const double wall = seconds_since(start);
    emit(o, to_text(segmentation_document(seg, std::nullopt, o.method)), out);
    std::ostream& info = o.output.empty() ? err : out;
    info << "n=" << seq.n() << " breaks=" << seg.breaks().size() << " wall_s=" << wall << '\n';
    return kExitOk;
}

Segmentation read_hypothesis(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    char first = 0;
    in >> first;
    if (first == '{') {
        return segmentation_from_document(read_json_file(path));
    }
    const auto annotations = load_annotations(path);
    if (annotations.empty()) {
        throw IoError(path + ": no segmentation found");
    }
    return annotations.front().segmentation;
}

int cmd_eval(const Options& o, std::ostream& out) {
    const Segmentation hyp = read_hypothesis(o.input);
    const auto refs = load_annotations(o.refs);
    const MultiRefReport report = aggregate_multi(hyp, refs, o.window_k);
    emit(o, to_text(multi_ref_document(report)), out);
    return kExitOk;
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
    BenchConfig config;
    config.mdl = mdl_params(o);
    config.threads = o.threads;
    config.mean_len = o.mean_len;
    config.kmeans_k = o.k;
    config.kmeans_max_iters = o.max_iters;
    config.seed = o.seed;
    config.window_k = o.window_k;
    const auto rows = run_bench(read_manifest(o.input), config);
    emit(o, bench_table_csv(rows), out);
    std::size_t failed = 0;
    for (const auto& row : rows) {
        if (!row.scores) {
            ++failed;
            err << "bench: " << row.item << " / " << row.method << ": " << row.error << '\n';
        }
    }
    err << "bench: " << rows.size() << " rows, " << failed << " failed\n";
    return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out) {
    SynthConfig config;
    std::stringstream lengths(o.lengths);
    for (std::string item; std::getline(lengths, item, ',');) {
        config.segment_lengths.push_back(parse_count(item, "--lengths"));
    }
    config.d = o.d;
    config.separation = o.separation;
    config.noise_sigma = o.noise;
    config.seed = o.seed;
    const auto comma = o.output.find(',');
    if (o.output.empty() || comma == std::string::npos) {
        throw ValidationError("synth needs --out FEATURES,ANNOTATIONS");
    }
    const std::string features_path = o.output.substr(0, comma);
    const std::string truth_path = o.output.substr(comma + 1);
    const SyntheticInstance instance = synth_sequence(config);
    save_features(features_path, instance.features, feature_format(o, features_path));
    save_annotations(truth_path, std::span(&instance.truth, 1));
    out << "n=" << instance.features.n() << " d=" << instance.features.d() << " breaks=";
    for (std::size_t i = 0; i < instance.truth.segmentation.breaks().size(); ++i) {
        out << (i ? "," : "") << instance.truth.segmentation.breaks()[i];
    }
    out << '\n';
    return kExitOk;
}

int cmd_assign(const Options& o, std::ostream& out) {
    const AssignmentInput input = assignment_input_from_document(read_json_file(o.input));
    const AssignmentProblem problem = make_assignment_problem(input.bank, input.faces, input.speakers);
    emit(o, to_text(name_assignment_document(problem, assign_names(problem))), out);
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Minimum-description-length video scene segmentation"};
    app.name(args.empty() ? "mdlseg" : args.front());
    app.require_subcommand(1);

    auto* segment = app.add_subcommand("segment", "Optimal MDL segmentation of a feature file");
    add_io_options(*segment, o);
    add_mdl_options(*segment, o);

    auto* oracle = app.add_subcommand("oracle", "Exhaustive-search segmentation (n <= 20)");
    add_io_options(*oracle, o);
    add_mdl_options(*oracle, o);

    auto* baseline = app.add_subcommand("baseline", "Reference segmenters");
    add_io_options(*baseline, o);
    add_mdl_options(*baseline, o);
    baseline->add_option("--method", o.method, "Segmenter")
        ->required()
        ->check(CLI::IsMember({"mdlseg", "unif", "unif-oracle", "kmeans"}));
    baseline->add_option("--mean-len", o.mean_len, "unif segment length");
    baseline->add_option("--k", o.k, "unif-oracle scene count / kmeans cluster count");
    baseline->add_option("--max-iters", o.max_iters, "kmeans iteration cap");
    baseline->add_option("--seed", o.seed, "kmeans seed");

    auto* eval = app.add_subcommand("eval", "Score a segmentation against annotators");
    eval->add_option("--input,--hyp", o.input, "Hypothesis (segmentation document or annotation file)")->required();
    eval->add_option("--refs", o.refs, "Reference annotation file")->required();
    eval->add_option("--output,--out", o.output, "Output file (default: standard output)");
    eval->add_option("--window-k", o.window_k, "Pk/WindowDiff window size");

    auto* bench = app.add_subcommand("bench", "Run every segmenter over a manifest");
    bench->add_option("--input", o.input, "Manifest JSON")->required();
    bench->add_option("--output,--out", o.output, "Output table (default: standard output)");
    add_mdl_options(*bench, o);
    bench->add_option("--mean-len", o.mean_len, "unif segment length (default: dataset mean)");
    bench->add_option("--k", o.k, "kmeans cluster count (default: reference scene count)");
    bench->add_option("--max-iters", o.max_iters, "kmeans iteration cap");
    bench->add_option("--seed", o.seed, "kmeans seed");
    bench->add_option("--window-k", o.window_k, "Pk/WindowDiff window size");

    auto* synth = app.add_subcommand("synth", "Write a synthetic feature file and its true breaks");
    synth->add_option("--lengths", o.lengths, "Comma-separated segment lengths")->required();
    synth->add_option("--d", o.d, "Dimensionality")->check(CLI::PositiveNumber);
    synth->add_option("--sep", o.separation, "Minimum distance between segment means");
    synth->add_option("--noise", o.noise, "Per-dimension noise standard deviation");
    synth->add_option("--seed", o.seed, "Random seed");
    synth->add_option("--output,--out", o.output, "FEATURES,ANNOTATIONS")->required();
    synth->add_option("--format", o.format, "Feature file format")->check(CLI::IsMember({"csv", "binary"}));

    auto* assign = app.add_subcommand("assign", "Assign character names to speaker IDs");
    assign->add_option("--input", o.input, "Assignment problem JSON")->required();
    assign->add_option("--output,--out", o.output, "Output file (default: standard output)");

    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (segment->parsed()) {
            return cmd_segment(o, false, out, err);
        }
        if (oracle->parsed()) {
            return cmd_segment(o, true, out, err);
        }
        if (baseline->parsed()) {
            return cmd_baseline(o, out, err);
        }
        if (eval->parsed()) {
            return cmd_eval(o, out);
        }
        if (bench->parsed()) {
            return cmd_bench(o, out, err);
        }
        if (synth->parsed()) {
            return cmd_synth(o, out);
        }
        return cmd_assign(o, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace mdlseg::cli
