#include "mdlseg/feature_io.hpp"

#include "half.hpp"
#include "mdlseg/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace mdlseg {

namespace {

constexpr std::array<char, 4> kMagic = {'M', 'D', 'L', 'S'};
constexpr std::uint16_t kBinaryVersion = 1;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return parts;
}

bool parse_double(std::string_view token, double& out) {
    if (token.empty()) {
        return false;
    }
    if (token.front() == '+') {
        token.remove_prefix(1);
    }
    const auto* end = token.data() + token.size();
    const auto result = std::from_chars(token.data(), end, out);
    return result.ec == std::errc() && result.ptr == end;
}

template <typename Int>
bool parse_index(std::string_view token, Int& out) {
    const auto* end = token.data() + token.size();
    const auto result = std::from_chars(token.data(), end, out);
    return !token.empty() && result.ec == std::errc() && result.ptr == end;
}

// Parses "# t,f0,f1" / "# f0,f1". Returns (has_timestamps, feature count).
std::pair<bool, std::size_t> parse_csv_header(std::string_view line) {
    const auto body = trim(line.substr(1));
    const auto names = split(body, ',');
    bool timestamps = false;
    std::size_t first = 0;
    if (!names.empty() && names.front() == "t") {
        timestamps = true;
        first = 1;
    }
    if (names.size() <= first) {
        throw IoError("malformed header: no feature columns");
    }
    for (std::size_t i = first; i < names.size(); ++i) {
        const std::string expected = "f" + std::to_string(i - first);
        if (names[i] != expected) {
            throw IoError("malformed header at column " + std::to_string(i + 1) + ": expected '" +
                          expected + "', found '" + std::string(names[i]) + "'");
        }
    }
    return {timestamps, names.size() - first};
}

template <typename T>
void put_le(std::ostream& out, T value) {
    std::array<char, sizeof(T)> bytes{};
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFFU);
    }
    out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in, const char* what) {
    std::array<unsigned char, sizeof(T)> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
        throw IoError(std::string("truncated binary features: missing ") + what);
    }
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    }
    return static_cast<T>(value);
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

} // namespace

FeatureFormat format_from_path(const std::filesystem::path& path) {
    return path.extension() == ".bin" ? FeatureFormat::Binary : FeatureFormat::Csv;
}

FeatureSequence::FeatureSequence(std::size_t n, std::size_t d, std::vector<double> values,
                                 std::optional<std::vector<double>> timestamps)
    : n_(n), d_(d), values_(std::move(values)), timestamps_(std::move(timestamps)) {
    if (n_ == 0 || d_ == 0) {
        throw ValidationError("feature sequence needs n >= 1 and d >= 1");
    }
    if (values_.size() != n_ * d_) {
        throw ValidationError("feature matrix has " + std::to_string(values_.size()) +
                              " values, expected n*d = " + std::to_string(n_ * d_));
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            throw ValidationError("non-finite value at row " + std::to_string(k / d_) + ", column " +
                                  std::to_string(k % d_));
        }
    }
    if (timestamps_) {
        if (timestamps_->size() != n_) {
            throw ValidationError("timestamp count does not match n");
        }
        for (std::size_t i = 0; i < n_; ++i) {
            if (!std::isfinite((*timestamps_)[i]) || (i > 0 && (*timestamps_)[i] < (*timestamps_)[i - 1])) {
                throw ValidationError("timestamps must be finite and non-decreasing (row " +
                                      std::to_string(i) + ")");
            }
        }
    }
}

FeatureSequence read_features_csv(std::istream& in) {
    std::optional<std::size_t> width;
    bool has_timestamps = false;
    bool header_allowed = true;
    std::vector<double> values;
    std::vector<double> timestamps;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty()) {
            continue;
        }
        if (text.front() == '#') {
            if (!header_allowed) {
                throw IoError("malformed header: '#' line after data at line " + std::to_string(line_no));
            }
            const auto [ts, d] = parse_csv_header(text);
            has_timestamps = ts;
            width = d + (ts ? 1 : 0);
            header_allowed = false;
            continue;
        }
        header_allowed = false;
        const auto fields = split(text, ',');
        ++rows;
        if (!width) {
            width = fields.size();
        } else if (fields.size() != *width) {
            throw IoError("inconsistent row width at row " + std::to_string(rows) + " (line " +
                          std::to_string(line_no) + "): expected " + std::to_string(*width) +
                          " columns, found " + std::to_string(fields.size()));
        }
        for (std::size_t col = 0; col < fields.size(); ++col) {
            double v = 0.0;
            if (!parse_double(fields[col], v)) {
                throw IoError("unparseable value '" + std::string(fields[col]) + "' at row " +
                              std::to_string(rows) + ", column " + std::to_string(col + 1));
            }
            if (!std::isfinite(v)) {
                throw IoError("non-finite value at row " + std::to_string(rows) + ", column " +
                              std::to_string(col + 1));
            }
            if (has_timestamps && col == 0) {
                timestamps.push_back(v);
            } else {
                values.push_back(v);
            }
        }
    }
    if (rows == 0) {
        throw IoError("feature file contains no rows (n = 0)");
    }
    const std::size_t d = *width - (has_timestamps ? 1 : 0);
    try {
        if (has_timestamps) {
            return FeatureSequence(rows, d, std::move(values), std::move(timestamps));
        }
        return FeatureSequence(rows, d, std::move(values));
    } catch (const ValidationError& e) {
        throw IoError(e.what());
    }
}

void write_features_csv(std::ostream& out, const FeatureSequence& seq) {
    const auto& ts = seq.timestamps();
    out << "# ";
    if (ts) {
        out << "t,";
    }
    for (std::size_t j = 0; j < seq.d(); ++j) {
        out << (j ? "," : "") << 'f' << j;
    }
    out << '\n';
    const auto old_precision = out.precision(17);
    for (std::size_t i = 0; i < seq.n(); ++i) {
        if (ts) {
            out << (*ts)[i] << ',';
        }
        for (std::size_t j = 0; j < seq.d(); ++j) {
            out << (j ? "," : "") << seq.at(i, j);
        }
        out << '\n';
    }
    out.precision(old_precision);
}

FeatureSequence read_features_binary(std::istream& in) {
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw IoError("not a binary feature file (bad magic)");
    }
    const auto version = get_le<std::uint16_t>(in, "version");
    if (version != kBinaryVersion) {
        throw IoError("unsupported binary feature version " + std::to_string(version));
    }
    const auto n = get_le<std::uint64_t>(in, "n");
    const auto d = get_le<std::uint32_t>(in, "d");
    const auto precision = get_le<std::uint8_t>(in, "precision tag");
    if (precision != 16 && precision != 32 && precision != 64) {
        throw IoError("invalid precision tag " + std::to_string(precision));
    }
    if (n == 0 || d == 0) {
        throw IoError("binary features declare n = " + std::to_string(n) + ", d = " + std::to_string(d));
    }
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n) * d);
    for (std::uint64_t k = 0; k < n * d; ++k) {
        double v = 0.0;
        if (precision == 16) {
            v = detail::decode_half(get_le<std::uint16_t>(in, "values"));
        } else if (precision == 32) {
            v = std::bit_cast<float>(get_le<std::uint32_t>(in, "values"));
        } else {
            v = std::bit_cast<double>(get_le<std::uint64_t>(in, "values"));
        }
        if (!std::isfinite(v)) {
            throw IoError("non-finite value at row " + std::to_string(k / d + 1) + ", column " +
                          std::to_string(k % d + 1));
        }
        values.push_back(v);
    }
    return FeatureSequence(static_cast<std::size_t>(n), d, std::move(values));
}

void write_features_binary(std::ostream& out, const FeatureSequence& seq, std::optional<int> precision_bits) {
    const int bits = precision_bits.value_or(infer_precision_bits(seq));
    if (bits != 16 && bits != 32 && bits != 64) {
        throw ValidationError("precision must be 16, 32 or 64 bits");
    }
    for (double v : seq.values()) {
        if (!exactly_representable(v, bits)) {
            throw ValidationError("value " + std::to_string(v) + " is not exact at " + std::to_string(bits) +
                                  " bits");
        }
    }
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint16_t>(out, kBinaryVersion);
    put_le<std::uint64_t>(out, seq.n());
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(seq.d()));
    put_le<std::uint8_t>(out, static_cast<std::uint8_t>(bits));
    for (double v : seq.values()) {
        if (bits == 16) {
            put_le<std::uint16_t>(out, detail::encode_half(v));
        } else if (bits == 32) {
            put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
        } else {
            put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
        }
    }
}

FeatureSequence load_features(const std::filesystem::path& path, FeatureFormat format) {
    try {
        if (format == FeatureFormat::Binary) {
            auto in = open_in(path, std::ios::in | std::ios::binary);
            return read_features_binary(in);
        }
        auto in = open_in(path);
        return read_features_csv(in);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void save_features(const std::filesystem::path& path, const FeatureSequence& seq, FeatureFormat format) {
    if (format == FeatureFormat::Binary) {
        auto out = open_out(path, std::ios::out | std::ios::binary);
        write_features_binary(out, seq);
    } else {
        auto out = open_out(path);
        write_features_csv(out, seq);
    }
}

bool exactly_representable(double value, int bits) {
    switch (bits) {
    case 16:
        return detail::fits_half(value);
    case 32: {
        if (!std::isfinite(value) || std::fabs(value) > static_cast<double>(std::numeric_limits<float>::max())) {
            return false;
        }
        return static_cast<double>(static_cast<float>(value)) == value;
    }
    case 64:
        return std::isfinite(value);
    default:
        throw ValidationError("precision must be 16, 32 or 64 bits");
    }
}

int infer_precision_bits(const FeatureSequence& seq) {
    int bits = 16;
    for (double v : seq.values()) {
        while (bits < 64 && !exactly_representable(v, bits)) {
            bits *= 2;
        }
        if (bits == 64) {
            break;
        }
    }
    return bits;
}

SyntheticInstance synth_sequence(const SynthConfig& config) {
    if (config.segment_lengths.empty()) {
        throw ValidationError("segment length list is empty");
    }
    if (config.d == 0) {
        throw ValidationError("dimensionality must be >= 1");
    }
    if (!(config.separation > 0.0) || !(config.noise_sigma >= 0.0)) {
        throw ValidationError("separation must be > 0 and noise_sigma >= 0");
    }
    for (std::size_t len : config.segment_lengths) {
        if (len == 0) {
            throw ValidationError("segment lengths must be >= 1");
        }
    }

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    const std::size_t d = config.d;

    // Rejection-sample means from N(0, spread^2 I); widen the spread if a
    // placement keeps colliding.
    std::vector<std::vector<double>> means;
    double spread = config.separation;
    for (std::size_t k = 0; k < config.segment_lengths.size(); ++k) {
        std::vector<double> candidate(d);
        for (int attempt = 0;; ++attempt) {
            if (attempt > 0 && attempt % 200 == 0) {
                spread *= 1.5;
            }
            for (auto& c : candidate) {
                c = spread * unit(rng);
            }
            const bool far_enough = std::all_of(means.begin(), means.end(), [&](const auto& other) {
                double dist2 = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    dist2 += (candidate[j] - other[j]) * (candidate[j] - other[j]);
                }
                return dist2 >= config.separation * config.separation;
            });
            if (far_enough) {
                break;
            }
        }
        means.push_back(candidate);
    }

    std::vector<double> values;
    std::vector<std::size_t> breaks;
    std::size_t n = 0;
    for (std::size_t k = 0; k < config.segment_lengths.size(); ++k) {
        if (k > 0) {
            breaks.push_back(n);
        }
        for (std::size_t t = 0; t < config.segment_lengths[k]; ++t) {
            for (std::size_t j = 0; j < d; ++j) {
                values.push_back(means[k][j] + config.noise_sigma * unit(rng));
            }
        }
        n += config.segment_lengths[k];
    }
    return SyntheticInstance{FeatureSequence(n, d, std::move(values)),
                             ReferenceAnnotation{"truth", Segmentation(n, std::move(breaks))}};
}

std::vector<ReferenceAnnotation> read_annotations(std::istream& in) {
    std::optional<std::size_t> n;
    std::vector<ReferenceAnnotation> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty()) {
            continue;
        }
        const std::string where = "annotation line " + std::to_string(line_no);
        if (!n) {
            std::size_t value = 0;
            if (!text.starts_with("n=") || !parse_index(trim(text.substr(2)), value) || value == 0) {
                throw IoError(where + ": expected 'n=<N>' with N >= 1");
            }
            n = value;
            continue;
        }
        const auto colon = text.find(':');
        if (colon == std::string_view::npos || trim(text.substr(0, colon)).empty()) {
            throw IoError(where + ": expected 'annotator_id: b1 b2 ...'");
        }
        std::vector<std::size_t> breaks;
        std::istringstream tokens{std::string(text.substr(colon + 1))};
        std::string token;
        while (tokens >> token) {
            std::size_t b = 0;
            if (!parse_index(std::string_view(token), b)) {
                throw IoError(where + ": bad break index '" + token + "'");
            }
            breaks.push_back(b);
        }
        try {
            out.push_back({std::string(trim(text.substr(0, colon))), Segmentation(*n, std::move(breaks))});
        } catch (const ValidationError& e) {
            throw IoError(where + ": " + e.what());
        }
    }
    if (!n) {
        throw IoError("annotation file is missing the 'n=<N>' line");
    }
    return out;
}

void write_annotations(std::ostream& out, std::span<const ReferenceAnnotation> annotations) {
    if (annotations.empty()) {
        throw ValidationError("no annotations to write");
    }
    out << "n=" << annotations.front().segmentation.n() << '\n';
    for (const auto& a : annotations) {
        if (a.segmentation.n() != annotations.front().segmentation.n()) {
            throw ValidationError("annotations disagree on n");
        }
        out << a.annotator_id << ':';
        for (std::size_t b : a.segmentation.breaks()) {
            out << ' ' << b;
        }
        out << '\n';
    }
}

std::vector<ReferenceAnnotation> load_annotations(const std::filesystem::path& path) {
    auto in = open_in(path);
    try {
        return read_annotations(in);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void save_annotations(const std::filesystem::path& path, std::span<const ReferenceAnnotation> annotations) {
    auto out = open_out(path);
    write_annotations(out, annotations);
}

} // namespace mdlseg
