#include "tsne/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace tsne {

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("double formatting failed");
    return std::string(buf, end);
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << contents;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_points_csv(const std::filesystem::path& path, const Matrix& points,
                      const std::vector<int>& labels) {
    if (!labels.empty() && labels.size() != points.rows()) {
        throw std::invalid_argument("label count does not match row count");
    }
    std::string out;
    out.reserve(points.rows() * (points.cols() * 20 + 2) + 16);
    for (std::size_t c = 0; c < points.cols(); ++c) {
        if (c) out += ',';
        out += 'c';
        out += std::to_string(c);
    }
    if (!labels.empty()) out += ",label";
    out += '\n';
    for (std::size_t i = 0; i < points.rows(); ++i) {
        for (std::size_t c = 0; c < points.cols(); ++c) {
            if (c) out += ',';
            out += format_double(points(i, c));
        }
        if (!labels.empty()) {
            out += ',';
            out += std::to_string(labels[i]);
        }
        out += '\n';
    }
    write_text_file(path, out);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_double(const std::string& field, std::size_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw std::runtime_error("bad numeric field on CSV line " + std::to_string(line_no) +
                                 ": '" + field + "'");
    }
    return v;
}

}  // namespace

PointCloud read_points_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = split_csv_line(line);
    bool has_label = header.back() == "label";
    std::size_t d = header.size() - (has_label ? 1 : 0);
    if (d == 0) throw std::runtime_error("CSV has no coordinate columns: " + path.string());

    std::vector<double> coords;
    std::vector<int> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw std::runtime_error("CSV line " + std::to_string(line_no) +
                                     " has wrong field count");
        }
        for (std::size_t c = 0; c < d; ++c) coords.push_back(parse_double(fields[c], line_no));
        if (has_label) {
            labels.push_back(static_cast<int>(parse_double(fields[d], line_no)));
        }
    }

    PointCloud cloud;
    std::size_t n = coords.size() / d;
    cloud.points = Matrix(n, d);
    cloud.points.data() = std::move(coords);
    cloud.labels = std::move(labels);
    cloud.generator = "csv";
    return cloud;
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<double>& trace) {
    std::string out = "iteration,objective\n";
    for (std::size_t t = 0; t < trace.size(); ++t) {
        out += std::to_string(t);
        out += ',';
        out += format_double(trace[t]);
        out += '\n';
    }
    write_text_file(path, out);
}

void write_metadata_json(const std::filesystem::path& path, const PointCloud& cloud) {
    nlohmann::ordered_json meta;
    meta["generator"] = cloud.generator;
    meta["seed"] = cloud.seed;
    meta["n"] = cloud.n();
    meta["d"] = cloud.dim();
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [key, value] : cloud.params) params[key] = value;
    meta["params"] = params;
    meta["has_labels"] = cloud.has_labels();
    write_text_file(path, meta.dump(2) + "\n");
}

std::string report_to_json(const DiagnosticsReport& report) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["statistics"] = nlohmann::ordered_json::array();
    for (const DiagnosticEntry& entry : report.statistics) {
        nlohmann::ordered_json stat;
        stat["name"] = entry.name;
        if (entry.value.size() == 1) {
            stat["value"] = entry.value[0];
        } else {
            stat["value"] = entry.value;
        }
        stat["theorem"] = theorem_tag_name(entry.theorem);
        nlohmann::ordered_json params = nlohmann::ordered_json::object();
        for (const auto& [key, value] : entry.params) params[key] = value;
        stat["params"] = params;
        doc["statistics"].push_back(stat);
    }
    return doc.dump(2) + "\n";
}

void write_report_json(const std::filesystem::path& path, const DiagnosticsReport& report) {
    write_text_file(path, report_to_json(report));
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

void write_manifest_json(const std::filesystem::path& path, const RunManifest& manifest) {
    nlohmann::ordered_json doc;
    doc["config_hash"] = manifest.config_hash;
    doc["snapshots"] = nlohmann::ordered_json::array();
    for (const auto& [iteration, file] : manifest.snapshot_paths) {
        doc["snapshots"].push_back({{"iteration", iteration}, {"path", file}});
    }
    doc["trace_path"] = manifest.trace_path;
    doc["diagnostics_path"] = manifest.diagnostics_path;
    doc["wall_seconds"] = manifest.wall_seconds;
    doc["diverged"] = manifest.diverged;
    if (manifest.diverged) doc["diverged_iteration"] = manifest.diverged_iteration;
    write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace tsne
