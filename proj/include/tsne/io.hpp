#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tsne/datasets.hpp"
#include "tsne/diagnostics.hpp"

namespace tsne {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Writes `c0,...,c{d-1}[,label]` rows; values use shortest round-trip
/// formatting so CSV -> memory -> CSV is exact.
void write_points_csv(const std::filesystem::path& path, const Matrix& points,
                      const std::vector<int>& labels = {});

/// Reads a points CSV; a trailing `label` column populates labels.
PointCloud read_points_csv(const std::filesystem::path& path);

/// `iteration,objective` rows, one per trace entry starting at iteration 0.
void write_trace_csv(const std::filesystem::path& path, const std::vector<double>& trace);

/// Generator provenance sidecar next to a dataset CSV.
void write_metadata_json(const std::filesystem::path& path, const PointCloud& cloud);

/// {schema_version, statistics: [{name, value, theorem, params}]}.
std::string report_to_json(const DiagnosticsReport& report);
void write_report_json(const std::filesystem::path& path, const DiagnosticsReport& report);

/// FNV-1a 64-bit hash, used to fingerprint configs in manifests.
std::uint64_t fnv1a(const std::string& bytes);

struct RunManifest {
    std::string config_hash;
    std::vector<std::pair<std::size_t, std::string>> snapshot_paths;
    std::string trace_path;
    std::string diagnostics_path;  // empty when no diagnostics were requested
    double wall_seconds = 0.0;
    bool diverged = false;
    std::size_t diverged_iteration = 0;
};

void write_manifest_json(const std::filesystem::path& path, const RunManifest& manifest);

void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace tsne
