#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tsne/affinity.hpp"
#include "tsne/datasets.hpp"
#include "tsne/diagnostics.hpp"
#include "tsne/io.hpp"
#include "tsne/optimizer.hpp"

namespace tsne {

/// Which generator to run and with what parameters.
struct DatasetSpec {
    std::string generator;  // sphere | split-sphere | simplex-clusters | doubled-frame | equidistant-simplex
    std::map<std::string, double> params;
    std::uint64_t seed = 0;
};

PointCloud make_dataset(const DatasetSpec& spec);

/// One diagnostics request by name with its numeric parameters.
struct DiagnosticSpec {
    std::string check;  // uniformity | covering-ball | enclosing-ball | grid | theorem-ball | blocks | objective
    std::map<std::string, double> params;
};

struct ExperimentConfig {
    DatasetSpec dataset;
    AffinityConfig affinity;
    OptimizerConfig optimizer;
    std::vector<std::size_t> snapshot_iterations;
    std::vector<DiagnosticSpec> diagnostics;
    std::string out_dir;
    bool pca_panel = false;  // also emit a 2-component PCA scatter

    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
};

/// Default snapshot schedule used by embed runs and named experiments.
std::vector<std::size_t> default_snapshots();

/// Names accepted by named_experiment.
std::vector<std::string> experiment_names();

/// Preconfigured pipeline for one of the named experiments. The
/// sphere-d100000 experiment downscales to d=20000 unless full is set.
ExperimentConfig named_experiment(const std::string& name, const std::string& out_dir,
                                  bool full = false);

/// Evaluates the requested checks on the dataset, affinity, and embedding.
DiagnosticsReport compute_diagnostics(const std::vector<DiagnosticSpec>& checks,
                                      const PointCloud& cloud, const PairDistribution& p,
                                      const Matrix& y);

/// generate -> embed -> diagnose -> plot, writing every artifact under
/// config.out_dir. Returns the manifest that was written.
RunManifest run_experiment(const ExperimentConfig& config);

}  // namespace tsne
