#include "tsne/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "tsne/svg.hpp"

namespace tsne {

namespace {

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

double require_param(const std::map<std::string, double>& params, const std::string& key,
                     const std::string& generator) {
    auto it = params.find(key);
    if (it == params.end()) {
        throw std::invalid_argument("generator '" + generator + "' needs parameter '" + key + "'");
    }
    return it->second;
}

std::size_t as_count(double v, const std::string& key) {
    if (!(v >= 0.0) || v != std::floor(v)) {
        throw std::invalid_argument("parameter '" + key + "' must be a nonnegative integer");
    }
    return static_cast<std::size_t>(v);
}

}  // namespace

PointCloud make_dataset(const DatasetSpec& spec) {
    const auto& p = spec.params;
    if (spec.generator == "sphere") {
        return sample_sphere(as_count(require_param(p, "n", spec.generator), "n"),
                             as_count(require_param(p, "d", spec.generator), "d"), spec.seed);
    }
    if (spec.generator == "split-sphere") {
        return sample_split_sphere(as_count(require_param(p, "n", spec.generator), "n"),
                                   as_count(require_param(p, "d", spec.generator), "d"), spec.seed,
                                   param_or(p, "threshold_exponent", 0.1));
    }
    if (spec.generator == "simplex-clusters") {
        return simplex_clusters(as_count(require_param(p, "k", spec.generator), "k"),
                                as_count(require_param(p, "per_cluster", spec.generator), "per_cluster"),
                                param_or(p, "sigma", 0.2), spec.seed);
    }
    if (spec.generator == "doubled-frame") {
        return doubled_frame(as_count(require_param(p, "n_half", spec.generator), "n_half"));
    }
    if (spec.generator == "equidistant-simplex") {
        return equidistant_simplex(as_count(require_param(p, "n", spec.generator), "n"));
    }
    throw std::invalid_argument("unknown generator: " + spec.generator);
}

std::vector<std::size_t> default_snapshots() { return {10, 100, 500, 510, 600, 1000}; }

namespace {

nlohmann::ordered_json affinity_to_json(const AffinityConfig& c) {
    nlohmann::ordered_json j;
    j["mode"] = c.mode == AffinityConfig::Mode::FixedSigma ? "fixed-sigma" : "perplexity";
    j["sigma"] = c.sigma;
    j["perplexity"] = c.perplexity;
    j["entropy_tolerance"] = c.entropy_tolerance;
    j["max_search_iterations"] = c.max_search_iterations;
    return j;
}

AffinityConfig affinity_from_json(const nlohmann::ordered_json& j) {
    AffinityConfig c;
    std::string mode = j.at("mode");
    if (mode == "fixed-sigma") {
        c.mode = AffinityConfig::Mode::FixedSigma;
    } else if (mode == "perplexity") {
        c.mode = AffinityConfig::Mode::Perplexity;
    } else {
        throw std::invalid_argument("unknown affinity mode: " + mode);
    }
    c.sigma = j.at("sigma");
    c.perplexity = j.at("perplexity");
    c.entropy_tolerance = j.at("entropy_tolerance");
    c.max_search_iterations = j.at("max_search_iterations");
    return c;
}

nlohmann::ordered_json optimizer_to_json(const OptimizerConfig& c) {
    nlohmann::ordered_json j;
    j["output_dim"] = c.output_dim;
    j["total_iterations"] = c.total_iterations;
    j["exaggeration_iterations"] = c.exaggeration_iterations;
    j["alpha"] = c.alpha;
    j["step_size"] = c.step_size;
    j["momentum_schedule"] = nlohmann::ordered_json::array();
    for (const auto& [start, gamma] : c.momentum_schedule) {
        j["momentum_schedule"].push_back({start, gamma});
    }
    j["init_scale"] = c.init_scale;
    j["seed"] = c.seed;
    return j;
}

OptimizerConfig optimizer_from_json(const nlohmann::ordered_json& j) {
    OptimizerConfig c;
    c.output_dim = j.at("output_dim");
    c.total_iterations = j.at("total_iterations");
    c.exaggeration_iterations = j.at("exaggeration_iterations");
    c.alpha = j.at("alpha");
    c.step_size = j.at("step_size");
    c.momentum_schedule.clear();
    for (const auto& entry : j.at("momentum_schedule")) {
        c.momentum_schedule.emplace_back(entry.at(0).get<std::size_t>(),
                                         entry.at(1).get<double>());
    }
    c.init_scale = j.at("init_scale");
    c.seed = j.at("seed");
    return c;
}

}  // namespace

std::string ExperimentConfig::to_json() const {
    nlohmann::ordered_json j;
    j["dataset"] = {{"generator", dataset.generator},
                    {"params", dataset.params},
                    {"seed", dataset.seed}};
    j["affinity"] = affinity_to_json(affinity);
    j["optimizer"] = optimizer_to_json(optimizer);
    j["snapshot_iterations"] = snapshot_iterations;
    j["diagnostics"] = nlohmann::ordered_json::array();
    for (const DiagnosticSpec& d : diagnostics) {
        j["diagnostics"].push_back({{"check", d.check}, {"params", d.params}});
    }
    j["out_dir"] = out_dir;
    j["pca_panel"] = pca_panel;
    return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(text);
    ExperimentConfig c;
    c.dataset.generator = j.at("dataset").at("generator");
    c.dataset.params = j.at("dataset").at("params").get<std::map<std::string, double>>();
    c.dataset.seed = j.at("dataset").at("seed");
    c.affinity = affinity_from_json(j.at("affinity"));
    c.optimizer = optimizer_from_json(j.at("optimizer"));
    c.snapshot_iterations = j.at("snapshot_iterations").get<std::vector<std::size_t>>();
    for (const auto& d : j.at("diagnostics")) {
        c.diagnostics.push_back(
            {d.at("check"), d.at("params").get<std::map<std::string, double>>()});
    }
    c.out_dir = j.at("out_dir");
    c.pca_panel = j.at("pca_panel");
    return c;
}

std::vector<std::string> experiment_names() {
    return {"figure1-simplex", "sphere-d2",  "sphere-d3",        "sphere-d5",
            "sphere-d20",      "sphere-d100000", "split-sphere-d20", "doubled-frame"};
}

ExperimentConfig named_experiment(const std::string& name, const std::string& out_dir,
                                  bool full) {
    ExperimentConfig c;
    c.out_dir = out_dir;
    c.snapshot_iterations = default_snapshots();
    c.affinity = AffinityConfig::with_perplexity(30.0);
    // the classic constants: alpha 12, step size 200
    c.optimizer.alpha = 12.0;
    c.optimizer.step_size = 200.0;
    c.optimizer.total_iterations = 1000;
    c.optimizer.exaggeration_iterations = 500;

    auto sphere = [&](std::size_t d) {
        c.dataset.generator = "sphere";
        c.dataset.params = {{"n", 500.0}, {"d", static_cast<double>(d)}};
        c.diagnostics = {{"uniformity", {}},
                         {"grid", {{"g", 5.0}}},
                         {"theorem-ball", {{"r", 0.2}}},
                         {"enclosing-ball", {}},
                         {"objective", {}}};
    };

    if (name == "figure1-simplex") {
        c.dataset.generator = "simplex-clusters";
        c.dataset.params = {{"k", 10.0}, {"per_cluster", 100.0}, {"sigma", 0.2}};
        c.diagnostics = {{"covering-ball", {{"fraction", 0.9}}},
                         {"enclosing-ball", {}},
                         {"objective", {}}};
        c.pca_panel = true;
    } else if (name == "sphere-d2") {
        sphere(2);
    } else if (name == "sphere-d3") {
        sphere(3);
    } else if (name == "sphere-d5") {
        sphere(5);
    } else if (name == "sphere-d20") {
        sphere(20);
    } else if (name == "sphere-d100000") {
        sphere(full ? 100000 : 20000);
    } else if (name == "split-sphere-d20") {
        c.dataset.generator = "split-sphere";
        c.dataset.params = {{"n", 1000.0}, {"d", 20.0}, {"threshold_exponent", 0.1}};
        c.diagnostics = {{"grid", {{"g", 5.0}}},
                         {"covering-ball", {{"fraction", 0.9}}},
                         {"objective", {}}};
    } else if (name == "doubled-frame") {
        c.dataset.generator = "doubled-frame";
        c.dataset.params = {{"n_half", 50.0}};
        c.affinity = AffinityConfig::fixed_sigma(1.0);
        c.diagnostics = {{"blocks", {{"sigma", 1.0}}}, {"uniformity", {}}, {"objective", {}}};
    } else {
        throw std::invalid_argument("unknown experiment: " + name);
    }
    return c;
}

DiagnosticsReport compute_diagnostics(const std::vector<DiagnosticSpec>& checks,
                                      const PointCloud& cloud, const PairDistribution& p,
                                      const Matrix& y) {
    DiagnosticsReport report;
    for (const DiagnosticSpec& spec : checks) {
        const auto& prm = spec.params;
        if (spec.check == "uniformity") {
            report.statistics.push_back({"uniformity_statistic",
                                         {uniformity_statistic(p)},
                                         TheoremTag::lemma_concentration,
                                         {{"n", double(p.n)}}});
        } else if (spec.check == "covering-ball") {
            double fraction = param_or(prm, "fraction", 0.9);
            CoveringBall ball = covering_ball(y, fraction);
            report.statistics.push_back({"covering_ball_radius",
                                         {ball.radius},
                                         TheoremTag::lemma_small_kl,
                                         {{"fraction", fraction},
                                          {"center_index", double(ball.center_index)}}});
        } else if (spec.check == "enclosing-ball") {
            report.statistics.push_back({"enclosing_ball_radius",
                                         {enclosing_ball(y).radius},
                                         TheoremTag::prop_single_point,
                                         {}});
        } else if (spec.check == "grid") {
            double g = param_or(prm, "g", 5.0);
            double far = param_or(prm, "far_threshold", 0.2);
            GridStats stats = grid_collision_stats(cloud.points, y, g, far);
            double pigeonhole = double(stats.cells) / double(cloud.n());
            report.statistics.push_back({"grid_fraction_alone",
                                         {stats.fraction_alone},
                                         TheoremTag::prop_volume,
                                         {{"g", g},
                                          {"cells", double(stats.cells)},
                                          {"B", stats.b},
                                          {"cell_side", stats.cell_side},
                                          {"pigeonhole_bound", pigeonhole}}});
            report.statistics.push_back({"grid_fraction_far_but_close",
                                         {stats.fraction_far_but_close},
                                         TheoremTag::prop_volume,
                                         {{"g", g}, {"far_threshold", far}}});
        } else if (spec.check == "theorem-ball") {
            double r = param_or(prm, "r", 0.2);
            BallCheck check = theorem_ball_check(y, r);
            report.statistics.push_back({"theorem_ball_fraction",
                                         {check.fraction_in_r_ball},
                                         TheoremTag::thm_sphere,
                                         {{"r", r}, {"passes", check.passes ? 1.0 : 0.0}}});
            report.statistics.push_back({"theorem_ball_enclosing_ratio",
                                         {check.enclosing_radius / std::sqrt(r)},
                                         TheoremTag::thm_sphere,
                                         {{"r", r},
                                          {"enclosing_radius", check.enclosing_radius}}});
        } else if (spec.check == "blocks") {
            double sigma = param_or(prm, "sigma", 1.0);
            auto [q, z] = low_dim_affinities(y);
            (void)z;
            BlockStats stats = block_stats(p, q, BlockPartition::halves(p.n), sigma);
            report.statistics.push_back({"block_masses_p",
                                         stats.p_blocks,
                                         TheoremTag::prop_doubled_frame,
                                         {{"sigma", sigma}}});
            report.statistics.push_back({"block_masses_q",
                                         stats.q_blocks,
                                         TheoremTag::prop_doubled_frame,
                                         {{"sigma", sigma}}});
            report.statistics.push_back({"block_kl",
                                         {stats.block_kl},
                                         TheoremTag::prop_doubled_frame,
                                         {{"sigma", sigma}}});
            report.statistics.push_back({"block_pinsker_lower_bound",
                                         {stats.pinsker_lower_bound},
                                         TheoremTag::prop_doubled_frame,
                                         {{"sigma", sigma}, {"block_tv", stats.block_tv}}});
            report.statistics.push_back({"p0_star",
                                         {stats.p0_star},
                                         TheoremTag::prop_doubled_frame,
                                         {{"sigma", sigma}, {"p1_star", stats.p1_star}}});
        } else if (spec.check == "objective") {
            report.statistics.push_back({"kl_objective",
                                         {objective(p, y)},
                                         TheoremTag::lemma_small_kl,
                                         {}});
        } else {
            throw std::invalid_argument("unknown diagnostic check: " + spec.check);
        }
    }
    return report;
}

RunManifest run_experiment(const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    auto started = std::chrono::steady_clock::now();
    fs::path dir(config.out_dir);
    fs::create_directories(dir);

    RunManifest manifest;
    char hash[24];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a(config.to_json())));
    manifest.config_hash = hash;

    PointCloud cloud = make_dataset(config.dataset);
    write_points_csv(dir / "points.csv", cloud.points, cloud.labels);
    write_metadata_json(dir / "points.meta.json", cloud);

    std::vector<double> color;
    if (cloud.has_labels()) {
        color.assign(cloud.labels.begin(), cloud.labels.end());
    } else {
        color.resize(cloud.n());
        for (std::size_t i = 0; i < cloud.n(); ++i) color[i] = cloud.points(i, 0);
    }

    PairDistribution p = build_affinity(cloud.points, config.affinity);
    std::vector<std::size_t> snaps = config.snapshot_iterations;
    std::sort(snaps.begin(), snaps.end());

    RunResult result;
    try {
        result = run(p, config.optimizer, snaps);
    } catch (const DivergedError& err) {
        manifest.diverged = true;
        manifest.diverged_iteration = err.iteration();
        write_manifest_json(dir / "manifest.json", manifest);
        throw;
    }

    for (const auto& [iteration, y] : result.snapshots) {
        std::string stem = "snapshot_" + std::to_string(iteration);
        write_points_csv(dir / (stem + ".csv"), y);
        write_scatter_svg(dir / (stem + ".svg"), y, color);
        manifest.snapshot_paths.emplace_back(iteration, stem + ".csv");
    }
    write_points_csv(dir / "embedding_final.csv", result.final_state.y);
    write_scatter_svg(dir / "embedding_final.svg", result.final_state.y, color);
    write_trace_csv(dir / "trace.csv", result.objective_trace);
    manifest.trace_path = "trace.csv";

    if (config.pca_panel) {
        PcaResult pca = pca_project(cloud, 2);
        write_points_csv(dir / "pca.csv", pca.projection);
        write_scatter_svg(dir / "pca.svg", pca.projection, color);
    }

    if (!config.diagnostics.empty()) {
        DiagnosticsReport report =
            compute_diagnostics(config.diagnostics, cloud, p, result.final_state.y);
        write_report_json(dir / "report.json", report);
        manifest.diagnostics_path = "report.json";
    }

    write_text_file(dir / "config.json", config.to_json());
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_manifest_json(dir / "manifest.json", manifest);
    return manifest;
}

}  // namespace tsne
