// Command-line harness: dataset generation, embedding runs, diagnostics,
// named experiments, SVG plots, and the PCA baseline.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsne/experiments.hpp"
#include "tsne/io.hpp"
#include "tsne/svg.hpp"

namespace fs = std::filesystem;
using namespace tsne;

namespace {

struct GenerateArgs {
    std::string generator;
    std::size_t n = 500, d = 20, k = 10, per_cluster = 100, n_half = 50;
    double sigma = 0.2, threshold_exponent = 0.1;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_generate(const GenerateArgs& args, const std::string& out_dir) {
    DatasetSpec spec;
    spec.generator = args.generator;
    spec.seed = args.seed;
    if (args.generator == "sphere") {
        spec.params = {{"n", double(args.n)}, {"d", double(args.d)}};
    } else if (args.generator == "split-sphere") {
        spec.params = {{"n", double(args.n)},
                       {"d", double(args.d)},
                       {"threshold_exponent", args.threshold_exponent}};
    } else if (args.generator == "simplex-clusters") {
        spec.params = {{"k", double(args.k)},
                       {"per_cluster", double(args.per_cluster)},
                       {"sigma", args.sigma}};
    } else if (args.generator == "doubled-frame") {
        spec.params = {{"n_half", double(args.n_half)}};
    } else if (args.generator == "equidistant-simplex") {
        spec.params = {{"n", double(args.n)}};
    } else {
        std::cerr << "unknown generator: " << args.generator << "\n";
        return 1;
    }
    PointCloud cloud = make_dataset(spec);
    fs::path out = args.out.empty() ? fs::path(out_dir) / (args.generator + ".csv")
                                    : fs::path(args.out);
    fs::create_directories(out.parent_path().empty() ? "." : out.parent_path());
    write_points_csv(out, cloud.points, cloud.labels);
    write_metadata_json(out.string() + ".meta.json", cloud);
    std::cout << "wrote " << out.string() << " (" << cloud.n() << " x " << cloud.dim() << ")\n";
    return 0;
}

struct EmbedArgs {
    std::string input;
    double perplexity = 30.0;
    double sigma = 0.0;  // > 0 switches to fixed-bandwidth mode
    OptimizerConfig optimizer;
    std::vector<std::size_t> snapshots = default_snapshots();
};

int cmd_embed(const EmbedArgs& args, const std::string& out_dir) {
    PointCloud cloud = read_points_csv(args.input);
    AffinityConfig affinity = args.sigma > 0.0 ? AffinityConfig::fixed_sigma(args.sigma)
                                               : AffinityConfig::with_perplexity(args.perplexity);
    PairDistribution p = build_affinity(cloud.points, affinity);

    fs::path dir(out_dir);
    fs::create_directories(dir);
    std::vector<std::size_t> snaps = args.snapshots;
    std::sort(snaps.begin(), snaps.end());
    std::erase_if(snaps, [&](std::size_t s) { return s > args.optimizer.total_iterations; });

    RunManifest manifest;
    std::string fingerprint = args.input + "|" + std::to_string(args.sigma) + "|" +
                              std::to_string(args.perplexity) + "|" +
                              std::to_string(args.optimizer.seed) + "|" +
                              std::to_string(args.optimizer.step_size);
    char hash[24];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a(fingerprint)));
    manifest.config_hash = hash;

    RunResult result;
    try {
        result = run(p, args.optimizer, snaps);
    } catch (const DivergedError& err) {
        manifest.diverged = true;
        manifest.diverged_iteration = err.iteration();
        write_manifest_json(dir / "manifest.json", manifest);
        std::cerr << "optimizer diverged at iteration " << err.iteration() << "\n";
        return 2;
    }

    for (const auto& [iteration, y] : result.snapshots) {
        std::string name = "snapshot_" + std::to_string(iteration) + ".csv";
        write_points_csv(dir / name, y);
        manifest.snapshot_paths.emplace_back(iteration, name);
    }
    write_points_csv(dir / "embedding_final.csv", result.final_state.y);
    write_trace_csv(dir / "trace.csv", result.objective_trace);
    manifest.trace_path = "trace.csv";
    write_manifest_json(dir / "manifest.json", manifest);
    std::cout << "final objective " << format_double(result.objective_trace.back()) << "\n";
    return 0;
}

struct DiagnoseArgs {
    std::string points, embedding, out = "report.json";
    std::vector<std::string> checks;
    double fraction = 0.9, g = 5.0, r = 0.2, far_threshold = 0.2;
    double sigma = 0.0;  // affinity bandwidth; 0 means perplexity mode
    double perplexity = 30.0;
    double block_sigma = 1.0;
};

int cmd_diagnose(const DiagnoseArgs& args) {
    PointCloud cloud = read_points_csv(args.points);
    PointCloud embedded = read_points_csv(args.embedding);
    if (cloud.n() != embedded.n()) {
        std::cerr << "row-count mismatch: " << cloud.n() << " points vs " << embedded.n()
                  << " embedded\n";
        return 2;
    }
    AffinityConfig affinity = args.sigma > 0.0 ? AffinityConfig::fixed_sigma(args.sigma)
                                               : AffinityConfig::with_perplexity(args.perplexity);
    PairDistribution p = build_affinity(cloud.points, affinity);

    std::vector<DiagnosticSpec> specs;
    for (const std::string& check : args.checks) {
        DiagnosticSpec spec{check, {}};
        if (check == "covering-ball") spec.params["fraction"] = args.fraction;
        if (check == "grid") {
            spec.params["g"] = args.g;
            spec.params["far_threshold"] = args.far_threshold;
        }
        if (check == "theorem-ball") spec.params["r"] = args.r;
        if (check == "blocks") spec.params["sigma"] = args.block_sigma;
        specs.push_back(spec);
    }
    DiagnosticsReport report = compute_diagnostics(specs, cloud, p, embedded.points);
    write_report_json(args.out, report);
    std::cout << report_to_json(report);
    return 0;
}

struct PlotArgs {
    std::string input, out = "plot.svg", color_file;
    int color_by = -1;  // column index into the input CSV; label column if present
};

int cmd_plot(const PlotArgs& args) {
    PointCloud embedded = read_points_csv(args.input);
    if (embedded.dim() != 2) {
        std::cerr << "plot requires a 2-column embedding CSV\n";
        return 2;
    }
    std::vector<double> color;
    if (!args.color_file.empty()) {
        PointCloud column = read_points_csv(args.color_file);
        if (column.n() != embedded.n()) {
            std::cerr << "color file row count does not match input\n";
            return 2;
        }
        color.resize(column.n());
        for (std::size_t i = 0; i < column.n(); ++i) color[i] = column.points(i, 0);
    } else if (args.color_by >= 0) {
        if (static_cast<std::size_t>(args.color_by) >= embedded.dim()) {
            std::cerr << "color column out of range\n";
            return 2;
        }
        color.resize(embedded.n());
        for (std::size_t i = 0; i < embedded.n(); ++i) {
            color[i] = embedded.points(i, static_cast<std::size_t>(args.color_by));
        }
    } else if (embedded.has_labels()) {
        color.assign(embedded.labels.begin(), embedded.labels.end());
    }
    write_scatter_svg(args.out, embedded.points, color);
    std::cout << "wrote " << args.out << "\n";
    return 0;
}

struct PcaArgs {
    std::string input, out = "pca.csv";
    std::size_t k = 2;
    bool svg = false;
};

int cmd_pca(const PcaArgs& args) {
    PointCloud cloud = read_points_csv(args.input);
    PcaResult pca = pca_project(cloud, args.k);
    write_points_csv(args.out, pca.projection, cloud.labels);
    double total = 0.0, top = 0.0;
    for (std::size_t i = 0; i < pca.eigenvalues.size(); ++i) {
        total += pca.eigenvalues[i];
        if (i < args.k) top += pca.eigenvalues[i];
    }
    std::cout << "captured variance fraction " << format_double(total > 0 ? top / total : 0.0)
              << "\n";
    if (args.svg && args.k == 2) {
        std::vector<double> color(cloud.labels.begin(), cloud.labels.end());
        write_scatter_svg(fs::path(args.out).replace_extension(".svg"), pca.projection, color);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact t-SNE engine with theorem-driven diagnostics"};
    app.require_subcommand(1);

    std::string out_dir = ".";
    std::string config_path;
    std::uint64_t seed = 0;
    app.add_option("--out-dir", out_dir, "output directory")->capture_default_str();
    app.add_option("--config", config_path, "experiment config JSON (with `experiment`)");
    app.add_option("--seed", seed, "global seed override");
    bool seed_given = false;

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "write a dataset CSV");
    generate->add_option("generator", gen.generator,
                         "sphere | split-sphere | simplex-clusters | doubled-frame | "
                         "equidistant-simplex")
        ->required();
    generate->add_option("--n", gen.n);
    generate->add_option("--d", gen.d);
    generate->add_option("--k", gen.k);
    generate->add_option("--per-cluster", gen.per_cluster);
    generate->add_option("--sigma", gen.sigma);
    generate->add_option("--n-half", gen.n_half);
    generate->add_option("--threshold-exponent", gen.threshold_exponent);
    generate->add_option("--out", gen.out, "output CSV path");

    EmbedArgs emb;
    auto* embed = app.add_subcommand("embed", "run t-SNE on a points CSV");
    embed->add_option("--input", emb.input, "points CSV")->required();
    embed->add_option("--perplexity", emb.perplexity)->capture_default_str();
    embed->add_option("--sigma", emb.sigma, "fixed bandwidth; bypasses perplexity search");
    embed->add_option("--iterations", emb.optimizer.total_iterations)->capture_default_str();
    embed->add_option("--exaggeration-iterations", emb.optimizer.exaggeration_iterations)
        ->capture_default_str();
    embed->add_option("--alpha", emb.optimizer.alpha)->capture_default_str();
    embed->add_option("--step-size", emb.optimizer.step_size)->capture_default_str();
    embed->add_option("--init-scale", emb.optimizer.init_scale)->capture_default_str();
    embed->add_option("--snapshots", emb.snapshots, "snapshot iterations")
        ->capture_default_str();

    DiagnoseArgs diag;
    auto* diagnose = app.add_subcommand("diagnose", "compute theorem statistics");
    diagnose->add_option("--points", diag.points, "input points CSV")->required();
    diagnose->add_option("--embedding", diag.embedding, "embedding CSV")->required();
    diagnose->add_option("--check", diag.checks,
                         "uniformity | covering-ball | enclosing-ball | grid | theorem-ball | "
                         "blocks | objective")
        ->required();
    diagnose->add_option("--out", diag.out)->capture_default_str();
    diagnose->add_option("--fraction", diag.fraction)->capture_default_str();
    diagnose->add_option("--g", diag.g)->capture_default_str();
    diagnose->add_option("--r", diag.r)->capture_default_str();
    diagnose->add_option("--far-threshold", diag.far_threshold)->capture_default_str();
    diagnose->add_option("--sigma", diag.sigma, "fixed affinity bandwidth (0 = perplexity mode)");
    diagnose->add_option("--perplexity", diag.perplexity)->capture_default_str();
    diagnose->add_option("--block-sigma", diag.block_sigma)->capture_default_str();

    std::string experiment_name;
    bool full = false;
    auto* experiment = app.add_subcommand("experiment", "run a preconfigured pipeline");
    experiment->add_option("name", experiment_name, "one of the named experiments");
    experiment->add_flag("--full", full, "paper-scale run for sphere-d100000");

    PlotArgs plot;
    auto* plot_cmd = app.add_subcommand("plot", "render an embedding CSV as SVG");
    plot_cmd->add_option("--input", plot.input, "2-column embedding CSV")->required();
    plot_cmd->add_option("--out", plot.out)->capture_default_str();
    plot_cmd->add_option("--color-by", plot.color_by, "column index used for the color ramp");
    plot_cmd->add_option("--color-file", plot.color_file, "single-column CSV of color values");

    PcaArgs pca;
    auto* pca_cmd = app.add_subcommand("pca", "project a points CSV onto top-k components");
    pca_cmd->add_option("--input", pca.input, "points CSV")->required();
    pca_cmd->add_option("--k", pca.k)->capture_default_str();
    pca_cmd->add_option("--out", pca.out)->capture_default_str();
    pca_cmd->add_flag("--svg", pca.svg, "also write a scatter SVG (k = 2 only)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    seed_given = app.count("--seed") > 0;

    try {
        if (generate->parsed()) {
            if (seed_given) gen.seed = seed;
            return cmd_generate(gen, out_dir);
        }
        if (embed->parsed()) {
            if (seed_given) emb.optimizer.seed = seed;
            return cmd_embed(emb, out_dir);
        }
        if (diagnose->parsed()) return cmd_diagnose(diag);
        if (experiment->parsed()) {
            ExperimentConfig config;
            if (!config_path.empty()) {
                config = ExperimentConfig::from_json(read_text_file(config_path));
                if (config.out_dir.empty() || out_dir != ".") config.out_dir = out_dir;
            } else if (!experiment_name.empty()) {
                if (experiment_name == "sphere-d100000") {
                    std::cerr << "note: affinity construction is O(n^2 d); "
                              << (full ? "d=100000 will take a while"
                                       : "running downscaled d=20000 (use --full for d=100000)")
                              << "\n";
                }
                config = named_experiment(experiment_name, out_dir, full);
            } else {
                std::cerr << "experiment needs a name or --config\n";
                return 1;
            }
            if (seed_given) {
                config.dataset.seed = seed;
                config.optimizer.seed = seed;
            }
            run_experiment(config);
            return 0;
        }
        if (plot_cmd->parsed()) return cmd_plot(plot);
        if (pca_cmd->parsed()) return cmd_pca(pca);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
