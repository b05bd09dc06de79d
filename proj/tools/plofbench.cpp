// plofbench: density-based outlier detection benchmark CLI.
//
// Verbs:
//   run      run a full experiment from a config file, emit metric tables
//   score    run one detector on one dataset, write id/score pairs
//   project  emit the first two principal components with labels
//   synth    generate a seeded synthetic dataset as CSV
//
// Exit codes: 0 success, 1 config/usage error, 2 partial cell failures.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "plof/bench.hpp"

namespace {

struct DatasetInput {
    std::string spec_path;
    std::string synth_spec_path;
    std::string csv_path;
    std::string delimiter = ",";
    std::string label_column;
    std::string outlier_classes;
    bool has_header = false;
    bool standardize = false;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--spec", spec_path, "Dataset spec file (key = value)");
        cmd->add_option("--synth-spec", synth_spec_path, "Synthetic spec file (key = value)");
        cmd->add_option("--data", csv_path, "Delimited text file to load directly");
        cmd->add_option("--delimiter", delimiter, "Field delimiter for --data (default ,)");
        cmd->add_option("--label-column", label_column, "Label column index or name for --data");
        cmd->add_option("--outlier-classes", outlier_classes,
                        "Comma-separated raw label values treated as outliers for --data");
        cmd->add_flag("--header", has_header, "--data file has a header row");
        cmd->add_flag("--standardize", standardize, "z-score the feature columns of --data");
    }

    plof::LabeledDataset load() const {
        const int sources = (!spec_path.empty()) + (!synth_spec_path.empty()) + (!csv_path.empty());
        if (sources != 1)
            throw std::invalid_argument("give exactly one of --spec, --synth-spec, --data");
        if (!spec_path.empty())
            return plof::load_csv(plof::parse_dataset_spec(spec_path));
        if (!synth_spec_path.empty())
            return plof::make_synthetic(plof::parse_synthetic_spec(synth_spec_path));
        plof::DatasetSpec spec;
        spec.path = csv_path;
        if (delimiter == "tab" || delimiter == "\\t")
            spec.delimiter = '\t';
        else if (delimiter.size() == 1)
            spec.delimiter = delimiter[0];
        else
            throw std::invalid_argument("--delimiter must be one character or 'tab'");
        spec.label_column = label_column;
        spec.has_header = has_header;
        spec.standardize = standardize;
        for (const auto& cls : plof::detail::parse_list(outlier_classes))
            spec.outlier_classes.push_back(cls);
        return plof::load_csv(spec);
    }
};

void write_projection_csv(const std::filesystem::path& path, const plof::Projection2PC& proj,
                          const plof::GroundTruth& truth) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string());
    out << "pc1,pc2,label\n";
    char buf[80];
    for (std::size_t i = 0; i < truth.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d\n", proj.x(i), proj.y(i),
                      truth.is_outlier(i) ? 1 : 0);
        out << buf;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Density-based outlier detection benchmark (LOF / PLOF / FastLOF / devToMean)"};
    app.require_subcommand(1);

    // --- run ---
    auto* run = app.add_subcommand("run", "Run an experiment from a config file");
    std::string config_path;
    run->add_option("config", config_path, "Experiment config file")->required();
    std::string run_output, run_backend, run_detectors, run_rule, run_prune_rule, run_format = "all";
    std::size_t run_minpts = 0, run_reps = 0;
    std::int64_t run_seed = -1;
    run->add_option("--output", run_output, "Output directory (overrides config)");
    run->add_option("--minpts", run_minpts, "Override minpts");
    run->add_option("--repetitions", run_reps, "Override repetitions");
    run->add_option("--backend", run_backend, "Override backend (brute|tree)");
    run->add_option("--detectors", run_detectors, "Override detector list (comma-separated)");
    run->add_option("--rule", run_rule, "Override decision rule (threshold:T | top_n:K)");
    run->add_option("--prune-rule", run_prune_rule, "Override plof prune rule (high-delta | low-delta)");
    run->add_option("--seed", run_seed, "Override base seed");
    run->add_option("--format", run_format, "Table output: text|delimited|structured|all (default all)");

    // --- score ---
    auto* score = app.add_subcommand("score", "Score one dataset with one detector");
    DatasetInput score_input;
    score_input.add_options(score);
    std::string score_detector = "lof", score_backend = "brute", score_prune_rule = "high-delta";
    std::size_t score_minpts = 10, score_chunks = 0, score_clusters = 0;
    double score_threshold = 1.0;
    std::uint64_t score_seed = 42;
    std::string score_out = "scores.tsv";
    score->add_option("--detector", score_detector, "lof|plof|fastlof|devtomean (default lof)");
    score->add_option("--minpts", score_minpts, "Neighborhood size (default 10)");
    score->add_option("--backend", score_backend, "brute|tree (default brute)");
    score->add_option("--seed", score_seed, "Seed for stochastic detectors (default 42)");
    score->add_option("--prune-rule", score_prune_rule, "plof: high-delta|low-delta");
    score->add_option("--chunks", score_chunks, "fastlof: chunk count (0 = auto)");
    score->add_option("--clusters", score_clusters, "devtomean: k-means clusters (0 = auto)");
    score->add_option("--threshold", score_threshold, "devtomean: prune threshold (default 1.0)");
    score->add_option("--out", score_out, "Output score file (default scores.tsv)");

    // --- project ---
    auto* project = app.add_subcommand("project", "Emit a 2-component projection with labels");
    DatasetInput project_input;
    project_input.add_options(project);
    std::string project_out = "projection.csv";
    project->add_option("--out", project_out, "Output file (default projection.csv)");

    // --- synth ---
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset CSV");
    std::string synth_spec_path, synth_out = "synthetic.csv", synth_name = "synthetic";
    std::size_t synth_inliers = 950, synth_outliers = 50, synth_dims = 8, synth_clusters = 2;
    double synth_spread = 1.0, synth_box = 4.0;
    std::uint64_t synth_seed = 42;
    bool synth_emit_spec = false;
    synth->add_option("--spec", synth_spec_path, "Synthetic spec file (overrides inline options)");
    synth->add_option("--name", synth_name, "Dataset name");
    synth->add_option("--n-inliers", synth_inliers, "Inlier count (default 950)");
    synth->add_option("--n-outliers", synth_outliers, "Outlier count (default 50)");
    synth->add_option("--dims", synth_dims, "Feature dimensions (default 8)");
    synth->add_option("--clusters", synth_clusters, "Gaussian cluster count (default 2)");
    synth->add_option("--spread", synth_spread, "Cluster standard deviation (default 1.0)");
    synth->add_option("--box-scale", synth_box, "Outlier box scale (default 4.0)");
    synth->add_option("--seed", synth_seed, "RNG seed (default 42)");
    synth->add_flag("--emit-spec", synth_emit_spec, "Also write a matching dataset .spec file");
    synth->add_option("--out", synth_out, "Output CSV (default synthetic.csv)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            plof::ExperimentConfig cfg = plof::parse_experiment_config(config_path);
            if (!run_output.empty()) cfg.output_dir = run_output;
            if (run_minpts > 0) cfg.minpts = run_minpts;
            if (run_reps > 0) cfg.repetitions = run_reps;
            if (!run_backend.empty()) cfg.backend = plof::parse_backend(run_backend);
            if (!run_rule.empty()) cfg.rule = plof::DecisionRule::parse(run_rule);
            if (!run_prune_rule.empty()) cfg.prune_rule = plof::parse_prune_rule(run_prune_rule);
            if (run_seed >= 0) cfg.base_seed = static_cast<std::uint64_t>(run_seed);
            if (!run_detectors.empty()) {
                cfg.detectors.clear();
                for (const auto& name : plof::detail::parse_list(run_detectors))
                    cfg.detectors.push_back(plof::parse_detector(name));
            }
            cfg.validate();

            const plof::ReportBundle bundle = plof::run_experiment(cfg);
            const std::filesystem::path dir = cfg.output_dir;
            if (run_format == "text" || run_format == "all")
                plof::emit_tables(bundle, dir, plof::TableFormat::text);
            if (run_format == "delimited" || run_format == "all")
                plof::emit_tables(bundle, dir, plof::TableFormat::delimited);
            if (run_format == "structured" || run_format == "all")
                plof::emit_tables(bundle, dir, plof::TableFormat::structured);
            if (run_format != "text" && run_format != "delimited" && run_format != "structured" &&
                run_format != "all")
                throw std::invalid_argument("unknown --format '" + run_format + "'");

            plof::detail::emit_text_tables(bundle, std::cout);
            std::cout << "wrote tables to " << dir.string() << "\n";
            if (!bundle.all_ok()) {
                for (const auto& c : bundle.cells)
                    if (!c.ok)
                        std::cerr << "cell failed: " << c.dataset << " / "
                                  << plof::to_string(c.detector) << ": " << c.error << "\n";
                return 2;
            }
            return 0;
        }

        if (*score) {
            const plof::LabeledDataset ds = score_input.load();
            plof::ExperimentConfig cfg;
            cfg.minpts = score_minpts;
            cfg.backend = plof::parse_backend(score_backend);
            cfg.prune_rule = plof::parse_prune_rule(score_prune_rule);
            cfg.fastlof_chunks = score_chunks;
            cfg.devtomean_clusters = score_clusters;
            cfg.devtomean_threshold = score_threshold;
            std::optional<double> rate;
            const plof::ScoreVector scores = plof::run_detector(
                plof::parse_detector(score_detector), ds.points, cfg, score_seed, &rate);
            plof::write_scores(score_out, scores);
            std::cout << "wrote " << scores.size() << " scores to " << score_out;
            if (rate)
                std::cout << " (prune rate " << *rate << ")";
            std::cout << "\n";
            return 0;
        }

        if (*project) {
            const plof::LabeledDataset ds = project_input.load();
            const plof::Projection2PC proj = plof::project_2pc(ds.points);
            write_projection_csv(project_out, proj, ds.truth);
            std::cout << "wrote projection of " << ds.points.size() << " points to "
                      << project_out << "\n";
            return 0;
        }

        if (*synth) {
            plof::SyntheticSpec spec;
            if (!synth_spec_path.empty()) {
                spec = plof::parse_synthetic_spec(synth_spec_path);
            } else {
                spec.name = synth_name;
                spec.n_inliers = synth_inliers;
                spec.n_outliers = synth_outliers;
                spec.dims = synth_dims;
                spec.cluster_count = synth_clusters;
                spec.cluster_spread = synth_spread;
                spec.outlier_box_scale = synth_box;
                spec.seed = synth_seed;
            }
            const plof::LabeledDataset ds = plof::make_synthetic(spec);
            plof::write_dataset_csv(synth_out, ds.points, ds.truth);
            if (synth_emit_spec) {
                const std::filesystem::path spec_path =
                    std::filesystem::path(synth_out).replace_extension(".spec");
                std::ofstream out(spec_path);
                out << "name = " << ds.name << "\n"
                    << "path = " << synth_out << "\n"
                    << "delimiter = ,\n"
                    << "header = true\n"
                    << "label_column = label\n"
                    << "outlier_classes = 1\n";
                std::cout << "wrote " << spec_path.string() << "\n";
            }
            std::cout << "wrote " << ds.points.size() << " points to " << synth_out << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
