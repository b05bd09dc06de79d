#pragma once

#include <chrono>
#include <optional>

#include <json.hpp>

#include "plof/baselines.hpp"
#include "plof/config.hpp"
#include "plof/pca.hpp"

namespace plof {

/// One (dataset, detector) cell: metrics and wall-clock timing averaged over
/// the configured repetitions. Timing covers index build + scoring only.
struct EvalReport {
    std::string dataset;
    Detector detector = Detector::lof;
    bool ok = false;
    std::string error;

    double accuracy = 0.0, precision = 0.0, recall = 0.0, auc = 0.0;
    bool precision_defined = true;
    bool recall_defined = true;
    double elapsed_mean = 0.0;
    double elapsed_stddev = 0.0;
    std::optional<double> prune_rate;

    std::size_t repetitions = 0;
    std::size_t minpts = 0;
    std::string rule;
    std::vector<std::uint64_t> seeds;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

enum class TableMetric { time, accuracy, precision, auc, recall };

inline const char* metric_title(TableMetric m) {
    switch (m) {
        case TableMetric::time: return "Execution time (seconds)";
        case TableMetric::accuracy: return "Accuracy";
        case TableMetric::precision: return "Precision";
        case TableMetric::auc: return "AUC";
        case TableMetric::recall: return "Recall";
    }
    return "?";
}

inline const char* metric_slug(TableMetric m) {
    switch (m) {
        case TableMetric::time: return "time";
        case TableMetric::accuracy: return "accuracy";
        case TableMetric::precision: return "precision";
        case TableMetric::auc: return "auc";
        case TableMetric::recall: return "recall";
    }
    return "?";
}

inline double metric_value(const EvalReport& r, TableMetric m) {
    switch (m) {
        case TableMetric::time: return r.elapsed_mean;
        case TableMetric::accuracy: return r.accuracy;
        case TableMetric::precision: return r.precision;
        case TableMetric::auc: return r.auc;
        case TableMetric::recall: return r.recall;
    }
    return 0.0;
}

inline constexpr TableMetric kAllMetrics[] = {TableMetric::time, TableMetric::accuracy,
                                              TableMetric::precision, TableMetric::auc,
                                              TableMetric::recall};

struct ReportBundle {
    std::vector<std::string> dataset_names;
    std::vector<Detector> detectors;
    std::vector<EvalReport> cells;  // dataset-major: cells[d * detectors + j]

    // config echo
    std::size_t minpts = 0;
    std::size_t repetitions = 0;
    Backend backend = Backend::brute_force;
    std::string rule;
    std::uint64_t base_seed = 0;
    std::string prune_rule;

    const EvalReport& cell(std::size_t dataset, std::size_t detector) const {
        return cells[dataset * detectors.size() + detector];
    }

    bool all_ok() const {
        for (const auto& c : cells)
            if (!c.ok)
                return false;
        return true;
    }

    /// Column average over ok cells; empty when the whole column failed.
    std::optional<double> average(std::size_t detector, TableMetric metric) const {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t d = 0; d < dataset_names.size(); ++d) {
            const EvalReport& r = cell(d, detector);
            if (!r.ok)
                continue;
            sum += metric_value(r, metric);
            ++count;
        }
        if (count == 0)
            return std::nullopt;
        return sum / static_cast<double>(count);
    }

    nlohmann::json to_json() const;
    static ReportBundle from_json(const nlohmann::json& j);

    friend bool operator==(const ReportBundle&, const ReportBundle&) = default;
};

inline nlohmann::json ReportBundle::to_json() const {
    nlohmann::json j;
    j["schema"] = "plofbench-report-v1";
    j["config"] = {
        {"minpts", minpts},
        {"repetitions", repetitions},
        {"backend", to_string(backend)},
        {"rule", rule},
        {"seed", base_seed},
        {"prune_rule", prune_rule},
    };
    j["datasets"] = dataset_names;
    nlohmann::json dets = nlohmann::json::array();
    for (auto d : detectors)
        dets.push_back(to_string(d));
    j["detectors"] = dets;

    nlohmann::json results = nlohmann::json::array();
    for (const auto& c : cells) {
        nlohmann::json r;
        r["dataset"] = c.dataset;
        r["detector"] = to_string(c.detector);
        r["status"] = c.ok ? "ok" : "error";
        if (!c.ok) {
            r["error"] = c.error;
        } else {
            r["metrics"] = {
                {"accuracy", c.accuracy},
                {"precision", c.precision},
                {"precision_defined", c.precision_defined},
                {"recall", c.recall},
                {"recall_defined", c.recall_defined},
                {"auc", c.auc},
            };
            r["elapsed_seconds_mean"] = c.elapsed_mean;
            r["elapsed_seconds_stddev"] = c.elapsed_stddev;
            if (c.prune_rate)
                r["prune_rate"] = *c.prune_rate;
        }
        r["repetitions"] = c.repetitions;
        r["minpts"] = c.minpts;
        r["rule"] = c.rule;
        r["seeds"] = c.seeds;
        results.push_back(std::move(r));
    }
    j["results"] = std::move(results);

    nlohmann::json averages;
    for (std::size_t det = 0; det < detectors.size(); ++det) {
        nlohmann::json row;
        for (TableMetric m : kAllMetrics) {
            const auto avg = average(det, m);
            if (avg)
                row[metric_slug(m)] = *avg;
        }
        averages[to_string(detectors[det])] = std::move(row);
    }
    j["averages"] = std::move(averages);
    return j;
}

inline ReportBundle ReportBundle::from_json(const nlohmann::json& j) {
    ReportBundle b;
    b.minpts = j.at("config").at("minpts").get<std::size_t>();
    b.repetitions = j.at("config").at("repetitions").get<std::size_t>();
    b.backend = parse_backend(j.at("config").at("backend").get<std::string>());
    b.rule = j.at("config").at("rule").get<std::string>();
    b.base_seed = j.at("config").at("seed").get<std::uint64_t>();
    b.prune_rule = j.at("config").at("prune_rule").get<std::string>();
    b.dataset_names = j.at("datasets").get<std::vector<std::string>>();
    for (const auto& d : j.at("detectors"))
        b.detectors.push_back(parse_detector(d.get<std::string>()));
    for (const auto& r : j.at("results")) {
        EvalReport c;
        c.dataset = r.at("dataset").get<std::string>();
        c.detector = parse_detector(r.at("detector").get<std::string>());
        c.ok = r.at("status").get<std::string>() == "ok";
        if (!c.ok) {
            c.error = r.value("error", "");
        } else {
            const auto& m = r.at("metrics");
            c.accuracy = m.at("accuracy").get<double>();
            c.precision = m.at("precision").get<double>();
            c.precision_defined = m.at("precision_defined").get<bool>();
            c.recall = m.at("recall").get<double>();
            c.recall_defined = m.at("recall_defined").get<bool>();
            c.auc = m.at("auc").get<double>();
            c.elapsed_mean = r.at("elapsed_seconds_mean").get<double>();
            c.elapsed_stddev = r.at("elapsed_seconds_stddev").get<double>();
            if (r.contains("prune_rate"))
                c.prune_rate = r.at("prune_rate").get<double>();
        }
        c.repetitions = r.at("repetitions").get<std::size_t>();
        c.minpts = r.at("minpts").get<std::size_t>();
        c.rule = r.at("rule").get<std::string>();
        c.seeds = r.at("seeds").get<std::vector<std::uint64_t>>();
        b.cells.push_back(std::move(c));
    }
    return b;
}

/// Run one detector once. prune_rate_out is set for detectors that prune.
inline ScoreVector run_detector(Detector det, const PointSet& data,
                                const ExperimentConfig& cfg, std::uint64_t seed,
                                std::optional<double>* prune_rate_out = nullptr) {
    switch (det) {
        case Detector::lof:
            return lof_all(data, cfg.minpts, cfg.backend);
        case Detector::plof: {
            PlofResult r = plof_detailed(data, cfg.minpts, cfg.backend, cfg.prune_rule);
            if (prune_rate_out)
                *prune_rate_out = prune_rate(r.mask);
            return std::move(r.scores);
        }
        case Detector::fastlof: {
            const std::size_t chunks = cfg.fastlof_chunks > 0
                                           ? cfg.fastlof_chunks
                                           : fastlof_default_chunks(data.size(), cfg.minpts);
            return fastlof_scores(data, cfg.minpts, chunks, seed, cfg.backend);
        }
        case Detector::devtomean: {
            const std::size_t clusters = cfg.devtomean_clusters > 0
                                             ? cfg.devtomean_clusters
                                             : devtomean_default_clusters(data.size());
            DevToMeanResult r = devtomean_detailed(data, cfg.minpts, clusters,
                                                   cfg.devtomean_threshold, seed, cfg.backend);
            if (prune_rate_out) {
                std::size_t pruned = 0;
                for (auto v : r.pruned) pruned += (v != 0);
                *prune_rate_out = static_cast<double>(pruned) / static_cast<double>(data.size());
            }
            return std::move(r.scores);
        }
        case Detector::noop:
            // Instrumentation detector: no work, used to verify timing isolation.
            return ScoreVector(data.size(), 0.5);
    }
    throw std::logic_error("run_detector: unhandled detector");
}

/// Runs every (dataset, detector) cell `repetitions` times with per-rep seed
/// base_seed + rep, timing each run and averaging metrics. Failures are
/// recorded per cell; the run continues.
inline ReportBundle run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ReportBundle bundle;
    bundle.detectors = cfg.detectors;
    bundle.minpts = cfg.minpts;
    bundle.repetitions = cfg.repetitions;
    bundle.backend = cfg.backend;
    bundle.rule = cfg.rule.to_string();
    bundle.base_seed = cfg.base_seed;
    bundle.prune_rule = to_string(cfg.prune_rule);

    for (const auto& ref : cfg.datasets) {
        const std::string name = dataset_name(ref);
        bundle.dataset_names.push_back(name);

        std::optional<LabeledDataset> loaded;
        std::string load_error;
        try {
            if (const auto* spec = std::get_if<DatasetSpec>(&ref))
                loaded = load_csv(*spec);
            else
                loaded = make_synthetic(std::get<SyntheticSpec>(ref));
        } catch (const std::exception& e) {
            load_error = e.what();
        }

        for (Detector det : cfg.detectors) {
            EvalReport rep;
            rep.dataset = name;
            rep.detector = det;
            rep.repetitions = cfg.repetitions;
            rep.minpts = cfg.minpts;
            rep.rule = cfg.rule.to_string();
            for (std::size_t r = 0; r < cfg.repetitions; ++r)
                rep.seeds.push_back(cfg.base_seed + r);

            if (!loaded) {
                rep.error = load_error;
                bundle.cells.push_back(std::move(rep));
                continue;
            }
            try {
                std::vector<double> elapsed;
                double acc = 0.0, prec = 0.0, rec = 0.0, auc_sum = 0.0;
                double prune_sum = 0.0;
                std::size_t prune_count = 0;
                for (std::size_t r = 0; r < cfg.repetitions; ++r) {
                    const std::uint64_t seed = cfg.base_seed + r;
                    std::optional<double> rate;
                    const auto t0 = std::chrono::steady_clock::now();
                    const ScoreVector scores = run_detector(det, loaded->points, cfg, seed, &rate);
                    const auto t1 = std::chrono::steady_clock::now();
                    elapsed.push_back(std::chrono::duration<double>(t1 - t0).count());

                    const auto pred = binarize(scores, cfg.rule);
                    const auto counts = confusion(pred, loaded->truth);
                    acc += accuracy(counts);
                    prec += precision(counts);
                    rec += recall(counts);
                    rep.precision_defined = rep.precision_defined && precision_defined(counts);
                    rep.recall_defined = rep.recall_defined && recall_defined(counts);
                    auc_sum += roc_auc(scores, loaded->truth);
                    if (rate) {
                        prune_sum += *rate;
                        ++prune_count;
                    }
                }
                const double nrep = static_cast<double>(cfg.repetitions);
                rep.accuracy = acc / nrep;
                rep.precision = prec / nrep;
                rep.recall = rec / nrep;
                rep.auc = auc_sum / nrep;
                double mean = 0.0;
                for (double e : elapsed) mean += e;
                mean /= nrep;
                double var = 0.0;
                for (double e : elapsed) var += (e - mean) * (e - mean);
                rep.elapsed_mean = mean;
                rep.elapsed_stddev = std::sqrt(var / nrep);
                if (prune_count > 0)
                    rep.prune_rate = prune_sum / static_cast<double>(prune_count);
                rep.ok = true;
            } catch (const std::exception& e) {
                rep.ok = false;
                rep.error = e.what();
            }
            bundle.cells.push_back(std::move(rep));
        }
    }
    return bundle;
}

enum class TableFormat { text, delimited, structured };

namespace detail {

inline std::string format_cell(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

inline void emit_text_tables(const ReportBundle& b, std::ostream& out) {
    std::size_t name_width = std::string("Average").size();
    for (const auto& n : b.dataset_names)
        name_width = std::max(name_width, n.size());
    name_width = std::max(name_width, std::string("Dataset").size()) + 2;

    for (TableMetric metric : kAllMetrics) {
        out << metric_title(metric) << "\n";
        out << "Dataset" << std::string(name_width - 7, ' ');
        for (auto det : b.detectors) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%10s", to_string(det).c_str());
            out << buf;
        }
        out << "\n";
        for (std::size_t d = 0; d < b.dataset_names.size(); ++d) {
            out << b.dataset_names[d]
                << std::string(name_width - b.dataset_names[d].size(), ' ');
            for (std::size_t j = 0; j < b.detectors.size(); ++j) {
                const EvalReport& r = b.cell(d, j);
                char buf[32];
                if (r.ok)
                    std::snprintf(buf, sizeof(buf), "%10s", format_cell(metric_value(r, metric)).c_str());
                else
                    std::snprintf(buf, sizeof(buf), "%10s", "failed");
                out << buf;
            }
            out << "\n";
        }
        out << "Average" << std::string(name_width - 7, ' ');
        for (std::size_t j = 0; j < b.detectors.size(); ++j) {
            const auto avg = b.average(j, metric);
            char buf[32];
            if (avg)
                std::snprintf(buf, sizeof(buf), "%10s", format_cell(*avg).c_str());
            else
                std::snprintf(buf, sizeof(buf), "%10s", "-");
            out << buf;
        }
        out << "\n\n";
    }
}

inline void emit_delimited_table(const ReportBundle& b, TableMetric metric, std::ostream& out) {
    out << "dataset";
    for (auto det : b.detectors)
        out << "," << to_string(det);
    out << "\n";
    char buf[40];
    for (std::size_t d = 0; d < b.dataset_names.size(); ++d) {
        out << b.dataset_names[d];
        for (std::size_t j = 0; j < b.detectors.size(); ++j) {
            const EvalReport& r = b.cell(d, j);
            if (r.ok) {
                std::snprintf(buf, sizeof(buf), "%.17g", metric_value(r, metric));
                out << "," << buf;
            } else {
                out << ",";
            }
        }
        out << "\n";
    }
    out << "Average";
    for (std::size_t j = 0; j < b.detectors.size(); ++j) {
        const auto avg = b.average(j, metric);
        if (avg) {
            std::snprintf(buf, sizeof(buf), "%.17g", *avg);
            out << "," << buf;
        } else {
            out << ",";
        }
    }
    out << "\n";
}

}  // namespace detail

/// One table per metric, datasets as rows, detectors as columns, plus an
/// Average row. Returns the written paths.
inline std::vector<std::filesystem::path> emit_tables(const ReportBundle& bundle,
                                                      const std::filesystem::path& dir,
                                                      TableFormat format) {
    if (bundle.dataset_names.empty() || bundle.detectors.empty())
        throw std::invalid_argument("emit_tables: empty bundle");
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    if (format == TableFormat::text) {
        const auto path = dir / "tables.txt";
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("emit_tables: cannot open " + path.string());
        detail::emit_text_tables(bundle, out);
        written.push_back(path);
    } else if (format == TableFormat::delimited) {
        for (TableMetric metric : kAllMetrics) {
            const auto path = dir / ("table_" + std::string(metric_slug(metric)) + ".csv");
            std::ofstream out(path);
            if (!out)
                throw std::runtime_error("emit_tables: cannot open " + path.string());
            detail::emit_delimited_table(bundle, metric, out);
            written.push_back(path);
        }
    } else {
        const auto path = dir / "report.json";
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("emit_tables: cannot open " + path.string());
        out << bundle.to_json().dump(2) << "\n";
        written.push_back(path);
    }
    return written;
}

}  // namespace plof
