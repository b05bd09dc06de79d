#pragma once

#include <variant>

#include "plof/io.hpp"
#include "plof/metrics.hpp"
#include "plof/neighbors.hpp"
#include "plof/plof.hpp"
#include "plof/synthetic.hpp"

namespace plof {

enum class Detector { lof, plof, fastlof, devtomean, noop };

inline std::string to_string(Detector d) {
    switch (d) {
        case Detector::lof: return "lof";
        case Detector::plof: return "plof";
        case Detector::fastlof: return "fastlof";
        case Detector::devtomean: return "devtomean";
        case Detector::noop: return "noop";
    }
    return "?";
}

inline Detector parse_detector(const std::string& s) {
    if (s == "lof") return Detector::lof;
    if (s == "plof") return Detector::plof;
    if (s == "fastlof") return Detector::fastlof;
    if (s == "devtomean" || s == "devToMean") return Detector::devtomean;
    if (s == "noop") return Detector::noop;
    throw std::invalid_argument("unknown detector '" + s + "'");
}

inline std::string to_string(Backend b) {
    return b == Backend::brute_force ? "brute" : "tree";
}

inline Backend parse_backend(const std::string& s) {
    if (s == "brute" || s == "brute-force" || s == "brute_force") return Backend::brute_force;
    if (s == "tree" || s == "kd-tree" || s == "kd_tree" || s == "kd") return Backend::kd_tree;
    throw std::invalid_argument("unknown backend '" + s + "' (expected brute or tree)");
}

inline std::string to_string(PruneRule r) {
    return r == PruneRule::high_delta ? "high-delta" : "low-delta";
}

inline PruneRule parse_prune_rule(const std::string& s) {
    if (s == "high-delta" || s == "high_delta") return PruneRule::high_delta;
    if (s == "low-delta" || s == "low_delta") return PruneRule::low_delta;
    throw std::invalid_argument("unknown prune rule '" + s + "'");
}

namespace detail {

inline bool parse_bool(const std::string& raw, const std::string& key) {
    const std::string v = trim(raw);
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    throw std::invalid_argument("config: key '" + key + "' expects a boolean, got '" + raw + "'");
}

inline std::size_t parse_size(const std::string& raw, const std::string& key) {
    try {
        const long long v = std::stoll(trim(raw));
        if (v < 0)
            throw std::invalid_argument("negative");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' expects a non-negative integer, got '" + raw + "'");
    }
}

inline double parse_real(const std::string& raw, const std::string& key) {
    try {
        return std::stod(trim(raw));
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + raw + "'");
    }
}

inline std::vector<std::string> parse_list(const std::string& raw) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : raw) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    const std::string last = trim(cur);
    if (!last.empty() || !out.empty())
        out.push_back(last);
    return out;
}

struct KvSection {
    std::string kind;  // "" for top-level keys, else the [section] name
    std::vector<std::pair<std::string, std::string>> entries;
    std::size_t line = 0;
};

inline std::vector<KvSection> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("config: cannot open " + path);
    std::vector<KvSection> sections;
    sections.push_back({"", {}, 0});
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        const std::string t = trim(line);
        if (t.empty())
            continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::invalid_argument("config: malformed section header at line " +
                                            std::to_string(line_no));
            sections.push_back({trim(t.substr(1, t.size() - 2)), {}, line_no});
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value at line " +
                                        std::to_string(line_no));
        sections.back().entries.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return sections;
}

inline DatasetSpec dataset_spec_from_entries(const KvSection& section) {
    DatasetSpec spec;
    for (const auto& [key, value] : section.entries) {
        if (key == "name") spec.name = value;
        else if (key == "path") spec.path = value;
        else if (key == "delimiter") {
            if (value == "tab" || value == "\\t") spec.delimiter = '\t';
            else if (value.size() == 1) spec.delimiter = value[0];
            else throw std::invalid_argument("config: delimiter must be one character or 'tab'");
        }
        else if (key == "header") spec.has_header = parse_bool(value, key);
        else if (key == "label_column") spec.label_column = value;
        else if (key == "outlier_classes") spec.outlier_classes = parse_list(value);
        else if (key == "standardize") spec.standardize = parse_bool(value, key);
        else throw std::invalid_argument("config: unknown dataset key '" + key + "'");
    }
    if (spec.path.empty())
        throw std::invalid_argument("config: dataset needs a path");
    if (spec.label_column.empty())
        throw std::invalid_argument("config: dataset needs a label_column");
    if (spec.outlier_classes.empty())
        throw std::invalid_argument("config: dataset needs outlier_classes");
    return spec;
}

inline SyntheticSpec synthetic_spec_from_entries(const KvSection& section) {
    SyntheticSpec spec;
    for (const auto& [key, value] : section.entries) {
        if (key == "name") spec.name = value;
        else if (key == "n_inliers") spec.n_inliers = parse_size(value, key);
        else if (key == "n_outliers") spec.n_outliers = parse_size(value, key);
        else if (key == "dims") spec.dims = parse_size(value, key);
        else if (key == "clusters") spec.cluster_count = parse_size(value, key);
        else if (key == "spread") spec.cluster_spread = parse_real(value, key);
        else if (key == "box_scale") spec.outlier_box_scale = parse_real(value, key);
        else if (key == "seed") spec.seed = parse_size(value, key);
        else throw std::invalid_argument("config: unknown synthetic key '" + key + "'");
    }
    return spec;
}

}  // namespace detail

using DatasetRef = std::variant<DatasetSpec, SyntheticSpec>;

inline std::string dataset_name(const DatasetRef& ref) {
    if (const auto* d = std::get_if<DatasetSpec>(&ref)) {
        if (!d->name.empty())
            return d->name;
        return std::filesystem::path(d->path).stem().string();
    }
    return std::get<SyntheticSpec>(ref).name;
}

/// Parse a standalone dataset spec file (same keys as a [dataset] block).
inline DatasetSpec parse_dataset_spec(const std::string& path) {
    const auto sections = detail::parse_kv_file(path);
    detail::KvSection merged{"", {}, 0};
    for (const auto& s : sections) {
        if (!s.kind.empty() && s.kind != "dataset")
            throw std::invalid_argument("dataset spec: unexpected section [" + s.kind + "]");
        merged.entries.insert(merged.entries.end(), s.entries.begin(), s.entries.end());
    }
    return detail::dataset_spec_from_entries(merged);
}

/// Parse a standalone synthetic spec file (same keys as a [synthetic] block).
inline SyntheticSpec parse_synthetic_spec(const std::string& path) {
    const auto sections = detail::parse_kv_file(path);
    detail::KvSection merged{"", {}, 0};
    for (const auto& s : sections) {
        if (!s.kind.empty() && s.kind != "synthetic")
            throw std::invalid_argument("synthetic spec: unexpected section [" + s.kind + "]");
        merged.entries.insert(merged.entries.end(), s.entries.begin(), s.entries.end());
    }
    return detail::synthetic_spec_from_entries(merged);
}

struct ExperimentConfig {
    std::vector<DatasetRef> datasets;
    std::vector<Detector> detectors;
    std::size_t minpts = 10;
    DecisionRule rule = DecisionRule::threshold(1.0);
    std::size_t repetitions = 5;
    Backend backend = Backend::brute_force;
    std::uint64_t base_seed = 42;
    PruneRule prune_rule = PruneRule::high_delta;
    std::size_t fastlof_chunks = 0;      // 0 = auto: ceil(N / (10*minpts))
    std::size_t devtomean_clusters = 0;  // 0 = auto: ceil(sqrt(N))
    double devtomean_threshold = 1.0;
    std::string output_dir;

    void validate() const {
        if (datasets.empty())
            throw std::invalid_argument("config: at least one dataset is required");
        if (detectors.empty())
            throw std::invalid_argument("config: at least one detector is required");
        if (repetitions < 1)
            throw std::invalid_argument("config: repetitions must be >= 1");
        if (minpts < 1)
            throw std::invalid_argument("config: minpts must be >= 1");
        std::vector<std::string> names;
        for (const auto& d : datasets)
            names.push_back(dataset_name(d));
        std::sort(names.begin(), names.end());
        if (std::adjacent_find(names.begin(), names.end()) != names.end())
            throw std::invalid_argument("config: dataset names must be unique");
    }
};

/// Default output directory: $PLOFBENCH_OUTPUT_DIR if set, else "results".
inline std::string default_output_dir() {
    if (const char* env = std::getenv("PLOFBENCH_OUTPUT_DIR"); env && *env)
        return env;
    return "results";
}

inline ExperimentConfig parse_experiment_config(const std::string& path) {
    ExperimentConfig cfg;
    const auto sections = detail::parse_kv_file(path);
    for (const auto& section : sections) {
        if (section.kind == "dataset") {
            cfg.datasets.emplace_back(detail::dataset_spec_from_entries(section));
        } else if (section.kind == "synthetic") {
            cfg.datasets.emplace_back(detail::synthetic_spec_from_entries(section));
        } else if (section.kind.empty()) {
            for (const auto& [key, value] : section.entries) {
                if (key == "detectors") {
                    cfg.detectors.clear();
                    for (const auto& name : detail::parse_list(value))
                        cfg.detectors.push_back(parse_detector(name));
                }
                else if (key == "minpts") cfg.minpts = detail::parse_size(value, key);
                else if (key == "rule") cfg.rule = DecisionRule::parse(value);
                else if (key == "repetitions") cfg.repetitions = detail::parse_size(value, key);
                else if (key == "backend") cfg.backend = parse_backend(value);
                else if (key == "seed") cfg.base_seed = detail::parse_size(value, key);
                else if (key == "prune_rule") cfg.prune_rule = parse_prune_rule(value);
                else if (key == "fastlof_chunks") cfg.fastlof_chunks = detail::parse_size(value, key);
                else if (key == "devtomean_clusters") cfg.devtomean_clusters = detail::parse_size(value, key);
                else if (key == "devtomean_threshold") cfg.devtomean_threshold = detail::parse_real(value, key);
                else if (key == "output") cfg.output_dir = value;
                else throw std::invalid_argument("config: unknown key '" + key + "'");
            }
        } else {
            throw std::invalid_argument("config: unknown section [" + section.kind + "]");
        }
    }
    if (cfg.output_dir.empty())
        cfg.output_dir = default_output_dir();
    cfg.validate();
    return cfg;
}

}  // namespace plof
