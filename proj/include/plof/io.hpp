#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "plof/dataset.hpp"

namespace plof {

/// How to read one labeled delimited-text dataset. The label column is a
/// 0-based index, or a column name when the file has a header row.
struct DatasetSpec {
    std::string name;
    std::string path;
    char delimiter = ',';
    bool has_header = false;
    std::string label_column;
    std::vector<std::string> outlier_classes;
    bool standardize = false;
};

struct LabeledDataset {
    std::string name;
    PointSet points;
    GroundTruth truth;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// RFC-4180-style splitting: fields may be double-quoted, "" escapes a quote.
inline std::vector<std::string> split_record(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool at_field_start = true;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && at_field_start) {
            quoted = true;
            at_field_start = false;
        } else if (c == delim) {
            fields.push_back(cur);
            cur.clear();
            at_field_start = true;
        } else {
            cur += c;
            at_field_start = false;
        }
    }
    fields.push_back(cur);
    return fields;
}

inline double parse_number(const std::string& raw, std::size_t line_no, std::size_t col_no) {
    const std::string cell = trim(raw);
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value))
        throw std::runtime_error("csv: cannot parse '" + cell + "' as a finite number at line " +
                                 std::to_string(line_no) + ", column " + std::to_string(col_no));
    return value;
}

}  // namespace detail

/// Per-column z-scoring (population sd). Constant columns become all zeros.
inline void standardize_in_place(std::vector<double>& values, std::size_t n, std::size_t m) {
    for (std::size_t c = 0; c < m; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            mean += values[r * m + c];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double d = values[r * m + c] - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / static_cast<double>(n));
        for (std::size_t r = 0; r < n; ++r)
            values[r * m + c] = sd == 0.0 ? 0.0 : (values[r * m + c] - mean) / sd;
    }
}

inline PointSet standardized(const PointSet& data) {
    std::vector<double> values = data.values();
    standardize_in_place(values, data.size(), data.dims());
    return PointSet(data.size(), data.dims(), std::move(values));
}

inline LabeledDataset load_csv(const DatasetSpec& spec) {
    if (spec.outlier_classes.empty())
        throw std::invalid_argument("load_csv: outlier_classes must be non-empty");
    std::ifstream in(spec.path);
    if (!in)
        throw std::runtime_error("load_csv: cannot open " + spec.path);

    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    if (spec.has_header) {
        if (!std::getline(in, line))
            throw std::runtime_error("load_csv: empty file " + spec.path);
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        header = detail::split_record(line, spec.delimiter);
    }

    // Resolve the label column: all-digits means a 0-based index.
    std::ptrdiff_t label_idx = -1;
    const std::string label_key = detail::trim(spec.label_column);
    if (label_key.empty())
        throw std::invalid_argument("load_csv: label_column is required");
    if (label_key.find_first_not_of("0123456789") == std::string::npos) {
        label_idx = std::stol(label_key);
    } else {
        if (!spec.has_header)
            throw std::invalid_argument("load_csv: label column by name requires a header row");
        for (std::size_t i = 0; i < header.size(); ++i)
            if (detail::trim(header[i]) == label_key)
                label_idx = static_cast<std::ptrdiff_t>(i);
        if (label_idx < 0)
            throw std::invalid_argument("load_csv: label column '" + label_key + "' not in header");
    }

    std::vector<double> values;
    std::vector<std::uint8_t> labels;
    std::size_t n_cols = spec.has_header ? header.size() : 0;
    std::size_t n_rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (detail::trim(line).empty())
            continue;
        const auto fields = detail::split_record(line, spec.delimiter);
        if (n_cols == 0)
            n_cols = fields.size();
        if (fields.size() != n_cols)
            throw std::runtime_error("load_csv: expected " + std::to_string(n_cols) +
                                     " fields but found " + std::to_string(fields.size()) +
                                     " at line " + std::to_string(line_no));
        if (label_idx >= static_cast<std::ptrdiff_t>(n_cols))
            throw std::invalid_argument("load_csv: label column index " +
                                        std::to_string(label_idx) + " out of range (" +
                                        std::to_string(n_cols) + " columns)");
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (static_cast<std::ptrdiff_t>(c) == label_idx)
                continue;
            values.push_back(detail::parse_number(fields[c], line_no, c + 1));
        }
        const std::string raw_label = detail::trim(fields[static_cast<std::size_t>(label_idx)]);
        bool is_outlier = false;
        for (const auto& cls : spec.outlier_classes)
            if (raw_label == cls)
                is_outlier = true;
        labels.push_back(is_outlier ? 1 : 0);
        ++n_rows;
    }
    if (n_rows == 0)
        throw std::runtime_error("load_csv: no data rows in " + spec.path);
    const std::size_t m = n_cols - 1;
    if (m == 0)
        throw std::runtime_error("load_csv: no feature columns in " + spec.path);

    if (spec.standardize)
        standardize_in_place(values, n_rows, m);

    std::string name = spec.name;
    if (name.empty())
        name = std::filesystem::path(spec.path).stem().string();
    return LabeledDataset{std::move(name), PointSet(n_rows, m, std::move(values)),
                          GroundTruth(std::move(labels))};
}

/// Score file: one "<point-id>\t<score>" line per point.
inline void write_scores(const std::filesystem::path& path, const ScoreVector& scores) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_scores: cannot open " + path.string());
    char buf[64];
    for (std::size_t i = 0; i < scores.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu\t%.17g\n", i, scores[i]);
        out << buf;
    }
}

/// Features plus a trailing binary "label" column, with a header row, so the
/// output can be re-ingested with label_column=label.
inline void write_dataset_csv(const std::filesystem::path& path, const PointSet& points,
                              const GroundTruth& truth) {
    if (points.size() != truth.size())
        throw std::invalid_argument("write_dataset_csv: points/labels length mismatch");
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_dataset_csv: cannot open " + path.string());
    for (std::size_t c = 0; c < points.dims(); ++c)
        out << "f" << c << ",";
    out << "label\n";
    char buf[64];
    for (std::size_t r = 0; r < points.size(); ++r) {
        const auto row = points.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g,", row[c]);
            out << buf;
        }
        out << (truth.is_outlier(r) ? 1 : 0) << "\n";
    }
}

}  // namespace plof
