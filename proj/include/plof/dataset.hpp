#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace plof {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Per-point outlierness scores, aligned with PointSet row ids. A score of
/// exactly 0 marks a pruned point; genuine LOF values are strictly positive
/// (possibly +inf for points next to duplicate clusters).
using ScoreVector = std::vector<double>;

/// Immutable N x m matrix of finite feature values, row-major.
/// The row index doubles as the point id everywhere in this library.
class PointSet {
public:
    PointSet(std::size_t rows, std::size_t cols, std::vector<double> values)
        : n_(rows), m_(cols), values_(std::move(values)) {
        if (n_ < 1 || m_ < 1)
            throw std::invalid_argument("PointSet: need at least one row and one column");
        if (values_.size() != n_ * m_)
            throw std::invalid_argument("PointSet: value count does not match rows*cols");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i]))
                throw std::invalid_argument("PointSet: non-finite value at row " +
                                            std::to_string(i / m_) + ", column " +
                                            std::to_string(i % m_));
        }
    }

    static PointSet from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty())
            throw std::invalid_argument("PointSet: no rows");
        const std::size_t m = rows.front().size();
        std::vector<double> values;
        values.reserve(rows.size() * m);
        for (const auto& r : rows) {
            if (r.size() != m)
                throw std::invalid_argument("PointSet: ragged rows");
            values.insert(values.end(), r.begin(), r.end());
        }
        return PointSet(rows.size(), m, std::move(values));
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t dims() const noexcept { return m_; }

    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * m_, m_};
    }

    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::size_t n_, m_;
    std::vector<double> values_;
};

/// Binary outlier labels (true = outlier), aligned with PointSet rows.
class GroundTruth {
public:
    explicit GroundTruth(std::vector<std::uint8_t> labels) : labels_(std::move(labels)) {
        if (labels_.empty())
            throw std::invalid_argument("GroundTruth: no labels");
    }

    std::size_t size() const noexcept { return labels_.size(); }
    bool is_outlier(std::size_t i) const { return labels_[i] != 0; }

    std::size_t outlier_count() const {
        std::size_t c = 0;
        for (auto v : labels_) c += (v != 0);
        return c;
    }

    const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }

private:
    std::vector<std::uint8_t> labels_;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
    }
    return s;
}

/// Euclidean (L2) distance. Both backends and every score path go through
/// this one accumulation order, so distances compare bitwise-equal.
inline double euclidean(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

}  // namespace plof
