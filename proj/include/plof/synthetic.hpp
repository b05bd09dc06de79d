#pragma once

#include <random>

#include "plof/io.hpp"

namespace plof {

/// Seeded synthetic benchmark set: Gaussian inlier blobs plus uniform-box
/// outliers drawn from the inlier bounding box scaled by outlier_box_scale.
struct SyntheticSpec {
    std::string name = "synthetic";
    std::size_t n_inliers = 0;
    std::size_t n_outliers = 0;
    std::size_t dims = 0;
    std::size_t cluster_count = 1;
    double cluster_spread = 1.0;
    double outlier_box_scale = 4.0;
    std::uint64_t seed = 0;
};

/// Pure function of its spec: identical specs give byte-identical datasets.
/// Rows are inliers first (round-robin over clusters), then outliers.
inline LabeledDataset make_synthetic(const SyntheticSpec& spec) {
    if (spec.dims < 1)
        throw std::invalid_argument("make_synthetic: dims must be >= 1");
    if (spec.cluster_count < 1)
        throw std::invalid_argument("make_synthetic: cluster_count must be >= 1");
    if (spec.n_outliers < 1)
        throw std::invalid_argument("make_synthetic: need at least one outlier (metrics require both classes)");
    if (spec.n_outliers >= spec.n_inliers)
        throw std::invalid_argument("make_synthetic: n_outliers must be < n_inliers");
    if (spec.cluster_spread < 0.0 || spec.outlier_box_scale <= 0.0)
        throw std::invalid_argument("make_synthetic: spread must be >= 0 and box scale > 0");

    std::mt19937_64 rng(spec.seed);
    const std::size_t m = spec.dims;

    std::uniform_real_distribution<double> center_dist(-10.0, 10.0);
    std::vector<double> centers(spec.cluster_count * m);
    for (auto& v : centers)
        v = center_dist(rng);

    const std::size_t n = spec.n_inliers + spec.n_outliers;
    std::vector<double> values;
    values.reserve(n * m);

    std::normal_distribution<double> noise(0.0, spec.cluster_spread == 0.0 ? 1e-9 : spec.cluster_spread);
    for (std::size_t i = 0; i < spec.n_inliers; ++i) {
        const std::size_t c = i % spec.cluster_count;
        for (std::size_t d = 0; d < m; ++d)
            values.push_back(centers[c * m + d] + noise(rng));
    }

    // Outlier box: the inlier bounding box inflated around its center.
    std::vector<double> lo(m), hi(m);
    for (std::size_t d = 0; d < m; ++d) {
        lo[d] = hi[d] = values[d];
        for (std::size_t i = 1; i < spec.n_inliers; ++i) {
            const double v = values[i * m + d];
            lo[d] = std::min(lo[d], v);
            hi[d] = std::max(hi[d], v);
        }
    }
    for (std::size_t j = 0; j < spec.n_outliers; ++j) {
        for (std::size_t d = 0; d < m; ++d) {
            const double mid = (lo[d] + hi[d]) / 2.0;
            double half = (hi[d] - lo[d]) / 2.0 * spec.outlier_box_scale;
            if (half <= 0.0)
                half = spec.outlier_box_scale;
            std::uniform_real_distribution<double> box(mid - half, mid + half);
            values.push_back(box(rng));
        }
    }

    std::vector<std::uint8_t> labels(n, 0);
    for (std::size_t j = spec.n_inliers; j < n; ++j)
        labels[j] = 1;

    return LabeledDataset{spec.name, PointSet(n, m, std::move(values)),
                          GroundTruth(std::move(labels))};
}

}  // namespace plof
