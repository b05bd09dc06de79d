#pragma once

#include <random>

#include "plof/lof.hpp"

namespace plof {

/// Default FastLOF chunk count: ceil(N / (10 * minpts)), so chunks
/// comfortably exceed minpts members.
inline std::size_t fastlof_default_chunks(std::size_t n, std::size_t minpts) {
    const std::size_t denom = 10 * minpts;
    return std::max<std::size_t>(1, (n + denom - 1) / denom);
}

struct ChunkAssignment {
    std::vector<std::size_t> chunk_of;
    std::size_t chunk_count = 0;
    std::uint64_t seed = 0;
};

/// Uniform per-point chunk draw; redrawn up to 10 times until every chunk
/// has more than minpts members.
inline ChunkAssignment random_chunks(std::size_t n, std::size_t chunk_count,
                                     std::size_t minpts, std::uint64_t seed) {
    if (chunk_count < 1)
        throw std::invalid_argument("random_chunks: chunk_count must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, chunk_count - 1);
    ChunkAssignment a;
    a.chunk_count = chunk_count;
    a.seed = seed;
    a.chunk_of.resize(n);
    for (int attempt = 0; attempt < 10; ++attempt) {
        std::vector<std::size_t> sizes(chunk_count, 0);
        for (std::size_t i = 0; i < n; ++i)
            ++sizes[a.chunk_of[i] = pick(rng)];
        bool ok = true;
        for (auto s : sizes)
            ok = ok && s > minpts;
        if (ok)
            return a;
    }
    throw std::invalid_argument("random_chunks: could not draw chunks with > minpts members in 10 attempts");
}

/// FastLOF core: LOF with neighborhoods restricted to each point's chunk.
inline ScoreVector fastlof_scores_chunked(const PointSet& data, std::size_t minpts,
                                          const ChunkAssignment& chunks, Backend backend) {
    const std::size_t n = data.size();
    if (chunks.chunk_of.size() != n)
        throw std::invalid_argument("fastlof: chunk assignment does not cover the dataset");
    ScoreVector scores(n, 0.0);
    for (std::size_t c = 0; c < chunks.chunk_count; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i)
            if (chunks.chunk_of[i] == c)
                members.push_back(i);
        if (members.size() <= minpts)
            throw std::invalid_argument("fastlof: chunk " + std::to_string(c) +
                                        " has " + std::to_string(members.size()) +
                                        " members, need > minpts");
        std::vector<double> sub_values;
        sub_values.reserve(members.size() * data.dims());
        for (auto id : members) {
            const auto row = data.row(id);
            sub_values.insert(sub_values.end(), row.begin(), row.end());
        }
        PointSet sub(members.size(), data.dims(), std::move(sub_values));
        NeighborIndex index(sub, backend);
        KDistanceCache cache(index, minpts);
        const ScoreVector sub_scores = lof_from_cache(sub, cache);
        for (std::size_t i = 0; i < members.size(); ++i)
            scores[members[i]] = sub_scores[i];
    }
    return scores;
}

/// Single-pass FastLOF as described alongside PLOF: random chunks, then LOF
/// per point using only within-chunk neighbors. chunk_count == 1 degenerates
/// to plain LOF.
inline ScoreVector fastlof_scores(const PointSet& data, std::size_t minpts,
                                  std::size_t chunk_count, std::uint64_t seed,
                                  Backend backend) {
    if (minpts < 1)
        throw std::invalid_argument("fastlof: minpts must be >= 1");
    const ChunkAssignment chunks = random_chunks(data.size(), chunk_count, minpts, seed);
    return fastlof_scores_chunked(data, minpts, chunks, backend);
}

struct ClusterModel {
    std::size_t cluster_count = 0;
    std::vector<double> centroids;        // cluster_count x m, row-major
    std::vector<std::size_t> assignment;  // per point
    std::vector<double> inertia_history;  // one entry per Lloyd iteration
    std::size_t iterations = 0;
    std::uint64_t seed = 0;

    double inertia() const { return inertia_history.empty() ? 0.0 : inertia_history.back(); }

    std::span<const double> centroid(std::size_t c, std::size_t m) const {
        return {centroids.data() + c * m, m};
    }
};

/// Lloyd iteration, initialized from c distinct row indices drawn under the
/// seed. Stops at an assignment fixpoint or max_iters. Empty clusters keep
/// their previous centroid.
inline ClusterModel kmeans(const PointSet& data, std::size_t c, std::uint64_t seed,
                           std::size_t max_iters = 100) {
    const std::size_t n = data.size();
    const std::size_t m = data.dims();
    if (c < 1 || c > n)
        throw std::invalid_argument("kmeans: need 1 <= c <= N");
    if (max_iters < 1)
        throw std::invalid_argument("kmeans: max_iters must be >= 1");

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> ids(n);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    std::shuffle(ids.begin(), ids.end(), rng);

    ClusterModel model;
    model.cluster_count = c;
    model.seed = seed;
    model.centroids.reserve(c * m);
    for (std::size_t j = 0; j < c; ++j) {
        const auto row = data.row(ids[j]);
        model.centroids.insert(model.centroids.end(), row.begin(), row.end());
    }
    // Out-of-range sentinel so the first pass always counts as a change and
    // the centroid update runs before the fixpoint test.
    model.assignment.assign(n, c);

    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = data.row(i);
            std::size_t best = 0;
            double best_d2 = squared_distance(row, model.centroid(0, m));
            for (std::size_t j = 1; j < c; ++j) {
                const double d2 = squared_distance(row, model.centroid(j, m));
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = j;
                }
            }
            inertia += best_d2;
            if (model.assignment[i] != best) {
                model.assignment[i] = best;
                changed = true;
            }
        }
        model.inertia_history.push_back(inertia);
        ++model.iterations;
        if (!changed)
            break;

        std::vector<double> sums(c * m, 0.0);
        std::vector<std::size_t> counts(c, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = data.row(i);
            const std::size_t j = model.assignment[i];
            ++counts[j];
            for (std::size_t d = 0; d < m; ++d)
                sums[j * m + d] += row[d];
        }
        for (std::size_t j = 0; j < c; ++j) {
            if (counts[j] == 0)
                continue;  // keep the previous centroid
            for (std::size_t d = 0; d < m; ++d)
                model.centroids[j * m + d] = sums[j * m + d] / static_cast<double>(counts[j]);
        }
    }
    return model;
}

inline std::size_t devtomean_default_clusters(std::size_t n) {
    return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
}

struct DevToMeanResult {
    ScoreVector scores;
    std::vector<double> dev_to_mean;
    std::vector<std::uint8_t> pruned;
    ClusterModel clusters;
};

/// devToMean baseline: k-means, then per point the ratio of its distance to
/// its cluster centroid over the cluster's mean such distance. Points with
/// devToMean <= prune_threshold get score 0; the rest receive LOF computed
/// over the FULL dataset. A threshold <= 0 disables pruning entirely.
inline DevToMeanResult devtomean_detailed(const PointSet& data, std::size_t minpts,
                                          std::size_t cluster_count, double prune_threshold,
                                          std::uint64_t seed, Backend backend) {
    const std::size_t n = data.size();
    const std::size_t m = data.dims();
    if (minpts < 1 || minpts + 1 > n)
        throw std::invalid_argument("devtomean: minpts must satisfy 1 <= minpts <= N-1");

    DevToMeanResult result;
    result.clusters = kmeans(data, cluster_count, seed);

    std::vector<double> dist_to_centroid(n);
    std::vector<double> mean_dist(cluster_count, 0.0);
    std::vector<std::size_t> counts(cluster_count, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = result.clusters.assignment[i];
        dist_to_centroid[i] = euclidean(data.row(i), result.clusters.centroid(j, m));
        mean_dist[j] += dist_to_centroid[i];
        ++counts[j];
    }
    for (std::size_t j = 0; j < cluster_count; ++j)
        if (counts[j] > 0)
            mean_dist[j] /= static_cast<double>(counts[j]);

    result.dev_to_mean.resize(n);
    result.pruned.resize(n);
    bool any_kept = false;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = result.clusters.assignment[i];
        // d == 0 covers the exact-centroid and all-at-centroid (0/0) cases.
        result.dev_to_mean[i] =
            dist_to_centroid[i] == 0.0 ? 0.0 : dist_to_centroid[i] / mean_dist[j];
        result.pruned[i] =
            (prune_threshold > 0.0 && result.dev_to_mean[i] <= prune_threshold) ? 1 : 0;
        any_kept = any_kept || result.pruned[i] == 0;
    }

    result.scores.assign(n, 0.0);
    if (any_kept) {
        NeighborIndex index(data, backend);
        KDistanceCache cache(index, minpts);
        LrdCache lrds(n);
        for (std::size_t i = 0; i < n; ++i)
            if (!result.pruned[i])
                result.scores[i] = lof_score(data, cache, lrds, i);
    }
    return result;
}

inline ScoreVector devtomean_scores(const PointSet& data, std::size_t minpts,
                                    std::size_t cluster_count, double prune_threshold,
                                    std::uint64_t seed, Backend backend) {
    return devtomean_detailed(data, minpts, cluster_count, prune_threshold, seed, backend).scores;
}

}  // namespace plof
