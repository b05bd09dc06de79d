#pragma once

#include "plof/lof.hpp"

namespace plof {

/// Which side of the median gets pruned. high_delta prunes dense points
/// (delta above the median) and is the default; low_delta is the opposite
/// reading, kept behind a switch for auditability.
enum class PruneRule { high_delta, low_delta };

using DeltaVector = std::vector<double>;

/// Delta density of point p: |M|^2 / sum of distances to the tie-inclusive
/// k-distance neighborhood M. +inf when all members duplicate p.
inline double delta_density(const KDistanceCache& cache, std::size_t p) {
    const auto nbrs = cache.neighbors(p);
    double sum = 0.0;
    for (const NeighborEntry& nb : nbrs)
        sum += nb.dist;
    const double m = static_cast<double>(nbrs.size());
    if (sum == 0.0)
        return kInfinity;
    return m * m / sum;
}

inline DeltaVector delta_densities(const KDistanceCache& cache) {
    DeltaVector deltas(cache.size());
    for (std::size_t i = 0; i < cache.size(); ++i)
        deltas[i] = delta_density(cache, i);
    return deltas;
}

struct PruneMask {
    std::vector<std::uint8_t> kept;  // true = LOF will be computed
    double median_delta = 0.0;
    // The single extreme occurrences excluded from the median computation
    // (first minimum, last maximum). They are still classified by comparing
    // their own delta against the median like every other point.
    std::size_t min_delta_id = 0;
    std::size_t max_delta_id = 0;

    std::size_t pruned_count() const {
        std::size_t c = 0;
        for (auto v : kept) c += (v == 0);
        return c;
    }
};

/// Median-based prune mask: drop one minimal and one maximal delta, take the
/// median of the remaining N-2 values (mean of the two middles for even
/// counts), then keep every point on the sparse side of it. Ties at the
/// median are kept.
inline PruneMask prune_mask(const DeltaVector& deltas, PruneRule rule = PruneRule::high_delta) {
    const std::size_t n = deltas.size();
    if (n <= 4)
        throw std::invalid_argument("prune_mask: need more than 4 points");

    std::size_t min_id = 0, max_id = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (deltas[i] < deltas[min_id]) min_id = i;
        if (deltas[i] >= deltas[max_id]) max_id = i;
    }
    // min_id != max_id always: an all-equal vector yields 0 and n-1.

    std::vector<double> rest;
    rest.reserve(n - 2);
    for (std::size_t i = 0; i < n; ++i)
        if (i != min_id && i != max_id)
            rest.push_back(deltas[i]);

    const std::size_t mid = rest.size() / 2;
    std::nth_element(rest.begin(), rest.begin() + mid, rest.end());
    double median = rest[mid];
    if (rest.size() % 2 == 0) {
        const double lower = *std::max_element(rest.begin(), rest.begin() + mid);
        median = (lower + median) / 2.0;
    }

    PruneMask mask;
    mask.median_delta = median;
    mask.min_delta_id = min_id;
    mask.max_delta_id = max_id;
    mask.kept.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool keep = rule == PruneRule::high_delta ? deltas[i] <= median
                                                        : deltas[i] >= median;
        mask.kept[i] = keep ? 1 : 0;
    }
    return mask;
}

inline double prune_rate(const PruneMask& mask) {
    return static_cast<double>(mask.pruned_count()) / static_cast<double>(mask.kept.size());
}

struct PlofResult {
    ScoreVector scores;
    DeltaVector deltas;
    PruneMask mask;
};

/// Prune-based LOF. Kept points receive exactly the score a full LOF pass
/// would give them (pruned points still serve as neighbors and contribute
/// their LRDs); pruned points receive 0. LRDs are computed only for kept
/// points plus the union of their neighborhoods.
inline PlofResult plof_detailed(const PointSet& data, std::size_t minpts, Backend backend,
                                PruneRule rule = PruneRule::high_delta) {
    const std::size_t n = data.size();
    if (n <= 4)
        throw std::invalid_argument("plof: need more than 4 points");
    if (minpts < 1 || minpts + 1 > n)
        throw std::invalid_argument("plof: minpts must satisfy 1 <= minpts <= N-1");

    NeighborIndex index(data, backend);
    KDistanceCache cache(index, minpts);

    PlofResult result;
    result.deltas = delta_densities(cache);
    result.mask = prune_mask(result.deltas, rule);

    LrdCache lrds(n);
    result.scores.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (result.mask.kept[i])
            result.scores[i] = lof_score(data, cache, lrds, i);
    return result;
}

inline ScoreVector plof_scores(const PointSet& data, std::size_t minpts, Backend backend,
                               PruneRule rule = PruneRule::high_delta) {
    return plof_detailed(data, minpts, backend, rule).scores;
}

}  // namespace plof
