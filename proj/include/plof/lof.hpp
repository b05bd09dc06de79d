#pragma once

#include "plof/neighbors.hpp"

namespace plof {

/// Reachability distance of p w.r.t. o: max(k_distance(o), d(p,o)).
inline double reach_dist(const PointSet& data, const KDistanceCache& cache,
                         std::size_t p, std::size_t o) {
    if (p == o)
        throw std::invalid_argument("reach_dist: p and o must differ");
    return std::max(cache.k_distance(o), euclidean(data.row(p), data.row(o)));
}

/// Local reachability density: |N(p)| / sum of reachability distances to the
/// tie-inclusive neighborhood. +inf when every reachability distance is 0
/// (the neighborhood consists of duplicates of p).
inline double lrd(const PointSet& data, const KDistanceCache& cache, std::size_t p) {
    (void)data;
    const auto nbrs = cache.neighbors(p);
    double sum = 0.0;
    for (const NeighborEntry& nb : nbrs)
        sum += std::max(cache.k_distance(nb.id), nb.dist);
    if (sum == 0.0)
        return kInfinity;
    return static_cast<double>(nbrs.size()) / sum;
}

/// Lazily memoized LRDs. PLOF only ever pulls entries for kept points and
/// their neighborhoods; a full LOF pass ends up populating every slot.
class LrdCache {
public:
    explicit LrdCache(std::size_t n) : values_(n, 0.0), known_(n, 0) {}

    double get(const PointSet& data, const KDistanceCache& cache, std::size_t p) {
        if (!known_[p]) {
            values_[p] = lrd(data, cache, p);
            known_[p] = 1;
        }
        return values_[p];
    }

    bool known(std::size_t p) const { return known_[p] != 0; }

    std::size_t computed_count() const {
        std::size_t c = 0;
        for (auto v : known_) c += (v != 0);
        return c;
    }

private:
    std::vector<double> values_;
    std::vector<std::uint8_t> known_;
};

/// LOF of point p: mean ratio of neighbor LRDs to p's own LRD.
/// Infinity conventions: finite/inf = 0, inf/inf = 1, inf/finite = inf.
inline double lof_score(const PointSet& data, const KDistanceCache& cache,
                        LrdCache& lrds, std::size_t p) {
    const auto nbrs = cache.neighbors(p);
    const double lrd_p = lrds.get(data, cache, p);
    double sum = 0.0;
    for (const NeighborEntry& nb : nbrs) {
        const double lrd_o = lrds.get(data, cache, nb.id);
        if (std::isinf(lrd_p))
            sum += std::isinf(lrd_o) ? 1.0 : 0.0;
        else
            sum += lrd_o / lrd_p;  // lrd_o == inf propagates to an inf score
    }
    return sum / static_cast<double>(nbrs.size());
}

/// LOF for every point, reading neighborhoods from an existing cache.
inline ScoreVector lof_from_cache(const PointSet& data, const KDistanceCache& cache) {
    LrdCache lrds(data.size());
    ScoreVector scores(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        scores[i] = lof_score(data, cache, lrds, i);
    return scores;
}

/// LOF for every point: builds the index, caches all k-distance profiles,
/// then scores each point. Deterministic for fixed inputs.
inline ScoreVector lof_all(const PointSet& data, std::size_t minpts, Backend backend) {
    if (minpts < 1 || minpts + 1 > data.size())
        throw std::invalid_argument("lof_all: minpts must satisfy 1 <= minpts <= N-1");
    NeighborIndex index(data, backend);
    KDistanceCache cache(index, minpts);
    return lof_from_cache(data, cache);
}

}  // namespace plof
