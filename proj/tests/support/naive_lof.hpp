// Independent naive transcription of the reachability / LRD / LOF / delta
// formulas, used as the test oracle. Deliberately kept apart from the
// library: its own data layout (vector of rows), full pairwise sort per
// query, no shared code with the implementation under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace naive {

using Rows = std::vector<std::vector<double>>;

inline double dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
    }
    return std::sqrt(s);
}

struct Profile {
    double k_distance = 0.0;
    std::vector<std::size_t> neighbors;  // tie-inclusive, ascending (dist, id)
};

inline Profile profile(const Rows& rows, std::size_t i, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> ds;
    for (std::size_t j = 0; j < rows.size(); ++j)
        if (j != i)
            ds.emplace_back(dist(rows[i], rows[j]), j);
    std::sort(ds.begin(), ds.end());
    Profile p;
    p.k_distance = ds[k - 1].first;
    for (const auto& [d, j] : ds)
        if (d <= p.k_distance)
            p.neighbors.push_back(j);
    return p;
}

inline double lrd(const Rows& rows, std::size_t i, std::size_t k) {
    const Profile p = profile(rows, i, k);
    double sum = 0.0;
    for (std::size_t o : p.neighbors) {
        const Profile po = profile(rows, o, k);
        sum += std::max(po.k_distance, dist(rows[i], rows[o]));
    }
    if (sum == 0.0)
        return std::numeric_limits<double>::infinity();
    return static_cast<double>(p.neighbors.size()) / sum;
}

inline double lof(const Rows& rows, std::size_t i, std::size_t k) {
    const Profile p = profile(rows, i, k);
    const double lrd_i = lrd(rows, i, k);
    double sum = 0.0;
    for (std::size_t o : p.neighbors) {
        const double lrd_o = lrd(rows, o, k);
        if (std::isinf(lrd_i))
            sum += std::isinf(lrd_o) ? 1.0 : 0.0;
        else
            sum += lrd_o / lrd_i;
    }
    return sum / static_cast<double>(p.neighbors.size());
}

// Memoized full pass; formulas identical to the per-point routines above.
inline std::vector<double> lof_all(const Rows& rows, std::size_t k) {
    const std::size_t n = rows.size();
    std::vector<Profile> profiles;
    profiles.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        profiles.push_back(profile(rows, i, k));

    std::vector<double> lrds(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t o : profiles[i].neighbors)
            sum += std::max(profiles[o].k_distance, dist(rows[i], rows[o]));
        lrds[i] = sum == 0.0 ? std::numeric_limits<double>::infinity()
                             : static_cast<double>(profiles[i].neighbors.size()) / sum;
    }

    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t o : profiles[i].neighbors) {
            if (std::isinf(lrds[i]))
                sum += std::isinf(lrds[o]) ? 1.0 : 0.0;
            else
                sum += lrds[o] / lrds[i];
        }
        scores[i] = sum / static_cast<double>(profiles[i].neighbors.size());
    }
    return scores;
}

inline double delta(const Rows& rows, std::size_t i, std::size_t k) {
    const Profile p = profile(rows, i, k);
    double sum = 0.0;
    for (std::size_t o : p.neighbors)
        sum += dist(rows[i], rows[o]);
    const double m = static_cast<double>(p.neighbors.size());
    if (sum == 0.0)
        return std::numeric_limits<double>::infinity();
    return m * m / sum;
}

inline std::vector<double> deltas(const Rows& rows, std::size_t k) {
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        out[i] = delta(rows, i, k);
    return out;
}

// Median of the deltas after dropping the first minimum and last maximum,
// mirroring the prune rule under test.
inline double median_after_extremes(const std::vector<double>& ds) {
    std::size_t min_id = 0, max_id = 0;
    for (std::size_t i = 1; i < ds.size(); ++i) {
        if (ds[i] < ds[min_id]) min_id = i;
        if (ds[i] >= ds[max_id]) max_id = i;
    }
    std::vector<double> rest;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (i != min_id && i != max_id)
            rest.push_back(ds[i]);
    std::sort(rest.begin(), rest.end());
    const std::size_t mid = rest.size() / 2;
    if (rest.size() % 2 == 1)
        return rest[mid];
    return (rest[mid - 1] + rest[mid]) / 2.0;
}

}  // namespace naive
