#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <vector>

#include "plof/dataset.hpp"

namespace plof {

enum class Backend { brute_force, kd_tree };

struct NeighborEntry {
    std::size_t id;
    double dist;
    friend bool operator==(const NeighborEntry&, const NeighborEntry&) = default;
};

/// Ascending by (dist, id), tie-inclusive at the k-distance radius, never
/// containing the query point itself. Size >= k; larger only when ties sit
/// exactly at the radius.
using NeighborList = std::vector<NeighborEntry>;

struct KDistanceProfile {
    std::size_t id = 0;
    double k_distance = 0.0;
    NeighborList neighbors;

    std::size_t neighborhood_size() const { return neighbors.size(); }
};

/// k-NN / radius queries over a PointSet via either a full scan or a
/// balanced binary space-partitioning tree (widest-spread split at the
/// median, leaf size 16). Read-only after construction; both backends
/// return identical neighbor sets and bitwise-identical distances.
class NeighborIndex {
public:
    NeighborIndex(const PointSet& data, Backend backend)
        : data_(&data), backend_(backend) {
        if (data.size() < 2)
            throw std::invalid_argument("NeighborIndex: need at least 2 points");
        if (backend_ == Backend::kd_tree)
            build_tree();
    }

    const PointSet& data() const { return *data_; }
    Backend backend() const { return backend_; }

    /// Reusable per-query workspace; avoids reallocating two N-sized buffers
    /// on every query of a bulk pass.
    struct QueryScratch {
        std::vector<double> d2;
        std::vector<double> heap;
    };

    NeighborList query_knn(std::size_t query, std::size_t k) const {
        QueryScratch scratch;
        NeighborList out;
        query_knn_into(query, k, scratch, out);
        return out;
    }

    void query_knn_into(std::size_t query, std::size_t k, QueryScratch& scratch,
                        NeighborList& out) const {
        check_query(query, k);
        out.clear();
        if (backend_ == Backend::brute_force) {
            brute_query(query, k, scratch, out);
        } else {
            const double r2 = tree_kth_squared(query, k);
            tree_collect(0, query, r2, out);
        }
        std::sort(out.begin(), out.end(), [](const NeighborEntry& a, const NeighborEntry& b) {
            return a.dist != b.dist ? a.dist < b.dist : a.id < b.id;
        });
    }

    KDistanceProfile k_distance_profile(std::size_t query, std::size_t k) const {
        KDistanceProfile p;
        p.id = query;
        p.neighbors = query_knn(query, k);
        p.k_distance = p.neighbors[k - 1].dist;
        return p;
    }

private:
    static constexpr std::size_t kLeafSize = 16;

    struct Node {
        std::int32_t dim = -1;  // -1 marks a leaf
        double split = 0.0;
        std::uint32_t left = 0, right = 0;
        std::uint32_t begin = 0, end = 0;
    };

    const PointSet* data_;
    Backend backend_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> order_;

    void check_query(std::size_t query, std::size_t k) const {
        const std::size_t n = data_->size();
        if (query >= n)
            throw std::invalid_argument("query: unknown point id " + std::to_string(query));
        if (k < 1 || k >= n)
            throw std::invalid_argument("query: k must satisfy 1 <= k <= N-1");
    }

    void brute_query(std::size_t query, std::size_t k, QueryScratch& scratch,
                     NeighborList& out) const {
        const std::size_t n = data_->size();
        const auto q = data_->row(query);
        auto& d2 = scratch.d2;
        d2.resize(n);
        for (std::size_t j = 0; j < n; ++j)
            d2[j] = (j == query) ? kInfinity : squared_distance(q, data_->row(j));
        // k-th smallest squared distance via a bounded max-heap.
        auto& heap = scratch.heap;
        heap.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == query)
                continue;
            if (heap.size() < k) {
                heap.push_back(d2[j]);
                std::push_heap(heap.begin(), heap.end());
            } else if (d2[j] < heap.front()) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = d2[j];
                std::push_heap(heap.begin(), heap.end());
            }
        }
        const double r2 = heap.front();
        out.reserve(k);
        for (std::size_t j = 0; j < n; ++j)
            if (d2[j] <= r2)
                out.push_back({j, std::sqrt(d2[j])});
    }

    void build_tree() {
        const std::size_t n = data_->size();
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), 0u);
        nodes_.reserve(2 * (n / kLeafSize + 1));
        build_node(0, static_cast<std::uint32_t>(n));
    }

    std::uint32_t build_node(std::uint32_t begin, std::uint32_t end) {
        const std::uint32_t idx = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back({});
        const std::size_t m = data_->dims();

        int best_dim = 0;
        double best_spread = -1.0;
        for (std::size_t d = 0; d < m; ++d) {
            double lo = data_->row(order_[begin])[d], hi = lo;
            for (std::uint32_t i = begin + 1; i < end; ++i) {
                const double v = data_->row(order_[i])[d];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > best_spread) {
                best_spread = hi - lo;
                best_dim = static_cast<int>(d);
            }
        }

        if (end - begin <= kLeafSize || best_spread <= 0.0) {
            nodes_[idx].dim = -1;
            nodes_[idx].begin = begin;
            nodes_[idx].end = end;
            return idx;
        }

        const std::uint32_t mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](std::uint32_t a, std::uint32_t b) {
                             const double va = data_->row(a)[best_dim];
                             const double vb = data_->row(b)[best_dim];
                             return va != vb ? va < vb : a < b;
                         });
        const double split = data_->row(order_[mid])[best_dim];
        const std::uint32_t left = build_node(begin, mid);
        const std::uint32_t right = build_node(mid, end);
        nodes_[idx].dim = best_dim;
        nodes_[idx].split = split;
        nodes_[idx].left = left;
        nodes_[idx].right = right;
        return idx;
    }

    // Pass 1: the k-th smallest squared distance to the query (bounded max-heap).
    double tree_kth_squared(std::size_t query, std::size_t k) const {
        std::priority_queue<double> heap;
        tree_search(0, query, k, heap);
        return heap.top();
    }

    void tree_search(std::uint32_t node_idx, std::size_t query, std::size_t k,
                     std::priority_queue<double>& heap) const {
        const Node& node = nodes_[node_idx];
        const auto q = data_->row(query);
        if (node.dim < 0) {
            for (std::uint32_t i = node.begin; i < node.end; ++i) {
                const std::size_t id = order_[i];
                if (id == query)
                    continue;
                const double d2 = squared_distance(q, data_->row(id));
                if (heap.size() < k)
                    heap.push(d2);
                else if (d2 < heap.top()) {
                    heap.pop();
                    heap.push(d2);
                }
            }
            return;
        }
        const double diff = q[node.dim] - node.split;
        const std::uint32_t near = diff <= 0.0 ? node.left : node.right;
        const std::uint32_t far = diff <= 0.0 ? node.right : node.left;
        tree_search(near, query, k, heap);
        if (heap.size() < k || diff * diff <= heap.top())
            tree_search(far, query, k, heap);
    }

    // Pass 2: everything within the (squared) radius, tie-inclusive.
    void tree_collect(std::uint32_t node_idx, std::size_t query, double r2,
                      NeighborList& out) const {
        const Node& node = nodes_[node_idx];
        const auto q = data_->row(query);
        if (node.dim < 0) {
            for (std::uint32_t i = node.begin; i < node.end; ++i) {
                const std::size_t id = order_[i];
                if (id == query)
                    continue;
                const double d2 = squared_distance(q, data_->row(id));
                if (d2 <= r2)
                    out.push_back({id, std::sqrt(d2)});
            }
            return;
        }
        const double diff = q[node.dim] - node.split;
        if (diff <= 0.0 || diff * diff <= r2)
            tree_collect(node.left, query, r2, out);
        if (diff >= 0.0 || diff * diff <= r2)
            tree_collect(node.right, query, r2, out);
    }
};

/// All k-distance profiles for one run, computed once and stored flat
/// (one contiguous entry block plus offsets). The reachability, LRD, LOF
/// and delta passes all read from here.
class KDistanceCache {
public:
    KDistanceCache(const NeighborIndex& index, std::size_t k) : k_(k) {
        const std::size_t n = index.data().size();
        if (k < 1 || k >= n)
            throw std::invalid_argument("KDistanceCache: k must satisfy 1 <= k <= N-1");
        k_distances_.resize(n);
        offsets_.resize(n + 1, 0);
        entries_.reserve(n * (k + 1));
        NeighborIndex::QueryScratch scratch;
        NeighborList list;
        for (std::size_t i = 0; i < n; ++i) {
            index.query_knn_into(i, k, scratch, list);
            k_distances_[i] = list[k - 1].dist;
            entries_.insert(entries_.end(), list.begin(), list.end());
            offsets_[i + 1] = static_cast<std::uint64_t>(entries_.size());
        }
    }

    std::size_t k() const noexcept { return k_; }
    std::size_t size() const noexcept { return k_distances_.size(); }

    double k_distance(std::size_t i) const { return k_distances_[i]; }

    std::span<const NeighborEntry> neighbors(std::size_t i) const {
        return {entries_.data() + offsets_[i], entries_.data() + offsets_[i + 1]};
    }

    std::size_t neighborhood_size(std::size_t i) const {
        return offsets_[i + 1] - offsets_[i];
    }

    /// Materializes a standalone profile (tests, diagnostics).
    KDistanceProfile profile(std::size_t i) const {
        const auto span = neighbors(i);
        return {i, k_distances_[i], NeighborList(span.begin(), span.end())};
    }

private:
    std::size_t k_;
    std::vector<double> k_distances_;
    std::vector<std::uint64_t> offsets_;
    std::vector<NeighborEntry> entries_;
};

}  // namespace plof
