#pragma once

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <string>

#include "plof/dataset.hpp"

namespace plof {

struct DecisionRule {
    enum class Kind { threshold, top_n };

    Kind kind = Kind::threshold;
    double t = 1.0;
    std::size_t n = 0;

    static DecisionRule threshold(double t) {
        if (t < 0.0)
            throw std::invalid_argument("DecisionRule: threshold must be >= 0");
        DecisionRule r;
        r.kind = Kind::threshold;
        r.t = t;
        return r;
    }

    static DecisionRule top_n(std::size_t n) {
        if (n < 1)
            throw std::invalid_argument("DecisionRule: top_n must be >= 1");
        DecisionRule r;
        r.kind = Kind::top_n;
        r.n = n;
        return r;
    }

    std::string to_string() const {
        if (kind == Kind::threshold) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "threshold:%g", t);
            return buf;
        }
        return "top_n:" + std::to_string(n);
    }

    static DecisionRule parse(const std::string& text) {
        const auto colon = text.find(':');
        const std::string head = text.substr(0, colon);
        const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
        if (head == "threshold")
            return threshold(arg.empty() ? 1.0 : std::stod(arg));
        if (head == "top_n" || head == "top-n") {
            if (arg.empty())
                throw std::invalid_argument("DecisionRule: top_n needs a count");
            return top_n(static_cast<std::size_t>(std::stoul(arg)));
        }
        throw std::invalid_argument("DecisionRule: cannot parse '" + text + "'");
    }
};

/// Scores -> binary predictions. threshold: outlier iff score > t.
/// top_n: the n highest scores, ties at the cutoff broken by ascending id.
inline std::vector<std::uint8_t> binarize(const ScoreVector& scores, const DecisionRule& rule) {
    const std::size_t n = scores.size();
    std::vector<std::uint8_t> pred(n, 0);
    if (rule.kind == DecisionRule::Kind::threshold) {
        for (std::size_t i = 0; i < n; ++i)
            pred[i] = scores[i] > rule.t ? 1 : 0;
        return pred;
    }
    if (rule.n > n)
        throw std::invalid_argument("binarize: top_n exceeds score count");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
    });
    for (std::size_t i = 0; i < rule.n; ++i)
        pred[order[i]] = 1;
    return pred;
}

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::size_t total() const { return tp + fp + tn + fn; }
};

inline ConfusionCounts confusion(const std::vector<std::uint8_t>& pred, const GroundTruth& truth) {
    if (pred.size() != truth.size())
        throw std::invalid_argument("confusion: length mismatch");
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred[i] != 0;
        const bool t = truth.is_outlier(i);
        if (p && t) ++c.tp;
        else if (p && !t) ++c.fp;
        else if (!p && t) ++c.fn;
        else ++c.tn;
    }
    return c;
}

inline double accuracy(const ConfusionCounts& c) {
    return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

inline bool precision_defined(const ConfusionCounts& c) { return c.tp + c.fp > 0; }
inline bool recall_defined(const ConfusionCounts& c) { return c.tp + c.fn > 0; }

// Undefined denominators yield 0; callers surface the *_defined flags.
inline double precision(const ConfusionCounts& c) {
    return precision_defined(c) ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
}

inline double recall(const ConfusionCounts& c) {
    return recall_defined(c) ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
}

/// ROC AUC as the Mann-Whitney statistic via average ranks: the fraction of
/// (outlier, inlier) pairs where the outlier scores strictly higher, plus
/// half the ties. Exactly equals trapezoidal ROC integration.
inline double roc_auc(const ScoreVector& scores, const GroundTruth& truth) {
    const std::size_t n = scores.size();
    if (n != truth.size())
        throw std::invalid_argument("roc_auc: length mismatch");
    const std::size_t n_out = truth.outlier_count();
    const std::size_t n_in = n - n_out;
    if (n_out == 0 || n_in == 0)
        throw std::invalid_argument("roc_auc: both classes required");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double rank_sum_out = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]])
            ++j;
        // 1-based ranks i+1 .. j averaged over the tie group
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t)
            if (truth.is_outlier(order[t]))
                rank_sum_out += avg_rank;
        i = j;
    }
    const double u = rank_sum_out -
                     static_cast<double>(n_out) * (static_cast<double>(n_out) + 1.0) / 2.0;
    return u / (static_cast<double>(n_out) * static_cast<double>(n_in));
}

}  // namespace plof
