#pragma once

#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "dataset.hpp"

namespace sure {

inline void check_label_pair(std::span<const Label> pred, std::span<const Label> truth) {
    if (pred.size() != truth.size())
        throw DimensionError("prediction count " + std::to_string(pred.size()) + " differs from truth count " +
                             std::to_string(truth.size()));
    if (pred.empty()) throw InvalidArgument("cannot score an empty prediction set");
}

/// Fraction of exact matches.
inline double accuracy(std::span<const Label> pred, std::span<const Label> truth) {
    check_label_pair(pred, truth);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == truth[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(pred.size());
}

/// Maps labels to ordinal values (e.g. ages) for MAE-style scoring.
using LabelValues = std::map<Label, double>;

/// Fraction of examples with |value(pred) - value(truth)| <= k. Without a
/// mapping, labels map to themselves.
inline double mae_at_k(std::span<const Label> pred, std::span<const Label> truth, const LabelValues* values, double k) {
    check_label_pair(pred, truth);
    if (!(k >= 0.0)) throw InvalidArgument("MAE threshold must be non-negative");
    auto value = [&](Label y) {
        if (!values) return static_cast<double>(y);
        const auto it = values->find(y);
        if (it == values->end()) throw InvalidArgument("no value mapped for label " + std::to_string(y + 1));
        return it->second;
    };
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hits += std::abs(value(pred[i]) - value(truth[i])) <= k ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(pred.size());
}

inline double mean_of(std::span<const double> xs) {
    if (xs.empty()) throw InvalidArgument("mean of empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

/// Sample standard deviation (n - 1 denominator); 0 for a single value.
inline double sample_std(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double mu = mean_of(xs);
    double ss = 0.0;
    for (const double x : xs) ss += (x - mu) * (x - mu);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace sure
