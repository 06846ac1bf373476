#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "dataset.hpp"

namespace sure {

struct KnnConfig {
    int k = 5;
};

/// Candidate-label vote counts over the k nearest training instances of
/// `query` (Euclidean; equal distances go to the lower training index).
inline std::vector<int> plknn_votes(const PLDataset& train, const Eigen::Ref<const Eigen::RowVectorXd>& query,
                                    const KnnConfig& cfg) {
    const Index m = train.rows();
    std::vector<std::pair<double, Index>> dist(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) dist[static_cast<std::size_t>(i)] = {(train.features.row(i) - query).squaredNorm(), i};
    const auto k = static_cast<std::size_t>(cfg.k);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    std::vector<int> votes(static_cast<std::size_t>(train.num_labels()), 0);
    for (std::size_t r = 0; r < k; ++r) {
        const Index i = dist[r].second;
        for (Index j = 0; j < train.num_labels(); ++j) votes[static_cast<std::size_t>(j)] += train.candidates(i, j);
    }
    return votes;
}

/// Averaging k-NN: predicts the label contained in the most neighbour candidate sets.
inline std::vector<Label> plknn_predict(const PLDataset& train, const Matrix& X_query, const KnnConfig& cfg) {
    if (train.rows() < 1) throw InvalidArgument("empty training set");
    if (cfg.k < 1 || cfg.k >= train.rows())
        throw InvalidArgument("k = " + std::to_string(cfg.k) + " must satisfy 1 <= k < m = " + std::to_string(train.rows()));
    if (X_query.cols() != train.num_features())
        throw DimensionError("query has " + std::to_string(X_query.cols()) + " features, training set has " +
                             std::to_string(train.num_features()));
    std::vector<Label> out;
    out.reserve(static_cast<std::size_t>(X_query.rows()));
    for (Index q = 0; q < X_query.rows(); ++q) {
        const auto votes = plknn_votes(train, X_query.row(q), cfg);
        out.push_back(static_cast<Label>(std::max_element(votes.begin(), votes.end()) - votes.begin()));
    }
    return out;
}

}  // namespace sure
