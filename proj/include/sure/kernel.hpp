#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "dataset.hpp"
#include "random.hpp"

namespace sure {

/// Gaussian kernel settings. Without `sigma` the bandwidth is the mean
/// pairwise Euclidean distance of the training instances.
struct KernelConfig {
    std::optional<double> sigma;
    std::int64_t subsample_pairs = 4'500'000;
};

/// Mean Euclidean distance over unordered pairs of distinct rows. Exact when
/// the pair count is at most `cap`, otherwise averaged over `cap` seeded
/// uniform pair draws.
inline double mean_pairwise_distance(const Matrix& X, std::int64_t cap, std::uint64_t seed) {
    const Index m = X.rows();
    if (m < 2) throw InvalidArgument("bandwidth heuristic needs at least two instances");
    if (cap < 1) throw InvalidArgument("pair cap must be positive");
    const auto pairs = static_cast<std::int64_t>(m) * (m - 1) / 2;

    double sum = 0.0;
    std::int64_t count = 0;
    if (pairs <= cap) {
        for (Index i = 0; i < m; ++i)
            for (Index j = i + 1; j < m; ++j) sum += (X.row(i) - X.row(j)).norm();
        count = pairs;
    } else {
        Rng rng(Rng::derive_seed(seed, 5));
        const auto um = static_cast<std::uint64_t>(m);
        for (std::int64_t s = 0; s < cap; ++s) {
            const auto i = static_cast<Index>(rng.below(um));
            auto j = static_cast<Index>(rng.below(um - 1));
            if (j >= i) ++j;
            sum += (X.row(i) - X.row(j)).norm();
        }
        count = cap;
    }
    const double mean = sum / static_cast<double>(count);
    if (!(mean > 0.0)) throw InvalidArgument("degenerate bandwidth (zero mean distance)");
    return mean;
}

/// K(i, j) = exp(-||r_i - c_j||^2 / (2 sigma^2)).
inline Matrix gram_matrix(const Matrix& rows, const Matrix& cols, double sigma) {
    if (!(sigma > 0.0)) throw InvalidArgument("kernel bandwidth must be positive");
    if (rows.cols() != cols.cols())
        throw DimensionError("kernel inputs have " + std::to_string(rows.cols()) + " and " +
                             std::to_string(cols.cols()) + " features");
    const double scale = -1.0 / (2.0 * sigma * sigma);
    Matrix K(rows.rows(), cols.rows());
    for (Index j = 0; j < cols.rows(); ++j)
        for (Index i = 0; i < rows.rows(); ++i)
            K(i, j) = std::exp(scale * (rows.row(i) - cols.row(j)).squaredNorm());
    return K;
}

/// Square Gram matrix of one instance set; symmetric by construction.
inline Matrix gram_matrix(const Matrix& X, double sigma) {
    if (!(sigma > 0.0)) throw InvalidArgument("kernel bandwidth must be positive");
    const double scale = -1.0 / (2.0 * sigma * sigma);
    const Index m = X.rows();
    Matrix K(m, m);
    for (Index j = 0; j < m; ++j) {
        K(j, j) = 1.0;
        for (Index i = j + 1; i < m; ++i) K(i, j) = K(j, i) = std::exp(scale * (X.row(i) - X.row(j)).squaredNorm());
    }
    return K;
}

/// Resolves the bandwidth for a training set.
inline double resolve_sigma(const Matrix& X, const KernelConfig& cfg, std::uint64_t seed) {
    if (cfg.sigma) {
        if (!(*cfg.sigma > 0.0)) throw InvalidArgument("sigma must be positive");
        return *cfg.sigma;
    }
    // A single instance has no pairwise distances; its Gram matrix is [1] for any sigma.
    if (X.rows() < 2) return 1.0;
    return mean_pairwise_distance(X, cfg.subsample_pairs, seed);
}

}  // namespace sure
