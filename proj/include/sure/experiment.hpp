#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "folds.hpp"
#include "kernel.hpp"
#include "metrics.hpp"
#include "parallel.hpp"
#include "plknn.hpp"
#include "ridge.hpp"
#include "sure.hpp"

namespace sure {

enum class Algorithm { sure, plknn };

inline const char* to_string(Algorithm a) noexcept { return a == Algorithm::sure ? "sure" : "plknn"; }

/// Hyperparameter values searched by inner cross-validation.
struct ParamGrid {
    std::vector<double> lambdas;
    std::vector<double> betas;
    std::vector<int> ks;  ///< PLKNN neighbour counts
    int inner_folds = 5;
};

/// Default search values for both SURE tradeoff parameters.
inline std::vector<double> default_tradeoff_grid() { return {0.001, 0.01, 0.05, 0.1, 0.3, 0.5, 1.0}; }

/// What to run inside each fold. Without a grid the fixed settings are used;
/// with a grid, settings are chosen per fold by inner CV on the training split.
struct AlgoSpec {
    Algorithm algorithm = Algorithm::sure;
    TrainConfig sure;
    KnnConfig knn;
    std::optional<ParamGrid> grid;
    unsigned threads = 0;
};

struct GridPoint {
    double lambda = 0.0;
    double beta = 0.0;
    int k = 0;
    double mean_accuracy = 0.0;
};

struct GridSearchResult {
    GridPoint best;
    std::vector<GridPoint> log;  ///< every evaluated point, in evaluation order
};

struct FoldOutcome {
    double accuracy = 0.0;
    GridPoint selected;  ///< settings used for this fold
    std::optional<TrainTrace> trace;
};

struct ExperimentReport {
    Algorithm algorithm = Algorithm::sure;
    int folds = 0;
    std::uint64_t seed = 0;
    std::vector<double> per_fold_accuracy;
    double mean = 0.0;
    double std = 0.0;
    std::vector<FoldOutcome> fold_details;
};

namespace detail {

inline std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline void require_truth(const PLDataset& d) {
    if (!d.has_truth()) throw InvalidArgument("evaluation requires ground-truth labels");
}

/// Training set statistics shared by every SURE setting on one split.
struct KernelSplit {
    double sigma = 1.0;
    Matrix K;       ///< train x train
    Matrix K_test;  ///< test x train
};

inline KernelSplit prepare_split(const PLDataset& train, const Matrix& X_test, const TrainConfig& cfg) {
    KernelSplit s;
    s.sigma = resolve_sigma(train.features, KernelConfig{cfg.sigma_override, cfg.sigma_cap}, cfg.seed);
    s.K = gram_matrix(train.features, s.sigma);
    s.K_test = gram_matrix(X_test, train.features, s.sigma);
    return s;
}

inline std::vector<Label> predict_with_gram(const Matrix& K_test, const KernelModel& model) {
    return argmax_rows((K_test * model.A).rowwise() + model.b.transpose());
}

}  // namespace detail

/// Picks (lambda, beta) for SURE, or k for PLKNN, by inner k-fold CV mean
/// accuracy on `train`. Ties go to the smaller lambda, then the smaller beta
/// (smaller k for PLKNN).
inline GridSearchResult grid_search(const PLDataset& train, Algorithm algorithm, const ParamGrid& grid,
                                    const TrainConfig& base, std::uint64_t seed, unsigned threads = 0) {
    detail::require_truth(train);
    const auto folds = split_folds(train, grid.inner_folds, Rng::derive_seed(seed, 20));
    const auto nf = folds.size();

    GridSearchResult result;
    if (algorithm == Algorithm::plknn) {
        const auto ks = detail::sorted_unique(grid.ks);
        if (ks.empty()) throw InvalidArgument("empty k grid");
        std::vector<std::vector<double>> acc(ks.size(), std::vector<double>(nf));
        parallel_for(nf, [&](std::size_t f) {
            const PLDataset tr = train.subset(folds[f].train);
            const PLDataset te = train.subset(folds[f].test);
            for (std::size_t a = 0; a < ks.size(); ++a)
                acc[a][f] = accuracy(plknn_predict(tr, te.features, KnnConfig{ks[a]}), *te.truth);
        }, threads);
        for (std::size_t a = 0; a < ks.size(); ++a) {
            GridPoint gp;
            gp.k = ks[a];
            gp.mean_accuracy = mean_of(acc[a]);
            result.log.push_back(gp);
        }
    } else {
        const auto lambdas = detail::sorted_unique(grid.lambdas);
        const auto betas = detail::sorted_unique(grid.betas);
        if (lambdas.empty() || betas.empty()) throw InvalidArgument("empty lambda or beta grid");
        // acc[lambda][beta][fold]
        std::vector<std::vector<std::vector<double>>> acc(
            lambdas.size(), std::vector<std::vector<double>>(betas.size(), std::vector<double>(nf)));
        parallel_for(nf, [&](std::size_t f) {
            const PLDataset tr = train.subset(folds[f].train);
            const PLDataset te = train.subset(folds[f].test);
            TrainConfig cfg = base;
            cfg.seed = Rng::derive_seed(seed, 30 + f);
            const auto split = detail::prepare_split(tr, te.features, cfg);
            for (std::size_t b = 0; b < betas.size(); ++b) {
                cfg.beta = betas[b];
                const KernelRidgeSolver solver(split.K, cfg.beta);
                for (std::size_t a = 0; a < lambdas.size(); ++a) {
                    cfg.lambda = lambdas[a];
                    const auto out = train_with_solver(tr, solver, split.sigma, cfg);
                    acc[a][b][f] = accuracy(detail::predict_with_gram(split.K_test, out.model), *te.truth);
                }
            }
        }, threads);
        for (std::size_t a = 0; a < lambdas.size(); ++a)
            for (std::size_t b = 0; b < betas.size(); ++b) {
                GridPoint gp;
                gp.lambda = lambdas[a];
                gp.beta = betas[b];
                gp.mean_accuracy = mean_of(acc[a][b]);
                result.log.push_back(gp);
            }
    }
    result.best = result.log.front();
    for (const auto& gp : result.log)
        if (gp.mean_accuracy > result.best.mean_accuracy) result.best = gp;
    return result;
}

/// Trains on `train`, predicts `test`, and records the accuracy.
inline FoldOutcome evaluate_fold(const PLDataset& train, const PLDataset& test, const AlgoSpec& spec,
                                 std::uint64_t seed) {
    detail::require_truth(test);
    FoldOutcome out;
    if (spec.algorithm == Algorithm::plknn) {
        KnnConfig knn = spec.knn;
        if (spec.grid) {
            knn.k = grid_search(train, Algorithm::plknn, *spec.grid, spec.sure, Rng::derive_seed(seed, 40), 1).best.k;
        }
        out.selected.k = knn.k;
        out.accuracy = accuracy(plknn_predict(train, test.features, knn), *test.truth);
        return out;
    }

    TrainConfig cfg = spec.sure;
    cfg.seed = Rng::derive_seed(seed, 41);
    if (spec.grid) {
        const auto best = grid_search(train, Algorithm::sure, *spec.grid, cfg, Rng::derive_seed(seed, 40), 1).best;
        cfg.lambda = best.lambda;
        cfg.beta = best.beta;
    }
    out.selected.lambda = cfg.lambda;
    out.selected.beta = cfg.beta;
    const auto split = detail::prepare_split(train, test.features, cfg);
    const KernelRidgeSolver solver(split.K, cfg.beta);
    const auto trained = train_with_solver(train, solver, split.sigma, cfg);
    out.accuracy = accuracy(detail::predict_with_gram(split.K_test, trained.model), *test.truth);
    out.trace = trained.trace;
    return out;
}

/// k-fold cross-validation. Test examples are scored against ground truth
/// only; their candidate sets are never used.
inline ExperimentReport cross_validate(const PLDataset& d, const AlgoSpec& spec, int folds, std::uint64_t seed) {
    d.validate();
    detail::require_truth(d);
    const auto splits = split_folds(d, folds, Rng::derive_seed(seed, 10));
    ExperimentReport report;
    report.algorithm = spec.algorithm;
    report.folds = folds;
    report.seed = seed;
    report.fold_details.resize(splits.size());
    parallel_for(splits.size(), [&](std::size_t f) {
        report.fold_details[f] = evaluate_fold(d.subset(splits[f].train), d.subset(splits[f].test), spec,
                                               Rng::derive_seed(seed, 100 + f));
    }, spec.threads);
    for (const auto& fo : report.fold_details) report.per_fold_accuracy.push_back(fo.accuracy);
    report.mean = mean_of(report.per_fold_accuracy);
    report.std = sample_std(report.per_fold_accuracy);
    return report;
}

}  // namespace sure
