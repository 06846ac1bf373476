#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "confidence_qp.hpp"
#include "dataset.hpp"
#include "kernel.hpp"
#include "ridge.hpp"

namespace sure {

enum class InitMode {
    normalized,  ///< p_ij = y_ij / |S_i|
    literal,     ///< P = Y, unnormalized candidate indicators
};

struct TrainConfig {
    double lambda = 0.3;  ///< weight of the infinity-norm reward
    double beta = 0.05;   ///< ridge regularizer
    int max_iter = 100;
    double tol = 1e-3;    ///< stop once ||P_new - P_old||_F <= tol
    InitMode init = InitMode::normalized;
    std::optional<double> sigma_override;
    std::int64_t sigma_cap = 4'500'000;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be finite and non-negative");
        if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be positive");
        if (max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
        if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
        if (sigma_override && !(*sigma_override > 0.0)) throw InvalidArgument("sigma must be positive");
    }
};

/// Frobenius change of P per iteration.
struct TrainTrace {
    std::vector<double> delta_p;
    int iterations_run = 0;
    bool converged = false;
};

template <typename Model>
struct TrainOutcome {
    Model model;
    Matrix confidences;  ///< final P
    TrainTrace trace;
};

inline Matrix initial_confidences(const CandidateMatrix& Y, InitMode init) {
    Matrix P = Y.cast<double>();
    if (init == InitMode::normalized) P = P.array().colwise() / P.rowwise().sum().array();
    return P;
}

namespace detail {

/// Alternates `fit_step(P) -> Q` with the surrogate confidence update.
template <typename FitStep>
TrainTrace alternate(const CandidateMatrix& Y, Matrix& P, const TrainConfig& cfg, FitStep&& fit_step) {
    TrainTrace trace;
    for (int t = 0; t < cfg.max_iter; ++t) {
        const Matrix Q = fit_step(P);
        Matrix next = update_confidence_matrix(Q, Y, cfg.lambda);
        const double delta = (next - P).norm();
        P = std::move(next);
        trace.delta_p.push_back(delta);
        ++trace.iterations_run;
        if (delta <= cfg.tol) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

}  // namespace detail

/// Runs the alternating loop with a prepared Gram matrix / ridge factorization.
/// `solver` must be built on gram_matrix(d.features, sigma) with cfg.beta.
inline TrainOutcome<KernelModel> train_with_solver(const PLDataset& d, const KernelRidgeSolver& solver, double sigma,
                                                   const TrainConfig& cfg) {
    cfg.validate();
    if (solver.size() != d.rows()) throw DimensionError("solver size does not match the dataset");
    TrainOutcome<KernelModel> out;
    out.confidences = initial_confidences(d.candidates, cfg.init);
    KernelFit fit;
    out.trace = detail::alternate(d.candidates, out.confidences, cfg, [&](const Matrix& P) {
        fit = solver.solve(P);
        return kernel_outputs(solver.gram(), fit);
    });
    out.model = KernelModel{d.features, std::move(fit.A), std::move(fit.b), sigma};
    return out;
}

/// Kernel SURE training: Gram matrix, then alternate ridge fits and confidence updates.
inline TrainOutcome<KernelModel> train(const PLDataset& d, const TrainConfig& cfg) {
    d.validate();
    cfg.validate();
    const double sigma = resolve_sigma(d.features, KernelConfig{cfg.sigma_override, cfg.sigma_cap}, cfg.seed);
    const Matrix K = gram_matrix(d.features, sigma);
    const KernelRidgeSolver solver(K, cfg.beta);
    return train_with_solver(d, solver, sigma, cfg);
}

/// Same loop with the linear model f(x) = W^T x + b.
inline TrainOutcome<LinearModel> train_linear(const PLDataset& d, const TrainConfig& cfg) {
    d.validate();
    cfg.validate();
    TrainOutcome<LinearModel> out;
    out.confidences = initial_confidences(d.candidates, cfg.init);
    out.trace = detail::alternate(d.candidates, out.confidences, cfg, [&](const Matrix& P) {
        out.model = fit_linear(d.features, P, cfg.beta);
        return linear_outputs(out.model, d.features);
    });
    return out;
}

/// Row-wise argmax; ties go to the lowest label.
inline std::vector<Label> argmax_rows(const Matrix& scores) {
    std::vector<Label> out(static_cast<std::size_t>(scores.rows()));
    for (Index i = 0; i < scores.rows(); ++i) {
        Label best = 0;
        for (Index j = 1; j < scores.cols(); ++j)
            if (scores(i, j) > scores(i, best)) best = static_cast<Label>(j);
        out[static_cast<std::size_t>(i)] = best;
    }
    return out;
}

inline Matrix score_outputs(const KernelModel& model, const Matrix& X_query) { return model_outputs(model, X_query); }

inline std::vector<Label> predict(const KernelModel& model, const Matrix& X_query) {
    return argmax_rows(model_outputs(model, X_query));
}

inline std::vector<Label> predict(const LinearModel& model, const Matrix& X_query) {
    return argmax_rows(linear_outputs(model, X_query));
}

}  // namespace sure
