#pragma once

#include <Eigen/LU>

#include <cmath>
#include <limits>

#include "dataset.hpp"
#include "kernel.hpp"

namespace sure {

/// f(x) = W^T x + b.
struct LinearModel {
    Matrix W;  ///< n x l
    Vector b;  ///< l
};

/// f(x) = sum_i A(i, :) k(x, x_i) + b, Gaussian kernel of bandwidth sigma.
struct KernelModel {
    Matrix train_X;  ///< m x n
    Matrix A;        ///< m x l
    Vector b;        ///< l
    double sigma = 1.0;

    Index num_labels() const noexcept { return A.cols(); }
    Index num_features() const noexcept { return train_X.cols(); }
};

/// Combination weights and bias from one kernel ridge solve.
struct KernelFit {
    Matrix A;
    Vector b;
};

namespace detail {

// Below this reciprocal condition estimate the system is treated as singular.
inline constexpr double kSingularRcond = 64 * std::numeric_limits<double>::epsilon();

inline Eigen::PartialPivLU<Matrix> factorize_checked(const Matrix& S, const char* what) {
    Eigen::PartialPivLU<Matrix> lu(S);
    const double rc = lu.rcond();
    if (!(rc > kSingularRcond) || !std::isfinite(rc)) throw SingularSystemError(std::string(what) + " is singular", rc);
    return lu;
}

inline void check_targets(Index m, const Matrix& P, double beta) {
    if (!(beta > 0.0)) throw InvalidArgument("beta must be positive");
    if (m < 1) throw InvalidArgument("need at least one training example");
    if (P.rows() != m) throw DimensionError("target matrix has " + std::to_string(P.rows()) + " rows, expected " + std::to_string(m));
}

}  // namespace detail

/// Minimizes ||XW + 1b^T - P||_F^2 + beta ||W||_F^2 in closed form.
inline LinearModel fit_linear(const Matrix& X, const Matrix& P, double beta) {
    const Index m = X.rows();
    detail::check_targets(m, P, beta);
    const double inv_m = 1.0 / static_cast<double>(m);
    const Vector x_sum = X.colwise().sum().transpose();  // X^T 1
    const Vector p_sum = P.colwise().sum().transpose();  // P^T 1

    Matrix S = X.transpose() * X - inv_m * x_sum * x_sum.transpose();
    S.diagonal().array() += beta;
    const Matrix rhs = X.transpose() * P - inv_m * x_sum * p_sum.transpose();

    LinearModel model;
    model.W = detail::factorize_checked(S, "linear ridge system").solve(rhs);
    model.b = inv_m * (p_sum - model.W.transpose() * x_sum);
    return model;
}

inline Matrix linear_outputs(const LinearModel& model, const Matrix& X) {
    if (X.cols() != model.W.rows())
        throw DimensionError("query has " + std::to_string(X.cols()) + " features, model expects " + std::to_string(model.W.rows()));
    return (X * model.W).rowwise() + model.b.transpose();
}

/// Factorization of K + beta I - 11^T K / m, reusable across target matrices
/// for a fixed Gram matrix and beta.
class KernelRidgeSolver {
public:
    KernelRidgeSolver(const Matrix& K, double beta) : K_(&K), beta_(beta) {
        const Index m = K.rows();
        if (K.cols() != m) throw DimensionError("Gram matrix must be square");
        detail::check_targets(m, Matrix(m, 0), beta);
        const double scale = std::max(1.0, K.cwiseAbs().maxCoeff());
        if ((K - K.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
            throw InvalidArgument("Gram matrix is not symmetric");
        col_mean_ = K.colwise().mean().transpose();  // (1^T K / m)^T
        Matrix S = K;
        S.rowwise() -= col_mean_.transpose();
        S.diagonal().array() += beta;
        lu_ = detail::factorize_checked(S, "kernel ridge system");
    }

    Index size() const noexcept { return K_->rows(); }
    double beta() const noexcept { return beta_; }
    const Matrix& gram() const noexcept { return *K_; }

    KernelFit solve(const Matrix& P) const {
        if (P.rows() != size()) throw DimensionError("target matrix row count does not match the Gram matrix");
        const Vector p_mean = P.colwise().mean().transpose();
        Matrix rhs = P;
        rhs.rowwise() -= p_mean.transpose();
        KernelFit fit;
        fit.A = lu_.solve(rhs);
        // b = (P^T 1 - A^T K^T 1) / m
        fit.b = p_mean - fit.A.transpose() * col_mean_;
        return fit;
    }

private:
    const Matrix* K_;
    double beta_;
    Vector col_mean_;
    Eigen::PartialPivLU<Matrix> lu_;
};

/// Minimizes ||KA + 1b^T - P||_F^2 + beta tr(A^T K A) in closed form.
inline KernelFit fit_kernel(const Matrix& K, const Matrix& P, double beta) {
    return KernelRidgeSolver(K, beta).solve(P);
}

/// Q = K A + 1 b^T.
inline Matrix kernel_outputs(const Matrix& K, const KernelFit& fit) {
    return (K * fit.A).rowwise() + fit.b.transpose();
}

inline Matrix model_outputs(const KernelModel& model, const Matrix& X_query) {
    if (X_query.cols() != model.train_X.cols())
        throw DimensionError("query has " + std::to_string(X_query.cols()) + " features, model expects " +
                             std::to_string(model.train_X.cols()));
    if (model.A.rows() != model.train_X.rows()) throw DimensionError("model weights do not match training instances");
    const Matrix Kq = gram_matrix(X_query, model.train_X, model.sigma);
    return (Kq * model.A).rowwise() + model.b.transpose();
}

}  // namespace sure
