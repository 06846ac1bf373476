#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "dataset.hpp"

namespace sure {

/// Solution of one per-example confidence subproblem.
struct QPResult {
    Vector p;               ///< confidence vector on the capped simplex
    double objective = 0;   ///< ||p - q||^2 - lambda * p[anchor]
    Label anchor = -1;      ///< label whose confidence is rewarded (and is maximal in p)
    int iterations = 0;     ///< active-set changes performed by the projection
};

namespace detail {

inline void check_qp_inputs(const Vector& q, std::span<const std::uint8_t> support, double lambda) {
    if (static_cast<std::size_t>(q.size()) != support.size())
        throw DimensionError("output vector has " + std::to_string(q.size()) + " entries, support has " +
                             std::to_string(support.size()));
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be finite and non-negative");
    if (!q.allFinite()) throw InvalidArgument("model outputs must be finite");
    bool any = false;
    for (const auto s : support) {
        if (s > 1) throw InvalidArgument("support entries must be 0 or 1");
        any = any || s == 1;
    }
    if (!any) throw InfeasibleError("empty candidate set: no confidence vector is feasible");
}

}  // namespace detail

/// Euclidean projection of `c` onto
///   { p : p_k <= p_anchor for all k, sum(p) = 1, 0 <= p <= support }.
///
/// Exact: the candidates whose value exceeds the running mean of the anchor
/// group are pooled with the anchor (the active order constraints), then the
/// pooled group and the remaining candidates are projected onto the simplex
/// with the group weighted by its size. `iterations` receives the number of
/// active-set changes.
inline Vector project_anchored(const Vector& c, std::span<const std::uint8_t> support, Label anchor,
                               int* iterations = nullptr) {
    const Index l = c.size();
    if (anchor < 0 || anchor >= l) throw InvalidArgument("anchor label out of range");
    if (support[static_cast<std::size_t>(anchor)] != 1)
        throw InfeasibleError("anchor label is not a candidate: p_k <= p_anchor = 0 cannot sum to 1");

    std::vector<Label> others;
    for (Label k = 0; k < l; ++k)
        if (k != anchor && support[static_cast<std::size_t>(k)]) others.push_back(k);
    std::stable_sort(others.begin(), others.end(), [&](Label a, Label b) { return c(a) > c(b); });

    // Pool the anchor with every candidate above the group's mean.
    double group_sum = c(anchor);
    std::size_t group = 1;
    while (group - 1 < others.size() && c(others[group - 1]) > group_sum / static_cast<double>(group)) {
        group_sum += c(others[group - 1]);
        ++group;
    }
    const double level = group_sum / static_cast<double>(group);

    // Weighted simplex projection over [group, free candidates in descending order].
    double weighted_sum = group_sum;
    double weight = static_cast<double>(group);
    double theta = (weighted_sum - 1.0) / weight;
    std::size_t active = 0;
    for (std::size_t r = group - 1; r < others.size(); ++r) {
        const double v = c(others[r]);
        const double trial = (weighted_sum + v - 1.0) / (weight + 1.0);
        if (!(v > trial)) break;
        weighted_sum += v;
        weight += 1.0;
        theta = trial;
        ++active;
    }

    Vector p = Vector::Zero(l);
    const double top = level - theta;
    p(anchor) = top;
    for (std::size_t r = 0; r < others.size(); ++r) {
        const Label k = others[r];
        p(k) = r + 1 < group ? top : std::max(0.0, c(k) - theta);
    }
    if (iterations) *iterations = static_cast<int>(group - 1 + active);
    return p;
}

/// Anchored subproblem: minimize ||p - q||^2 - lambda p_j over the anchored polytope.
/// Solved as the projection of q + (lambda / 2) e_j.
inline QPResult solve_opi(const Vector& q, std::span<const std::uint8_t> support, double lambda, Label j) {
    detail::check_qp_inputs(q, support, lambda);
    Vector c = q;
    if (j >= 0 && j < q.size()) c(j) += 0.5 * lambda;
    QPResult res;
    res.p = project_anchored(c, support, j, &res.iterations);
    res.anchor = j;
    res.objective = (res.p - q).squaredNorm() - lambda * res.p(j);
    return res;
}

/// Exact minimizer of ||p - q||^2 - lambda ||p||_inf over the capped simplex,
/// taken as the best anchored subproblem. Non-candidate anchors are infeasible
/// and skipped. Ties go to the lowest label.
inline QPResult solve_op_exact(const Vector& q, std::span<const std::uint8_t> support, double lambda) {
    detail::check_qp_inputs(q, support, lambda);
    QPResult best;
    best.objective = std::numeric_limits<double>::infinity();
    int total = 0;
    for (Label j = 0; j < q.size(); ++j) {
        if (!support[static_cast<std::size_t>(j)]) continue;
        QPResult r = solve_opi(q, support, lambda, j);
        total += r.iterations;
        if (r.objective < best.objective) best = std::move(r);
    }
    best.iterations = total;
    return best;
}

/// Candidate with the largest output; ties go to the lowest label.
inline Label surrogate_anchor(const Vector& q, std::span<const std::uint8_t> support) {
    Label best = -1;
    for (Label j = 0; j < q.size(); ++j)
        if (support[static_cast<std::size_t>(j)] && (best < 0 || q(j) > q(best))) best = j;
    return best;
}

/// Surrogate update: the anchored subproblem at the candidate with maximal output.
inline QPResult solve_ops(const Vector& q, std::span<const std::uint8_t> support, double lambda) {
    detail::check_qp_inputs(q, support, lambda);
    return solve_opi(q, support, lambda, surrogate_anchor(q, support));
}

/// Row-wise surrogate update of the confidence matrix.
inline Matrix update_confidence_matrix(const Matrix& Q, const CandidateMatrix& Y, double lambda) {
    if (Q.rows() != Y.rows() || Q.cols() != Y.cols())
        throw DimensionError("output matrix is " + std::to_string(Q.rows()) + "x" + std::to_string(Q.cols()) +
                             ", candidate matrix is " + std::to_string(Y.rows()) + "x" + std::to_string(Y.cols()));
    const auto l = static_cast<std::size_t>(Y.cols());
    Matrix P(Q.rows(), Q.cols());
    Vector q(Q.cols());
    for (Index i = 0; i < Q.rows(); ++i) {
        q = Q.row(i).transpose();
        const std::span<const std::uint8_t> y(Y.data() + i * Y.cols(), l);
        try {
            P.row(i) = solve_ops(q, y, lambda).p.transpose();
        } catch (const InfeasibleError& e) {
            throw InfeasibleError("row " + std::to_string(i) + ": " + e.what());
        }
    }
    return P;
}

}  // namespace sure
