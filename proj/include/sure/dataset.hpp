#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace sure {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// 0-based label index. Files and the CLI use 1-based labels.
using Label = int;

/// Candidate indicator matrix Y, one row per example (row-major so rows are contiguous).
using CandidateMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Partial-label dataset: features X (m x n), candidates Y (m x l) and optional ground truth.
struct PLDataset {
    Matrix features;
    CandidateMatrix candidates;
    std::optional<std::vector<Label>> truth;

    Index rows() const noexcept { return features.rows(); }
    Index num_features() const noexcept { return features.cols(); }
    Index num_labels() const noexcept { return candidates.cols(); }
    bool has_truth() const noexcept { return truth.has_value(); }

    std::span<const std::uint8_t> candidate_row(Index i) const noexcept {
        return {candidates.data() + i * candidates.cols(), static_cast<std::size_t>(candidates.cols())};
    }

    std::vector<Label> candidate_set(Index i) const {
        std::vector<Label> set;
        for (Index j = 0; j < num_labels(); ++j)
            if (candidates(i, j)) set.push_back(static_cast<Label>(j));
        return set;
    }

    Index candidate_count(Index i) const noexcept {
        Index c = 0;
        for (Index j = 0; j < num_labels(); ++j) c += candidates(i, j) ? 1 : 0;
        return c;
    }

    /// Y as a real matrix.
    Matrix candidates_real() const { return candidates.cast<double>(); }

    /// Throws InvalidArgument naming the first violated invariant.
    void validate() const {
        if (rows() < 1 || num_features() < 1 || num_labels() < 1)
            throw InvalidArgument("dataset dimensions must be positive");
        if (candidates.rows() != rows())
            throw DimensionError("candidate matrix has " + std::to_string(candidates.rows()) +
                                 " rows, features have " + std::to_string(rows()));
        for (Index i = 0; i < rows(); ++i) {
            bool any = false;
            for (Index j = 0; j < num_labels(); ++j) {
                const auto v = candidates(i, j);
                if (v > 1) throw InvalidArgument("candidate entries must be 0 or 1 (row " + std::to_string(i) + ")");
                any = any || v == 1;
            }
            if (!any) throw InvalidArgument("empty candidate set in row " + std::to_string(i));
        }
        if (!features.allFinite()) throw InvalidArgument("non-finite feature value");
        if (truth) {
            if (static_cast<Index>(truth->size()) != rows())
                throw DimensionError("truth has " + std::to_string(truth->size()) + " entries, expected " +
                                     std::to_string(rows()));
            for (Index i = 0; i < rows(); ++i) {
                const Label t = (*truth)[static_cast<std::size_t>(i)];
                if (t < 0 || t >= num_labels() || candidates(i, t) != 1)
                    throw InvalidArgument("truth label outside candidate set in row " + std::to_string(i));
            }
        }
    }

    /// Rows selected by `index`, in the given order.
    PLDataset subset(std::span<const Index> index) const {
        PLDataset out;
        out.features.resize(static_cast<Index>(index.size()), num_features());
        out.candidates.resize(static_cast<Index>(index.size()), num_labels());
        if (truth) out.truth.emplace();
        for (std::size_t r = 0; r < index.size(); ++r) {
            const Index i = index[r];
            out.features.row(static_cast<Index>(r)) = features.row(i);
            out.candidates.row(static_cast<Index>(r)) = candidates.row(i);
            if (truth) out.truth->push_back((*truth)[static_cast<std::size_t>(i)]);
        }
        return out;
    }

    friend bool operator==(const PLDataset& a, const PLDataset& b) {
        return a.features.rows() == b.features.rows() && a.features.cols() == b.features.cols() &&
               a.candidates.rows() == b.candidates.rows() && a.candidates.cols() == b.candidates.cols() &&
               a.features == b.features && a.candidates == b.candidates && a.truth == b.truth;
    }
};

}  // namespace sure
