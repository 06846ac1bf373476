#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include "dataset.hpp"
#include "random.hpp"

namespace sure {

enum class CorruptionMode {
    random,   ///< r false positives drawn uniformly from the non-truth labels
    coupled,  ///< one false positive: the class's coupled label with probability epsilon
};

/// Controlling parameters of the partial-label corruption protocol.
struct SyntheticSpec {
    double p = 0.0;        ///< proportion of examples made partial
    int r = 1;             ///< false positives per partial example
    double epsilon = 0.0;  ///< coupled-label probability (coupled mode only)
    CorruptionMode mode = CorruptionMode::random;
    std::uint64_t seed = 0;

    void validate(Index num_labels) const {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in [0, 1]");
        if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in [0, 1]");
        if (r < 1) throw InvalidArgument("r must be a positive integer");
        if (r > num_labels - 1)
            throw InvalidArgument("r = " + std::to_string(r) + " exceeds l - 1 = " + std::to_string(num_labels - 1));
        if (mode == CorruptionMode::coupled && r != 1)
            throw InvalidArgument("coupled mode adds exactly one false positive (r must be 1)");
    }
};

/// Label coupled to class `c` in coupled mode (0-based form of c -> (c mod l) + 1).
inline Label coupled_label(Label c, Index num_labels) noexcept {
    return static_cast<Label>((c + 1) % num_labels);
}

/// Number of examples made partial: round(p * m).
inline Index partial_count(double p, Index m) noexcept {
    return static_cast<Index>(std::llround(p * static_cast<double>(m)));
}

/// Turns a clean, singleton-candidate dataset into a partial-label one.
inline PLDataset corrupt(const PLDataset& clean, const SyntheticSpec& spec) {
    if (!clean.has_truth()) throw InvalidArgument("corrupt requires ground-truth labels");
    clean.validate();
    const Index m = clean.rows();
    const Index l = clean.num_labels();
    for (Index i = 0; i < m; ++i)
        if (clean.candidate_count(i) != 1)
            throw InvalidArgument("corrupt requires singleton candidate sets (row " + std::to_string(i) + ")");
    spec.validate(l);

    PLDataset out = clean;
    Rng select_rng(Rng::derive_seed(spec.seed, 1));
    Rng label_rng(Rng::derive_seed(spec.seed, 2));

    std::vector<Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Index{0});
    const Index count = partial_count(spec.p, m);
    select_rng.choose_front(std::span(order), static_cast<std::size_t>(count));
    // Labels are drawn in row order so the output does not depend on selection order.
    std::vector<Index> chosen(order.begin(), order.begin() + count);
    std::sort(chosen.begin(), chosen.end());

    std::vector<Label> pool;
    for (const Index i : chosen) {
        const Label t = (*clean.truth)[static_cast<std::size_t>(i)];
        if (spec.mode == CorruptionMode::random) {
            pool.clear();
            for (Label j = 0; j < l; ++j)
                if (j != t) pool.push_back(j);
            label_rng.choose_front(std::span(pool), static_cast<std::size_t>(spec.r));
            for (int k = 0; k < spec.r; ++k) out.candidates(i, pool[static_cast<std::size_t>(k)]) = 1;
        } else {
            const Label coupled = coupled_label(t, l);
            Label added = coupled;
            // With l == 2 there is no alternative, so the coupled label is always used.
            if (!label_rng.bernoulli(spec.epsilon) && l > 2) {
                pool.clear();
                for (Label j = 0; j < l; ++j)
                    if (j != t && j != coupled) pool.push_back(j);
                added = pool[static_cast<std::size_t>(label_rng.below(pool.size()))];
            }
            out.candidates(i, added) = 1;
        }
    }
    return out;
}

/// Isotropic Gaussian blobs in 2-D with centres evenly spaced on a circle.
/// Produces a clean dataset (singleton candidates, truth = blob index).
struct BlobSpec {
    Index num_points = 200;
    int num_classes = 3;
    double radius = 2.0;  ///< distance of each centre from the origin
    double stddev = 1.0;
    std::uint64_t seed = 0;
};

inline PLDataset make_blobs(const BlobSpec& spec) {
    if (spec.num_points < 1 || spec.num_classes < 1 || !(spec.stddev >= 0.0))
        throw InvalidArgument("invalid blob specification");
    Rng rng(Rng::derive_seed(spec.seed, 3));
    PLDataset d;
    d.features.resize(spec.num_points, 2);
    d.candidates = CandidateMatrix::Zero(spec.num_points, spec.num_classes);
    d.truth.emplace();
    for (Index i = 0; i < spec.num_points; ++i) {
        const Label c = static_cast<Label>(i % spec.num_classes);
        const double angle = 2.0 * std::numbers::pi * c / spec.num_classes;
        d.features(i, 0) = spec.radius * std::cos(angle) + spec.stddev * rng.normal();
        d.features(i, 1) = spec.radius * std::sin(angle) + spec.stddev * rng.normal();
        d.candidates(i, c) = 1;
        d.truth->push_back(c);
    }
    return d;
}

}  // namespace sure
