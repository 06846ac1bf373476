#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "dataset.hpp"
#include "random.hpp"

namespace sure {

struct Fold {
    std::vector<Index> train;  ///< ascending
    std::vector<Index> test;   ///< ascending
};

/// k-fold partition of [0, m). When truth is available the folds are
/// stratified: each class is shuffled and dealt round-robin, continuing the
/// deal across classes, so fold sizes still differ by at most one.
inline std::vector<Fold> split_folds(const PLDataset& d, int k, std::uint64_t seed) {
    const Index m = d.rows();
    if (k < 2) throw InvalidArgument("fold count must be at least 2");
    if (k > m) throw InvalidArgument("fold count " + std::to_string(k) + " exceeds number of examples " + std::to_string(m));

    Rng rng(Rng::derive_seed(seed, 4));
    std::vector<Index> sequence;
    sequence.reserve(static_cast<std::size_t>(m));
    if (d.has_truth()) {
        std::map<Label, std::vector<Index>> by_class;
        for (Index i = 0; i < m; ++i) by_class[(*d.truth)[static_cast<std::size_t>(i)]].push_back(i);
        for (auto& [label, members] : by_class) {
            rng.shuffle(std::span(members));
            sequence.insert(sequence.end(), members.begin(), members.end());
        }
    } else {
        for (Index i = 0; i < m; ++i) sequence.push_back(i);
        rng.shuffle(std::span(sequence));
    }

    std::vector<int> fold_of(static_cast<std::size_t>(m));
    for (std::size_t pos = 0; pos < sequence.size(); ++pos)
        fold_of[static_cast<std::size_t>(sequence[pos])] = static_cast<int>(pos % static_cast<std::size_t>(k));

    std::vector<Fold> folds(static_cast<std::size_t>(k));
    for (Index i = 0; i < m; ++i) {
        const int f = fold_of[static_cast<std::size_t>(i)];
        for (int g = 0; g < k; ++g) {
            auto& fold = folds[static_cast<std::size_t>(g)];
            (g == f ? fold.test : fold.train).push_back(i);
        }
    }
    return folds;
}

}  // namespace sure
