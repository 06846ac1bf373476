#include <gtest/gtest.h>

#include <sure/plknn.hpp>
#include <sure/random.hpp>

#include <numeric>

namespace {

sure::PLDataset random_pl(sure::Index m, sure::Index n, sure::Index l, std::uint64_t seed) {
    sure::Rng rng(seed);
    sure::PLDataset d;
    d.features.resize(m, n);
    d.candidates = sure::CandidateMatrix::Zero(m, l);
    for (sure::Index i = 0; i < m; ++i) {
        for (sure::Index k = 0; k < n; ++k) d.features(i, k) = rng.normal();
        for (sure::Index j = 0; j < l; ++j) d.candidates(i, j) = rng.bernoulli(0.4);
        d.candidates(i, static_cast<sure::Index>(rng.below(static_cast<std::uint64_t>(l)))) = 1;
    }
    return d;
}

/// Full sort with index tie-breaking, then literal counting.
sure::Label oracle_predict(const sure::PLDataset& d, const sure::Vector& x, int k) {
    std::vector<sure::Index> idx(static_cast<std::size_t>(d.rows()));
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> dist(idx.size());
    for (auto i : idx) {
        double s = 0;
        for (sure::Index c = 0; c < d.num_features(); ++c) s += (d.features(i, c) - x(c)) * (d.features(i, c) - x(c));
        dist[static_cast<std::size_t>(i)] = s;
    }
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)]; });
    sure::Label best = 0;
    int best_votes = -1;
    for (sure::Index j = 0; j < d.num_labels(); ++j) {
        int v = 0;
        for (int r = 0; r < k; ++r) v += d.candidates(idx[static_cast<std::size_t>(r)], j);
        if (v > best_votes) {
            best_votes = v;
            best = static_cast<sure::Label>(j);
        }
    }
    return best;
}

}  // namespace

TEST(Plknn, SingleNeighbourSingletonCandidates) {
    sure::PLDataset d;
    d.features.resize(3, 1);
    d.features << 0.0, 5.0, 10.0;
    d.candidates = sure::CandidateMatrix::Zero(3, 3);
    d.candidates(0, 2) = d.candidates(1, 0) = d.candidates(2, 1) = 1;
    sure::Matrix q(3, 1);
    q << 0.4, 5.6, 9.0;
    EXPECT_EQ(sure::plknn_predict(d, q, {1}), (std::vector<sure::Label>{2, 0, 1}));
}

TEST(Plknn, MajorityOfCandidateSets) {
    sure::PLDataset d;
    d.features = sure::Matrix::Zero(4, 1);
    d.features(3, 0) = 100;
    d.candidates = sure::CandidateMatrix::Zero(4, 3);
    d.candidates(0, 0) = d.candidates(0, 1) = 1;
    d.candidates(1, 1) = d.candidates(1, 2) = 1;
    d.candidates(2, 1) = 1;
    d.candidates(3, 0) = 1;
    EXPECT_EQ(sure::plknn_predict(d, sure::Matrix::Zero(1, 1), {3}).front(), 1);
}

TEST(Plknn, MatchesExhaustiveSortOracle) {
    const auto d = random_pl(30, 3, 5, 1);
    sure::Rng rng(2);
    for (int t = 0; t < 50; ++t) {
        sure::Vector x(3);
        for (int c = 0; c < 3; ++c) x(c) = 1.5 * rng.normal();
        for (int k : {1, 3, 7, 29}) {
            const auto pred = sure::plknn_predict(d, x.transpose(), {k});
            EXPECT_EQ(pred.front(), oracle_predict(d, x, k));
        }
    }
}

TEST(Plknn, VotesSumToCandidateCounts) {
    const auto d = random_pl(25, 2, 4, 3);
    const sure::Vector x = sure::Vector::Zero(2);
    const auto votes = sure::plknn_votes(d, x.transpose(), {25});
    int total = 0;
    for (sure::Index i = 0; i < d.rows(); ++i) total += static_cast<int>(d.candidate_count(i));
    EXPECT_EQ(std::accumulate(votes.begin(), votes.end(), 0), total);
}

TEST(Plknn, TrainingOrderDoesNotMatter) {
    const auto d = random_pl(40, 2, 4, 4);
    std::vector<sure::Index> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    sure::Rng rng(5);
    rng.shuffle(std::span(perm));
    const auto shuffled = d.subset(perm);
    const auto q = random_pl(30, 2, 4, 6).features;  // continuous features: no distance ties
    EXPECT_EQ(sure::plknn_predict(d, q, {5}), sure::plknn_predict(shuffled, q, {5}));
}

TEST(Plknn, Errors) {
    const auto d = random_pl(5, 2, 3, 7);
    EXPECT_THROW(sure::plknn_predict(d, sure::Matrix::Zero(1, 2), {0}), sure::InvalidArgument);
    EXPECT_THROW(sure::plknn_predict(d, sure::Matrix::Zero(1, 2), {5}), sure::InvalidArgument);
    EXPECT_THROW(sure::plknn_predict(d, sure::Matrix::Zero(1, 3), {2}), sure::DimensionError);
}
