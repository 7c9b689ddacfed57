#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "snnmoo/moo/operators.hpp"

using namespace snnmoo;
using namespace snnmoo::moo;

namespace {

Individual member(std::size_t rank, std::size_t niche) {
    Individual ind;
    ind.rank = rank;
    ind.niche = niche;
    return ind;
}

}  // namespace

TEST(Tournament, LowerRankWins) {
    const std::vector<Individual> pop{member(0, 0), member(2, 1)};
    const std::vector<std::size_t> counts{1, 1};
    Rng rng(1);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(tournament_select(pop, counts, rng), 0u);
}

TEST(Tournament, LessCrowdedNicheWinsTies) {
    const std::vector<Individual> pop{member(0, 0), member(0, 1)};
    const std::vector<std::size_t> counts{5, 1};
    Rng rng(2);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(tournament_select(pop, counts, rng), 1u);
}

TEST(Tournament, WinFrequenciesMatchPairEnumeration) {
    std::vector<Individual> pop{member(0, 0), member(0, 0), member(0, 1), member(1, 2),
                                member(1, 2), member(2, 3), member(0, 4), member(1, 1)};
    std::vector<std::size_t> counts(5, 0);
    for (const auto& p : pop) counts[p.niche]++;
    const std::size_t n = pop.size();

    // Exact win probability: uniform over ordered distinct pairs, the coin
    // splitting full ties evenly.
    std::vector<double> exact(n, 0.0);
    const double pair_p = 1.0 / static_cast<double>(n * (n - 1));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            const auto& x = pop[a];
            const auto& y = pop[b];
            if (x.rank != y.rank) {
                exact[x.rank < y.rank ? a : b] += pair_p;
            } else if (counts[x.niche] != counts[y.niche]) {
                exact[counts[x.niche] < counts[y.niche] ? a : b] += pair_p;
            } else {
                exact[a] += pair_p / 2;
                exact[b] += pair_p / 2;
            }
        }
    }
    Rng rng(3);
    const int trials = 100000;
    std::vector<int> wins(n, 0);
    for (int t = 0; t < trials; ++t) wins[tournament_select(pop, counts, rng)]++;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = exact[i];
        const double sigma = std::sqrt(p * (1 - p) / trials);
        EXPECT_NEAR(static_cast<double>(wins[i]) / trials, p, 3 * sigma + 1e-12) << "member " << i;
    }
}

TEST(Sbx, MidpointDrawIsIdentity) {
    EXPECT_EQ(sbx_spread(0.5, 30.0), 1.0);
    const auto [c1, c2] = sbx_children(0.3, 0.9, 1.0);
    EXPECT_EQ(c1, 0.3);
    EXPECT_EQ(c2, 0.9);
}

TEST(Sbx, EqualParentsAreFixed) {
    for (double u : {0.0, 0.1, 0.49, 0.7, 0.999}) {
        const auto [c1, c2] = sbx_children(0.37, 0.37, sbx_spread(u, 30.0));
        EXPECT_EQ(c1, 0.37);
        EXPECT_EQ(c2, 0.37);
    }
}

TEST(Sbx, SpreadFormula) {
    EXPECT_DOUBLE_EQ(sbx_spread(0.25, 30.0), std::pow(0.5, 1.0 / 31.0));
    EXPECT_DOUBLE_EQ(sbx_spread(0.75, 30.0), std::pow(2.0, 1.0 / 31.0));
    EXPECT_EQ(sbx_spread(0.0, 30.0), 0.0);
}

TEST(Sbx, ChildrenFormula) {
    Rng rng(5);
    for (int i = 0; i < 10000; ++i) {
        const double x1 = rng.uniform(), x2 = rng.uniform(), beta = sbx_spread(rng.uniform(), 30.0);
        const auto [c1, c2] = sbx_children(x1, x2, beta);
        EXPECT_NEAR(c1, 0.5 * ((1 + beta) * x1 + (1 - beta) * x2), 1e-15);
        EXPECT_NEAR(c2, 0.5 * ((1 - beta) * x1 + (1 + beta) * x2), 1e-15);
    }
}

TEST(Sbx, PairMeanPreservedExactly) {
    Rng rng(6);
    for (int i = 0; i < 100000; ++i) {
        const std::vector<double> p1{rng.uniform(), rng.uniform(0.0, 2.0)};
        const std::vector<double> p2{rng.uniform(), rng.uniform(0.0, 2.0)};
        const auto [c1, c2] = sbx_crossover_unclipped(p1, p2, {}, rng);
        for (std::size_t k = 0; k < 2; ++k) {
            ASSERT_EQ((c1[k] + c2[k]) / 2, (p1[k] + p2[k]) / 2) << "pair " << i;
        }
    }
}

TEST(Sbx, MonteCarloChildMeans) {
    // E[beta] for eta=30 is (31/32 + 31/30) / 2, slightly above 1, so each
    // child drifts from its parent by (E[beta]-1)(p1-p2)/2 whenever the gene
    // is crossed (probability 1/2).
    const double eta = 30.0;
    const double e_beta = 0.5 * ((eta + 1) / (eta + 2) + (eta + 1) / eta);
    const double p1 = 0.2, p2 = 0.8;
    const double expect1 = p1 + 0.5 * 0.5 * (e_beta - 1) * (p1 - p2);
    const double expect2 = p2 - 0.5 * 0.5 * (e_beta - 1) * (p1 - p2);
    Rng rng(7);
    const int n = 100000;
    double s1 = 0, s2 = 0, q1 = 0;
    for (int i = 0; i < n; ++i) {
        const auto [c1, c2] = sbx_crossover_unclipped(std::vector<double>{p1}, std::vector<double>{p2}, {eta, 1.0}, rng);
        s1 += c1[0];
        s2 += c2[0];
        q1 += c1[0] * c1[0];
    }
    const double m1 = s1 / n, m2 = s2 / n;
    const double sigma = std::sqrt((q1 / n - m1 * m1) / n);
    EXPECT_NEAR(m1, expect1, 3 * sigma);
    EXPECT_NEAR(m2, expect2, 3 * sigma);
}

TEST(Sbx, ProbabilityZeroLeavesParents) {
    Rng rng(8);
    const std::vector<double> p1{0.1, 0.2}, p2{0.9, 0.8};
    const auto [c1, c2] = sbx_crossover_unclipped(p1, p2, {30.0, 0.0}, rng);
    EXPECT_EQ(c1, p1);
    EXPECT_EQ(c2, p2);
}

TEST(Sbx, ClippedChildrenStayInBounds) {
    const std::vector<GeneSpec> bounds{{"x", 0.0, 1.0}};
    Rng rng(9);
    for (int i = 0; i < 20000; ++i) {
        const auto [c1, c2] = sbx_crossover(std::vector<double>{rng.index(2) ? 0.0 : 1.0},
                                            std::vector<double>{rng.uniform()}, bounds, {2.0, 1.0}, rng);
        ASSERT_GE(c1[0], 0.0);
        ASSERT_LE(c1[0], 1.0);
        ASSERT_GE(c2[0], 0.0);
        ASSERT_LE(c2[0], 1.0);
    }
}

TEST(Mutation, MidpointDrawIsIdentity) {
    for (double x : {-10.0, -3.3, 0.0, 7.1, 10.0}) {
        EXPECT_EQ(mutate_gene(x, -10.0, 10.0, 0.5, 20.0), x);
    }
}

TEST(Mutation, LowerBoundFixedForSmallDraws) {
    for (double u : {0.0, 0.1, 0.3, 0.4999}) {
        EXPECT_EQ(mutate_gene(0.0, 0.0, 1.0, u, 20.0), 0.0);
    }
    for (double u : {0.5001, 0.8, 0.99}) {
        EXPECT_EQ(mutate_gene(1.0, 0.0, 1.0, u, 20.0), 1.0);
    }
}

TEST(Mutation, NeverLeavesBounds) {
    const std::vector<GeneSpec> bounds{{"a", 0.0, 1.0}, {"b", -10.0, 10.0}, {"c", 0.0, 2.0}};
    Rng rng(10);
    for (int i = 0; i < 100000; ++i) {
        std::vector<double> g;
        for (const auto& b : bounds) g.push_back(rng.index(4) == 0 ? b.lower : rng.uniform(b.lower, b.upper));
        const auto y = polynomial_mutation(g, bounds, {20.0, 1.0}, rng);
        for (std::size_t k = 0; k < 3; ++k) {
            ASSERT_GE(y[k], bounds[k].lower);
            ASSERT_LE(y[k], bounds[k].upper);
        }
    }
}

TEST(Mutation, MidRangeDistributionIsSymmetric) {
    const std::vector<GeneSpec> bounds{{"x", 0.0, 1.0}};
    Rng rng(11);
    const int n = 100000;
    std::vector<double> d(n);
    double s = 0;
    for (int i = 0; i < n; ++i) {
        d[i] = polynomial_mutation(std::vector<double>{0.5}, bounds, {20.0, 1.0}, rng)[0] - 0.5;
        s += d[i];
    }
    const double mean = s / n;
    double m2 = 0, m3 = 0, m4 = 0, m6 = 0;
    for (double x : d) {
        const double c = x - mean;
        m2 += c * c;
        m3 += c * c * c;
        m4 += c * c * c * c;
        m6 += c * c * c * c * c * c;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    m6 /= n;
    // Large-sample variance of the third central moment; the distribution is
    // sharply peaked, so the normal-theory value 6/n would be far too tight.
    const double var_m3 = (m6 - m3 * m3 - 6 * m4 * m2 + 9 * m2 * m2 * m2) / n;
    EXPECT_NEAR(m3, 0.0, 3 * std::sqrt(var_m3));
    EXPECT_NEAR(mean, 0.0, 3 * std::sqrt(m2 / n));
}

TEST(Mutation, DefaultRateIsOnePerGenome) {
    const std::vector<GeneSpec> bounds(4, GeneSpec{"x", 0.0, 1.0});
    Rng rng(12);
    const int n = 20000;
    long changed = 0;
    for (int i = 0; i < n; ++i) {
        const std::vector<double> g{0.5, 0.5, 0.5, 0.5};
        const auto y = polynomial_mutation(g, bounds, {}, rng);
        for (std::size_t k = 0; k < 4; ++k) changed += y[k] != g[k];
    }
    EXPECT_NEAR(static_cast<double>(changed) / n, 1.0, 0.05);
}
