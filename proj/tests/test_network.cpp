#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "snnmoo/network.hpp"
#include "snnmoo/simulator.hpp"

using namespace snnmoo;

TEST(Network, BaselineIsDenseWithSegregatedSigns) {
    const NetworkGenome g{0.5, 1.0, 1.0, 0.0};
    const auto net = build_network(g, 42);
    ASSERT_EQ(net.size(), 1000u);
    ASSERT_EQ(net.n_exc(), 800u);
    for (std::size_t pre = 0; pre < net.size(); ++pre) {
        for (double w : net.column(pre)) {
            if (pre < net.n_exc()) {
                ASSERT_GE(w, 0.0);
                ASSERT_LE(w, 0.5);
            } else {
                ASSERT_LE(w, 0.0);
                ASSERT_GE(w, -1.0);
            }
        }
    }
    // Only exact zero draws can be absent at f=1.
    EXPECT_GT(net.nonzero_count(), 999000u);
}

TEST(Network, EmptyMaskAtZeroFraction) {
    const auto net = build_network({0.5, 1.0, 0.0, 0.0}, 3);
    EXPECT_EQ(net.nonzero_count(), 0u);
}

TEST(Network, NonzeroCountWithinBinomialBound) {
    // Binomial(1e6, 0.2): mean 200000, sd 400, 5 sd = 2000.
    const auto net = build_network({0.5, 1.0, 0.2, 0.0}, 11);
    EXPECT_NEAR(static_cast<double>(net.nonzero_count()), 200000.0, 2000.0);
}

TEST(Network, ParamsFollowPopulation) {
    const auto net = build_network({}, 5, 40, 10);
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto& p = net.params()[i];
        if (net.population(i) == Population::excitatory) {
            EXPECT_EQ(p.a, 0.02);
            EXPECT_EQ(p.b, 0.2);
            EXPECT_GE(p.c, -65.0);
            EXPECT_LE(p.c, -50.0);
        } else {
            EXPECT_EQ(p.c, -65.0);
            EXPECT_EQ(p.d, 2.0);
            EXPECT_GE(p.a, 0.02);
            EXPECT_LE(p.a, 0.1);
        }
    }
}

TEST(Network, ScalingKeepsMask) {
    const NetworkGenome base{0.3, 0.7, 0.5, 0.0};
    const auto a = build_network(base, 19, 60, 15);
    for (double lambda : {2.0, 0.5, 3.0}) {
        NetworkGenome scaled = base;
        scaled.g_e *= lambda;
        const auto b = build_network(scaled, 19, 60, 15);
        for (std::size_t pre = 0; pre < a.n_exc(); ++pre) {
            for (std::size_t post = 0; post < a.size(); ++post) {
                const double wa = a.weight(post, pre);
                const double wb = b.weight(post, pre);
                ASSERT_EQ(wa == 0.0, wb == 0.0);
                if (lambda == 2.0 || lambda == 0.5) {
                    ASSERT_EQ(wb, lambda * wa);
                } else {
                    ASSERT_NEAR(wb, lambda * wa, 1e-15);
                }
            }
        }
        for (std::size_t pre = a.n_exc(); pre < a.size(); ++pre) {
            for (std::size_t post = 0; post < a.size(); ++post) {
                ASSERT_EQ(a.weight(post, pre), b.weight(post, pre));
            }
        }
    }
}

TEST(Network, MeanNonzeroIncreasesWithFraction) {
    double prev = -1.0;
    for (double f : {0.2, 0.5, 1.0}) {
        double total = 0.0;
        for (std::uint64_t s = 0; s < 100; ++s) {
            total += static_cast<double>(build_network({0.5, 1.0, f, 0.0}, s, 20, 5).nonzero_count());
        }
        EXPECT_GT(total / 100.0, prev);
        prev = total / 100.0;
    }
}

TEST(Network, ThalamicInput) {
    EXPECT_EQ(thalamic_input(Population::excitatory, 0.0, 0.0), 0.0);
    EXPECT_EQ(thalamic_input(Population::inhibitory, 3.0, 1.0), 5.0);
    EXPECT_EQ(thalamic_input(Population::excitatory, 3.0, 1.0), 8.0);
}

TEST(Network, ThalamicMoments) {
    Rng rng(77);
    const int n = 1000000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = thalamic_input(Population::excitatory, 1.0, rng.normal());
        s1 += x;
        s2 += x * x;
    }
    const double mean = s1 / n;
    const double sd = std::sqrt(s2 / n - mean * mean);
    EXPECT_NEAR(mean, 1.0, 0.02);
    EXPECT_NEAR(sd, 5.0, 0.02);
}

TEST(Network, RecurrentCurrentMatchesNaiveSum) {
    EXPECT_EQ(recurrent_current(build_network({}, 1, 5, 5), {}, 3), 0.0);

    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const auto net = build_network({0.5, 1.0, 0.6, 0.0}, 1000 + trial, 8, 2);
        std::vector<std::size_t> fired;
        for (std::size_t j = 0; j < net.size(); ++j) {
            if (rng.coin()) fired.push_back(j);
        }
        for (std::size_t i = 0; i < net.size(); ++i) {
            double oracle = 0.0;
            for (std::size_t j = 0; j < net.size(); ++j) {
                if (std::find(fired.begin(), fired.end(), j) != fired.end()) {
                    oracle += net.weights()[j * net.size() + i];
                }
            }
            ASSERT_EQ(recurrent_current(net, fired, i), oracle);
        }
    }
}

TEST(Network, RecurrentCurrentTwoTerms) {
    std::vector<double> w(9, 0.0);
    w[1 * 3 + 0] = 0.3;   // 1 -> 0
    w[2 * 3 + 0] = -0.7;  // 2 -> 0
    const NetworkInstance net(2, 1, std::vector<NeuronParams>(3), w, 0);
    const std::vector<std::size_t> fired{1, 2};
    EXPECT_NEAR(recurrent_current(net, fired, 0), -0.4, 1e-15);
}

TEST(Network, RegenerationIsDeterministicPerTag) {
    const NetworkGenome g{0.5, 1.0, 0.5, 0.0};
    const auto a = regenerate_for_evaluation(g, 42, 3, 7, 50, 10);
    const auto b = regenerate_for_evaluation(g, 42, 3, 7, 50, 10);
    const auto c = regenerate_for_evaluation(g, 42, 3, 8, 50, 10);
    EXPECT_TRUE(std::equal(a.weights().begin(), a.weights().end(), b.weights().begin()));
    EXPECT_FALSE(std::equal(a.weights().begin(), a.weights().end(), c.weights().begin()));
}

TEST(Network, GlobalSeedChangesDownstreamSpikes) {
    const NetworkGenome g{0.5, 1.0, 1.0, 0.0};
    auto raster = [&](std::uint64_t global) {
        const auto seeds = evaluation_seeds(global, 0, 0);
        const auto net = build_network(g, seeds.network, 80, 20);
        return run_simulation(net, g, 300, seeds.noise).events;
    };
    EXPECT_NE(raster(42), raster(43));
    EXPECT_EQ(raster(42), raster(42));
}

TEST(Network, ZeroCouplingMatchesEmptyMask) {
    const NetworkGenome zero_g{0.0, 0.0, 1.0, 0.0};
    const NetworkGenome zero_f{0.5, 1.0, 0.0, 0.0};
    const auto a = build_network(zero_g, 5, 80, 20);
    const auto b = build_network(zero_f, 5, 80, 20);
    EXPECT_EQ(run_simulation(a, zero_g, 500, 9).events, run_simulation(b, zero_f, 500, 9).events);
}

TEST(Network, GenomeValidation) {
    EXPECT_THROW(build_network({0.5, 1.0, 1.5, 0.0}, 1), std::domain_error);
    EXPECT_THROW(build_network({-0.1, 1.0, 1.0, 0.0}, 1), std::domain_error);
    EXPECT_THROW(build_network({0.5, 1.0, 1.0, std::nan("")}, 1), std::domain_error);
    EXPECT_THROW(build_network({}, 1, 0, 0), std::domain_error);
}

TEST(Network, WeightDumpListsNonzeros) {
    const auto net = build_network({0.5, 1.0, 0.3, 0.0}, 2, 6, 4);
    const auto path = (std::filesystem::temp_directory_path() / "snnmoo_weights_test.csv").string();
    write_weights_csv(net, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "row,col,weight");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        std::size_t i, j;
        double w;
        ASSERT_EQ(std::sscanf(line.c_str(), "%zu,%zu,%lf", &i, &j, &w), 3);
        EXPECT_EQ(w, net.weight(i, j));
        ++rows;
    }
    EXPECT_EQ(rows, net.nonzero_count());
    std::filesystem::remove(path);
}
