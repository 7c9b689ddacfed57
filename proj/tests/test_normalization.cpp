#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "snnmoo/moo/dominance.hpp"
#include "snnmoo/moo/normalization.hpp"
#include "snnmoo/rng.hpp"

using namespace snnmoo;
using namespace snnmoo::moo;

namespace {

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

}  // namespace

TEST(Normalization, IdentityOnUnitSquare) {
    const std::vector<std::vector<double>> objs{{0, 1}, {1, 0}, {0.5, 0.5}, {0.2, 0.6}, {0.9, 0.3}};
    NormalizationState state;
    const auto out = normalize_objectives(objs, std::vector<std::size_t>{0, 1, 2}, state);
    EXPECT_FALSE(out.fallback);
    for (std::size_t i = 0; i < objs.size(); ++i) {
        for (std::size_t k = 0; k < 2; ++k) {
            EXPECT_DOUBLE_EQ(out.values[i][k], objs[i][k]);
        }
    }
}

TEST(Normalization, CoincidentPointsFallBack) {
    const std::vector<std::vector<double>> objs(5, std::vector<double>{2.0, 3.0});
    NormalizationState state;
    const auto out = normalize_objectives(objs, all_indices(5), state);
    EXPECT_TRUE(out.fallback);
    for (double d : out.denominator) EXPECT_EQ(d, kDenominatorFloor);
    for (const auto& v : out.values) {
        EXPECT_EQ(v[0], 0.0);
        EXPECT_EQ(v[1], 0.0);
    }
}

TEST(Normalization, InterceptsAgainstCramerSolve) {
    Rng rng(31);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::vector<double>> objs;
        const double sx = rng.uniform(0.5, 5.0), sy = rng.uniform(0.5, 5.0);
        for (int i = 0; i < 30; ++i) {
            const double t = rng.uniform();
            objs.push_back({sx * t + rng.uniform(0.0, 0.3), sy * (1 - t) * (1 - t) + rng.uniform(0.0, 0.3)});
        }
        const auto front = nondominated_sort(objs).front();
        NormalizationState state;
        const auto out = normalize_objectives(objs, front, state);

        std::vector<double> ideal{1e300, 1e300}, worst{-1e300, -1e300};
        for (const auto& o : objs) {
            for (int k = 0; k < 2; ++k) {
                ideal[k] = std::min(ideal[k], o[k]);
                worst[k] = std::max(worst[k], o[k]);
            }
        }
        // Extreme point per axis: achievement scalarizing function with
        // weight 1 on the axis and 1e6 elsewhere, tiny offsets treated as 0.
        auto asf = [&](const std::vector<double>& o, int axis) {
            double m = -1e300;
            for (int k = 0; k < 2; ++k) {
                double v = o[k] - ideal[k];
                if (v < 1e-3) v = 0.0;
                m = std::max(m, k == axis ? v : 1e6 * v);
            }
            return m;
        };
        std::vector<std::vector<double>> ext;
        for (int axis = 0; axis < 2; ++axis) {
            std::size_t best = front[0];
            for (auto i : front) {
                if (asf(objs[i], axis) < asf(objs[best], axis)) best = i;
            }
            ext.push_back({objs[best][0] - ideal[0], objs[best][1] - ideal[1]});
        }
        // Plane a.x = 1 through both extremes, by Cramer's rule.
        const double det = ext[0][0] * ext[1][1] - ext[0][1] * ext[1][0];
        if (std::abs(det) < 1e-9) continue;
        const double a0 = (ext[1][1] - ext[0][1]) / det;
        const double a1 = (ext[0][0] - ext[1][0]) / det;
        if (!(a0 > 0 && a1 > 0)) continue;
        const double i0 = 1.0 / a0, i1 = 1.0 / a1;
        if (i0 <= 1e-6 || i1 <= 1e-6) continue;
        ASSERT_FALSE(out.fallback) << "trial " << trial;
        const double d0 = std::min(i0, worst[0] - ideal[0]);
        const double d1 = std::min(i1, worst[1] - ideal[1]);
        EXPECT_NEAR(out.denominator[0], d0, 1e-9 * d0);
        EXPECT_NEAR(out.denominator[1], d1, 1e-9 * d1);
        if (i0 <= worst[0] - ideal[0] && i1 <= worst[1] - ideal[1]) {
            // Normalized extremes lie on the plane x + y = 1.
            for (const auto& e : ext) {
                EXPECT_NEAR(e[0] / out.denominator[0] + e[1] / out.denominator[1], 1.0, 1e-9);
            }
        }
        ++checked;
    }
    EXPECT_GT(checked, 100);
}

TEST(Normalization, RunningIdealOnlyDecreases) {
    NormalizationState state;
    normalize_objectives(std::vector<std::vector<double>>{{1, 2}, {2, 1}}, std::vector<std::size_t>{0, 1}, state);
    EXPECT_EQ(state.ideal, (std::vector<double>{1, 1}));
    normalize_objectives(std::vector<std::vector<double>>{{3, 3}, {4, 0.5}}, std::vector<std::size_t>{0, 1}, state);
    EXPECT_EQ(state.ideal, (std::vector<double>{1, 0.5}));
}

TEST(Normalization, LinearSolve) {
    const auto x = solve_linear({{2, 1}, {1, 3}}, {3, 5});
    ASSERT_TRUE(x);
    EXPECT_NEAR((*x)[0], 0.8, 1e-12);
    EXPECT_NEAR((*x)[1], 1.4, 1e-12);
    EXPECT_FALSE(solve_linear({{1, 2}, {2, 4}}, {1, 1}));
}
