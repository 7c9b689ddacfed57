#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace snnmoo::moo {

/// Carried across generations: running ideal and worst points and the
/// previous generation's extreme points.
struct NormalizationState {
    std::vector<double> ideal;
    std::vector<double> worst;
    std::vector<std::vector<double>> extremes;
};

struct NormalizedObjectives {
    std::vector<std::vector<double>> values;
    std::vector<double> ideal;
    std::vector<double> nadir;
    std::vector<double> denominator;
    bool fallback = false;  // intercepts unusable, per-objective range used instead
};

inline constexpr double kDenominatorFloor = 1e-12;

/// Solves a small dense system by Gaussian elimination with partial pivoting.
/// Returns nullopt when the matrix is numerically singular.
inline std::optional<std::vector<double>> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    double scale = 0.0;
    for (const auto& row : a) {
        for (double x : row) {
            scale = std::max(scale, std::abs(x));
        }
    }
    if (scale == 0.0) {
        return std::nullopt;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
                pivot = r;
            }
        }
        if (std::abs(a[pivot][col]) <= 1e-14 * scale) {
            return std::nullopt;
        }
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) {
                a[r][c] -= factor * a[col][c];
            }
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) {
            s -= a[i][c] * x[c];
        }
        x[i] = s / a[i][i];
    }
    return x;
}

/// Achievement scalarizing function toward axis `axis`, with the other axes
/// weighted 1e6 and near-zero translated values treated as zero.
inline double axis_asf(std::span<const double> point, std::span<const double> ideal, std::size_t axis) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < point.size(); ++k) {
        double v = point[k] - ideal[k];
        if (v < 1e-3) {
            v = 0.0;
        }
        worst = std::max(worst, k == axis ? v : v * 1e6);
    }
    return worst;
}

/// Translates by the running ideal point and scales by the intercepts of the
/// hyperplane through the extreme points. `front` selects the members of the
/// first non-dominated front, which supply extreme-point candidates.
inline NormalizedObjectives normalize_objectives(std::span<const std::vector<double>> objectives,
                                                 std::span<const std::size_t> front, NormalizationState& state) {
    if (objectives.empty()) {
        throw std::invalid_argument("cannot normalize an empty population");
    }
    const std::size_t m = objectives.front().size();
    if (state.ideal.empty()) {
        state.ideal.assign(m, std::numeric_limits<double>::infinity());
        state.worst.assign(m, -std::numeric_limits<double>::infinity());
    }
    std::vector<double> population_max(m, -std::numeric_limits<double>::infinity());
    for (const auto& f : objectives) {
        for (std::size_t k = 0; k < m; ++k) {
            state.ideal[k] = std::min(state.ideal[k], f[k]);
            state.worst[k] = std::max(state.worst[k], f[k]);
            population_max[k] = std::max(population_max[k], f[k]);
        }
    }

    std::vector<std::vector<double>> candidates = state.extremes;
    for (std::size_t i : front) {
        candidates.push_back(objectives[i]);
    }
    std::vector<std::vector<double>> extremes;
    for (std::size_t axis = 0; axis < m; ++axis) {
        std::size_t best = 0;
        double best_value = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const double v = axis_asf(candidates[c], state.ideal, axis);
            if (v < best_value) {
                best_value = v;
                best = c;
            }
        }
        extremes.push_back(candidates[best]);
    }
    state.extremes = extremes;

    NormalizedObjectives out;
    out.ideal = state.ideal;
    out.nadir.assign(m, 0.0);

    std::vector<std::vector<double>> shifted(m, std::vector<double>(m));
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t k = 0; k < m; ++k) {
            shifted[r][k] = extremes[r][k] - state.ideal[k];
        }
    }
    const auto plane = solve_linear(shifted, std::vector<double>(m, 1.0));
    bool usable = plane.has_value();
    if (usable) {
        for (std::size_t r = 0; r < m && usable; ++r) {
            double dot = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                dot += shifted[r][k] * (*plane)[k];
            }
            usable = std::abs(dot - 1.0) <= 1e-8 + 1e-5;
        }
        for (std::size_t k = 0; k < m && usable; ++k) {
            const double intercept = 1.0 / (*plane)[k];
            usable = std::isfinite(intercept) && intercept > 1e-6;
        }
    }
    if (usable) {
        for (std::size_t k = 0; k < m; ++k) {
            out.nadir[k] = std::min(state.ideal[k] + 1.0 / (*plane)[k], state.worst[k]);
        }
    } else {
        out.fallback = true;
        out.nadir = population_max;
    }
    out.denominator.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        if (!out.fallback && out.nadir[k] - state.ideal[k] <= 1e-6) {
            out.nadir[k] = population_max[k];
        }
        out.denominator[k] = std::max(out.nadir[k] - state.ideal[k], kDenominatorFloor);
    }

    out.values.reserve(objectives.size());
    for (const auto& f : objectives) {
        std::vector<double> v(m);
        for (std::size_t k = 0; k < m; ++k) {
            v[k] = (f[k] - state.ideal[k]) / out.denominator[k];
        }
        out.values.push_back(std::move(v));
    }
    return out;
}

}  // namespace snnmoo::moo
