#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "snnmoo/moo/individual.hpp"
#include "snnmoo/rng.hpp"

namespace snnmoo::moo {

/// Binary tournament between two distinct uniformly drawn members: lower
/// rank wins, then the member of the less crowded niche, then a coin flip.
/// `niche_count[r]` is the number of population members associated with
/// reference direction r.
inline std::size_t tournament_select(std::span<const Individual> population,
                                     std::span<const std::size_t> niche_count, Rng& rng) {
    const std::size_t n = population.size();
    if (n == 0) {
        throw std::invalid_argument("tournament on an empty population");
    }
    if (n == 1) {
        return 0;
    }
    const std::size_t a = rng.index(n);
    std::size_t b = rng.index(n - 1);
    if (b >= a) {
        ++b;
    }
    const auto& x = population[a];
    const auto& y = population[b];
    if (x.rank != y.rank) {
        return x.rank < y.rank ? a : b;
    }
    const auto cx = niche_count[x.niche];
    const auto cy = niche_count[y.niche];
    if (cx != cy) {
        return cx < cy ? a : b;
    }
    return rng.coin() ? a : b;
}

/// SBX spread factor for a uniform draw u in [0, 1).
inline double sbx_spread(double u, double eta) {
    const double exponent = 1.0 / (eta + 1.0);
    if (u <= 0.5) {
        return std::pow(2.0 * u, exponent);
    }
    return std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
}

/// Children 0.5[(1+b)x1 + (1-b)x2] and 0.5[(1-b)x1 + (1+b)x2]. The
/// larger-magnitude child is evaluated directly and the other as
/// (x1 + x2) - larger, which keeps the pair's floating-point sum equal to the
/// parents' sum whenever the larger child is within a factor of two of it.
inline std::pair<double, double> sbx_children(double x1, double x2, double beta) {
    if (beta == 1.0) {
        return {x1, x2};
    }
    const double sum = x1 + x2;
    const double half_spread = 0.5 * beta * (x2 - x1);
    const double mid = 0.5 * sum;
    double c1 = mid - half_spread;
    double c2 = mid + half_spread;
    if (std::abs(c1) >= std::abs(c2)) {
        c2 = sum - c1;
    } else {
        c1 = sum - c2;
    }
    return {c1, c2};
}

struct SbxParams {
    double eta = 30.0;
    double probability = 1.0;  // per pair
};

/// Crossover without bound handling.
inline std::pair<std::vector<double>, std::vector<double>> sbx_crossover_unclipped(std::span<const double> p1,
                                                                                   std::span<const double> p2,
                                                                                   const SbxParams& params, Rng& rng) {
    if (p1.size() != p2.size()) {
        throw std::invalid_argument("parents differ in gene count");
    }
    std::vector<double> c1(p1.begin(), p1.end());
    std::vector<double> c2(p2.begin(), p2.end());
    if (rng.uniform() >= params.probability) {
        return {std::move(c1), std::move(c2)};
    }
    for (std::size_t k = 0; k < p1.size(); ++k) {
        if (rng.uniform() >= 0.5) {
            continue;
        }
        const double beta = sbx_spread(rng.uniform(), params.eta);
        std::tie(c1[k], c2[k]) = sbx_children(p1[k], p2[k], beta);
    }
    return {std::move(c1), std::move(c2)};
}

inline std::pair<std::vector<double>, std::vector<double>> sbx_crossover(std::span<const double> p1,
                                                                         std::span<const double> p2,
                                                                         std::span<const GeneSpec> bounds,
                                                                         const SbxParams& params, Rng& rng) {
    auto children = sbx_crossover_unclipped(p1, p2, params, rng);
    for (std::size_t k = 0; k < bounds.size(); ++k) {
        children.first[k] = bounds[k].clip(children.first[k]);
        children.second[k] = bounds[k].clip(children.second[k]);
    }
    return children;
}

/// Deb's bounded polynomial mutation of one gene for a uniform draw u.
inline double mutate_gene(double x, double lower, double upper, double u, double eta) {
    const double range = upper - lower;
    const double exponent = 1.0 / (eta + 1.0);
    double delta;
    if (u <= 0.5) {
        const double xy = 1.0 - (x - lower) / range;
        const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta + 1.0);
        delta = std::pow(val, exponent) - 1.0;
    } else {
        const double xy = 1.0 - (upper - x) / range;
        const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta + 1.0);
        delta = 1.0 - std::pow(val, exponent);
    }
    const double y = x + delta * range;
    return y < lower ? lower : (y > upper ? upper : y);
}

struct MutationParams {
    double eta = 20.0;
    double probability = 0.0;  // per gene; 0 means 1 / gene count
};

inline std::vector<double> polynomial_mutation(std::span<const double> genes, std::span<const GeneSpec> bounds,
                                               const MutationParams& params, Rng& rng) {
    std::vector<double> out(genes.begin(), genes.end());
    const double p = params.probability > 0.0 ? params.probability : 1.0 / static_cast<double>(genes.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (rng.uniform() >= p) {
            continue;
        }
        out[k] = mutate_gene(out[k], bounds[k].lower, bounds[k].upper, rng.uniform(), params.eta);
    }
    return out;
}

}  // namespace snnmoo::moo
