#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "snnmoo/moo/individual.hpp"

namespace snnmoo::moo {

/// Pareto dominance under minimization.
inline bool dominates(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::domain_error("objective vectors differ in length");
    }
    bool strictly_better = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) {
            return false;
        }
        strictly_better = strictly_better || a[k] < b[k];
    }
    return strictly_better;
}

using Fronts = std::vector<std::vector<std::size_t>>;

/// Deb's fast non-dominated sort. Each front lists indices in input order.
inline Fronts nondominated_sort(std::span<const std::vector<double>> objectives) {
    const std::size_t n = objectives.size();
    std::vector<std::vector<std::size_t>> dominated_by_me(n);
    std::vector<std::size_t> domination_count(n, 0);
    Fronts fronts;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(objectives[i], objectives[j])) {
                dominated_by_me[i].push_back(j);
                ++domination_count[j];
            } else if (dominates(objectives[j], objectives[i])) {
                dominated_by_me[j].push_back(i);
                ++domination_count[i];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (domination_count[i] == 0) {
            current.push_back(i);
        }
    }
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t i : current) {
            for (std::size_t j : dominated_by_me[i]) {
                if (--domination_count[j] == 0) {
                    next.push_back(j);
                }
            }
        }
        fronts.push_back(std::move(current));
        std::sort(next.begin(), next.end());
        current = std::move(next);
    }
    return fronts;
}

inline Fronts nondominated_sort(std::span<const Individual> population) {
    std::vector<std::vector<double>> objectives;
    objectives.reserve(population.size());
    for (const auto& ind : population) {
        if (!ind.evaluated()) {
            throw std::logic_error("cannot sort an unevaluated individual");
        }
        objectives.push_back(ind.objectives);
    }
    return nondominated_sort(std::span<const std::vector<double>>(objectives));
}

}  // namespace snnmoo::moo
