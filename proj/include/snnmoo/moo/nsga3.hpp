#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "snnmoo/moo/dominance.hpp"
#include "snnmoo/moo/individual.hpp"
#include "snnmoo/moo/normalization.hpp"
#include "snnmoo/moo/operators.hpp"
#include "snnmoo/moo/reference_points.hpp"
#include "snnmoo/moo/survival.hpp"
#include "snnmoo/parallel.hpp"
#include "snnmoo/rng.hpp"

namespace snnmoo::moo {

struct GaConfig {
    std::size_t population = 25;
    std::size_t generations = 50;
    std::size_t objectives = 2;
    std::vector<GeneSpec> genes;
    SbxParams crossover{30.0, 1.0};
    MutationParams mutation{20.0, 0.0};
    std::size_t partitions = 0;  // 0: smallest lattice with >= population points
    bool reevaluate_survivors = false;
    unsigned jobs = 1;

    void validate() const {
        if (population < 1) {
            throw std::invalid_argument("population must be at least 1");
        }
        if (objectives < 2) {
            throw std::invalid_argument("NSGA-III needs at least two objectives");
        }
        if (genes.empty()) {
            throw std::invalid_argument("at least one gene is required");
        }
        for (const auto& g : genes) {
            g.validate();
        }
        if (!(crossover.eta >= 0.0) || !(mutation.eta >= 0.0)) {
            throw std::invalid_argument("distribution indices must be non-negative");
        }
        if (!(crossover.probability >= 0.0 && crossover.probability <= 1.0) ||
            !(mutation.probability >= 0.0 && mutation.probability <= 1.0)) {
            throw std::invalid_argument("operator probabilities must lie in [0, 1]");
        }
    }
};

/// Raised when the evaluation callback fails; carries where it happened.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(SeedTag tag, const std::string& what)
        : std::runtime_error("evaluation failed at generation " + std::to_string(tag.generation) + ", individual " +
                             std::to_string(tag.index) + ": " + what),
          tag_(tag) {}

    SeedTag tag() const noexcept { return tag_; }

private:
    SeedTag tag_;
};

/// objectives = callback(genes, tag). Must be safe to call concurrently and
/// depend only on its arguments.
using EvaluationFn = std::function<std::vector<double>(std::span<const double>, SeedTag)>;

struct History {
    std::vector<Population> generations;  // population after survival, one per generation
    ReferencePointSet references;
};

namespace detail {

inline void evaluate_all(Population& pop, std::span<const std::size_t> which, const EvaluationFn& evaluate,
                         std::size_t objectives, WorkerPool& pool) {
    pool.run(which.size(), [&](std::size_t k) {
        auto& ind = pop[which[k]];
        std::vector<double> f;
        try {
            f = evaluate(ind.genes, ind.tag);
        } catch (const std::exception& e) {
            throw EvaluationError(ind.tag, e.what());
        }
        if (f.size() != objectives) {
            throw EvaluationError(ind.tag, "callback returned " + std::to_string(f.size()) + " objectives");
        }
        for (double v : f) {
            if (!std::isfinite(v)) {
                throw EvaluationError(ind.tag, "callback returned a non-finite objective");
            }
        }
        ind.objectives = std::move(f);
    });
}

}  // namespace detail

/// Reduces `pop` to `n` members by NSGA-III survival and records rank and
/// niche on each survivor.
inline Population survive(const Population& pop, std::size_t n, const ReferencePointSet& refs,
                          NormalizationState& state) {
    std::vector<std::vector<double>> objectives;
    objectives.reserve(pop.size());
    for (const auto& ind : pop) {
        objectives.push_back(ind.objectives);
    }
    const auto result = select_survivors(objectives, n, refs, state);
    Population next;
    next.reserve(n);
    for (auto i : result.survivors) {
        Individual ind = pop[i];
        ind.rank = result.rank[i];
        ind.niche = result.association.niche[i];
        ind.niche_distance = result.association.distance[i];
        next.push_back(std::move(ind));
    }
    // Ranks are relative to the merged population; re-rank among survivors.
    const auto fronts = nondominated_sort(next);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        for (auto i : fronts[f]) {
            next[i].rank = f;
        }
    }
    return next;
}

inline std::vector<std::size_t> niche_counts(const Population& pop, std::size_t reference_count) {
    std::vector<std::size_t> counts(reference_count, 0);
    for (const auto& ind : pop) {
        ++counts[ind.niche];
    }
    return counts;
}

/// Generational NSGA-III loop: uniform initial population, then per
/// generation tournament selection, SBX, polynomial mutation, evaluation of
/// the offspring, and survival of N from the merged 2N.
inline History evolve(const EvaluationFn& evaluate, const GaConfig& config, std::uint64_t seed,
                      const std::function<void(std::size_t, const Population&)>& on_generation = {}) {
    config.validate();
    const std::size_t n = config.population;
    const std::size_t partitions =
        config.partitions > 0 ? config.partitions : partitions_for(config.objectives, n);

    History history;
    history.references = das_dennis(config.objectives, partitions);
    const auto& refs = history.references;

    Rng rng(seed);
    WorkerPool pool(config.jobs);
    NormalizationState norm;

    Population pop(n);
    for (std::size_t i = 0; i < n; ++i) {
        pop[i].genes.reserve(config.genes.size());
        for (const auto& g : config.genes) {
            pop[i].genes.push_back(rng.uniform(g.lower, g.upper));
        }
        pop[i].tag = {0, i};
    }
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) {
        all[i] = i;
    }
    detail::evaluate_all(pop, all, evaluate, config.objectives, pool);
    pop = survive(pop, n, refs, norm);
    history.generations.push_back(pop);
    if (on_generation) {
        on_generation(0, pop);
    }

    for (std::size_t gen = 1; gen <= config.generations; ++gen) {
        const auto counts = niche_counts(pop, refs.size());
        Population offspring;
        offspring.reserve(n + 1);
        while (offspring.size() < n) {
            const auto& a = pop[tournament_select(pop, counts, rng)];
            const auto& b = pop[tournament_select(pop, counts, rng)];
            auto [c1, c2] = sbx_crossover(a.genes, b.genes, config.genes, config.crossover, rng);
            for (auto* child : {&c1, &c2}) {
                if (offspring.size() == n) {
                    break;
                }
                Individual ind;
                ind.genes = polynomial_mutation(*child, config.genes, config.mutation, rng);
                ind.tag = {gen, offspring.size()};
                offspring.push_back(std::move(ind));
            }
        }

        Population merged = pop;
        std::vector<std::size_t> pending;
        if (config.reevaluate_survivors) {
            for (std::size_t i = 0; i < merged.size(); ++i) {
                merged[i].tag = {gen, n + i};
                pending.push_back(i);
            }
        }
        for (auto& child : offspring) {
            pending.push_back(merged.size());
            merged.push_back(std::move(child));
        }
        detail::evaluate_all(merged, pending, evaluate, config.objectives, pool);
        pop = survive(merged, n, refs, norm);
        history.generations.push_back(pop);
        if (on_generation) {
            on_generation(gen, pop);
        }
    }
    return history;
}

}  // namespace snnmoo::moo
