#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "snnmoo/errors.hpp"
#include "snnmoo/moo/individual.hpp"
#include "snnmoo/network.hpp"
#include "snnmoo/rng.hpp"
#include "snnmoo/simulator.hpp"

namespace snnmoo {

struct RateTargets {
    double exc = 5.0;  // Hz
    double inh = 2.0;  // Hz

    friend bool operator==(const RateTargets&, const RateTargets&) = default;
};

enum class StudyMode {
    two_objective_fixed_f,  // genes (g_e, g_i); objectives (d_exc, d_inh)
    three_objective_free_f, // genes (mu, g_e, g_i, f); objectives (d_exc, d_inh, f)
};

inline const char* to_string(StudyMode m) {
    return m == StudyMode::two_objective_fixed_f ? "two-objective" : "three-objective";
}

/// Search box per gene.
struct GeneBounds {
    double g_e_lower = 0.0, g_e_upper = 1.0;
    double g_i_lower = 0.0, g_i_upper = 2.0;
    double mu_lower = -10.0, mu_upper = 10.0;
    double f_lower = 0.0, f_upper = 1.0;
};

struct StudySpec {
    std::string id;
    StudyMode mode = StudyMode::two_objective_fixed_f;
    RateTargets targets;
    double fixed_f = 1.0;           // two-objective mode only
    double fixed_mu = 0.0;          // two-objective mode only
    bool separate_thalamic_means = false;  // three-objective: (mu_exc, mu_inh) instead of one mu
    std::uint64_t seed = 0;         // sub-seed derived from the run seed
    std::vector<moo::GeneSpec> genes;

    std::size_t objective_count() const { return mode == StudyMode::two_objective_fixed_f ? 2 : 3; }

    std::vector<std::string> objective_names() const {
        if (mode == StudyMode::two_objective_fixed_f) {
            return {"d_exc", "d_inh"};
        }
        return {"d_exc", "d_inh", "f"};
    }
};

inline std::vector<moo::GeneSpec> gene_specs_for(StudyMode mode, const GeneBounds& b, bool separate_means = false) {
    if (mode == StudyMode::two_objective_fixed_f) {
        return {{"g_e", b.g_e_lower, b.g_e_upper}, {"g_i", b.g_i_lower, b.g_i_upper}};
    }
    std::vector<moo::GeneSpec> genes;
    if (separate_means) {
        genes.push_back({"mu_exc", b.mu_lower, b.mu_upper});
        genes.push_back({"mu_inh", b.mu_lower, b.mu_upper});
    } else {
        genes.push_back({"mu", b.mu_lower, b.mu_upper});
    }
    genes.push_back({"g_e", b.g_e_lower, b.g_e_upper});
    genes.push_back({"g_i", b.g_i_lower, b.g_i_upper});
    genes.push_back({"f", b.f_lower, b.f_upper});
    return genes;
}

/// Maps a gene vector onto network parameters for the study's mode.
inline NetworkGenome genome_from_genes(const StudySpec& spec, std::span<const double> genes) {
    NetworkGenome g;
    if (spec.mode == StudyMode::two_objective_fixed_f) {
        if (genes.size() != 2) {
            throw std::invalid_argument("two-objective study expects genes (g_e, g_i)");
        }
        g.g_e = genes[0];
        g.g_i = genes[1];
        g.f = spec.fixed_f;
        g.mu_thal = spec.fixed_mu;
        return g;
    }
    const std::size_t expected = spec.separate_thalamic_means ? 5 : 4;
    if (genes.size() != expected) {
        throw std::invalid_argument("three-objective study expects " + std::to_string(expected) + " genes");
    }
    std::size_t k = 0;
    g.mu_thal = genes[k++];
    if (spec.separate_thalamic_means) {
        g.mu_thal_inh = genes[k++];
    }
    g.g_e = genes[k++];
    g.g_i = genes[k++];
    g.f = genes[k++];
    return g;
}

/// Network size, duration and robustness knobs shared by all evaluations.
struct EvaluationSettings {
    std::size_t n_exc = kDefaultExcitatory;
    std::size_t n_inh = kDefaultInhibitory;
    long duration = 1000;
    std::size_t repeats = 1;                 // objectives are mean distances over repeats
    double divergence_sentinel = 1e6;        // Hz, returned for non-finite simulations
    unsigned simulation_threads = 1;
};

inline std::pair<double, double> rate_distances(const RateSummary& rates, const RateTargets& targets) {
    return {std::abs(rates.r_exc - targets.exc), std::abs(rates.r_inh - targets.inh)};
}

/// Rates of the simulation an evaluation runs for (genes, tag, repeat).
inline RateSummary simulate_for_evaluation(const NetworkGenome& genome, std::uint64_t seed, moo::SeedTag tag,
                                           std::size_t repeat, const EvaluationSettings& settings) {
    const auto seeds = evaluation_seeds(seed, tag.generation, tag.index, repeat);
    const auto net = build_network(genome, seeds.network, settings.n_exc, settings.n_inh);
    SimulationOptions options;
    options.threads = settings.simulation_threads;
    return mean_rates(run_simulation(net, genome, settings.duration, seeds.noise, options));
}

/// GA fitness for the SNN studies. Calls are independent of each other and
/// safe to run concurrently; the divergence counter is the only shared state.
class SnnRateProblem {
public:
    SnnRateProblem(StudySpec spec, EvaluationSettings settings)
        : spec_(std::move(spec)), settings_(settings), divergences_(std::make_shared<std::atomic<std::size_t>>(0)) {
        if (spec_.targets.exc < 0.0 || spec_.targets.inh < 0.0) {
            throw std::domain_error("rate targets must be non-negative");
        }
        if (settings_.repeats < 1) {
            throw std::domain_error("at least one repeat per evaluation is required");
        }
    }

    std::vector<double> operator()(std::span<const double> genes, moo::SeedTag tag) const {
        const NetworkGenome genome = genome_from_genes(spec_, genes);
        double d_exc = 0.0;
        double d_inh = 0.0;
        try {
            for (std::size_t r = 0; r < settings_.repeats; ++r) {
                const auto [de, di] =
                    rate_distances(simulate_for_evaluation(genome, spec_.seed, tag, r, settings_), spec_.targets);
                d_exc += de;
                d_inh += di;
            }
            d_exc /= static_cast<double>(settings_.repeats);
            d_inh /= static_cast<double>(settings_.repeats);
        } catch (const NumericalDivergence&) {
            divergences_->fetch_add(1);
            d_exc = settings_.divergence_sentinel;
            d_inh = settings_.divergence_sentinel;
        }
        if (spec_.mode == StudyMode::two_objective_fixed_f) {
            return {d_exc, d_inh};
        }
        return {d_exc, d_inh, genome.f};
    }

    const StudySpec& spec() const noexcept { return spec_; }
    const EvaluationSettings& settings() const noexcept { return settings_; }
    std::size_t divergences() const noexcept { return divergences_->load(); }

private:
    StudySpec spec_;
    EvaluationSettings settings_;
    std::shared_ptr<std::atomic<std::size_t>> divergences_;
};

inline std::vector<double> evaluate_two_objective(std::span<const double> genes, const StudySpec& spec,
                                                  moo::SeedTag tag, const EvaluationSettings& settings = {}) {
    if (spec.mode != StudyMode::two_objective_fixed_f) {
        throw std::invalid_argument("study is not a two-objective study");
    }
    return SnnRateProblem(spec, settings)(genes, tag);
}

inline std::vector<double> evaluate_three_objective(std::span<const double> genes, const StudySpec& spec,
                                                    moo::SeedTag tag, const EvaluationSettings& settings = {}) {
    if (spec.mode != StudyMode::three_objective_free_f) {
        throw std::invalid_argument("study is not a three-objective study");
    }
    return SnnRateProblem(spec, settings)(genes, tag);
}

/// Factor lists whose cross-product defines a set of studies.
struct StudyFamily {
    StudyMode mode = StudyMode::two_objective_fixed_f;
    std::vector<double> f_values{1.0};          // ignored in three-objective mode
    std::vector<RateTargets> targets{{5.0, 2.0}};
    GeneBounds bounds;
    double fixed_mu = 0.0;
    bool separate_thalamic_means = false;
};

inline std::string format_label(double x) {
    std::string s = io::format_double(x);
    for (auto& ch : s) {
        if (ch == '.') {
            ch = 'p';
        } else if (ch == '-') {
            ch = 'm';
        }
    }
    return s;
}

/// Cross-product of targets x f values (targets only in three-objective
/// mode). Each study gets a sub-seed derived from `seed` and its position.
inline std::vector<StudySpec> experiment_grid(const StudyFamily& family, std::uint64_t seed) {
    if (family.targets.empty()) {
        throw ConfigError("experiment grid needs at least one target pair");
    }
    if (family.mode == StudyMode::two_objective_fixed_f && family.f_values.empty()) {
        throw ConfigError("experiment grid needs at least one connectivity fraction");
    }
    std::vector<StudySpec> specs;
    const auto genes = gene_specs_for(family.mode, family.bounds, family.separate_thalamic_means);
    auto add = [&](const RateTargets& t, double f) {
        StudySpec s;
        s.mode = family.mode;
        s.targets = t;
        s.fixed_f = f;
        s.fixed_mu = family.fixed_mu;
        s.separate_thalamic_means = family.separate_thalamic_means;
        s.genes = genes;
        s.seed = derive_seed(seed, {specs.size()});
        s.id = (family.mode == StudyMode::two_objective_fixed_f ? "2obj" : "3obj") + std::string("_exc") +
               format_label(t.exc) + "_inh" + format_label(t.inh);
        if (family.mode == StudyMode::two_objective_fixed_f) {
            s.id += "_f" + format_label(f);
        }
        specs.push_back(std::move(s));
    };
    for (const auto& t : family.targets) {
        if (t.exc < 0.0 || t.inh < 0.0) {
            throw ConfigError("rate targets must be non-negative");
        }
        if (family.mode == StudyMode::two_objective_fixed_f) {
            for (double f : family.f_values) {
                if (!(f >= 0.0 && f <= 1.0)) {
                    throw ConfigError("connectivity fraction must lie in [0, 1]");
                }
                add(t, f);
            }
        } else {
            add(t, 1.0);
        }
    }
    return specs;
}

}  // namespace snnmoo
