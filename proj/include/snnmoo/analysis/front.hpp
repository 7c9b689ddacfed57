#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "snnmoo/moo/dominance.hpp"
#include "snnmoo/moo/individual.hpp"

namespace snnmoo::analysis {

struct FrontMember {
    std::size_t index = 0;  // position in the source population
    std::vector<double> genes;
    std::vector<double> objectives;

    friend bool operator==(const FrontMember&, const FrontMember&) = default;
};

/// Mutually non-dominated members of one population, with provenance.
struct ParetoFront {
    std::string experiment;
    std::size_t generation = 0;
    std::vector<std::string> gene_names;
    std::vector<std::string> objective_names;
    std::vector<FrontMember> members;
    nlohmann::json metadata = nlohmann::json::object();

    std::size_t objective_count() const {
        return objective_names.empty() && !members.empty() ? members.front().objectives.size()
                                                           : objective_names.size();
    }

    friend bool operator==(const ParetoFront&, const ParetoFront&) = default;
};

class EmptyFrontError : public std::invalid_argument {
public:
    EmptyFrontError() : std::invalid_argument("cannot extract a front from an empty population") {}
};

/// First non-dominated front; members with an objective vector already seen
/// are dropped (first occurrence kept).
inline ParetoFront extract_front(const moo::Population& population, std::string experiment = {},
                                 std::size_t generation = 0, std::vector<std::string> gene_names = {},
                                 std::vector<std::string> objective_names = {}) {
    if (population.empty()) {
        throw EmptyFrontError();
    }
    const auto fronts = moo::nondominated_sort(population);
    ParetoFront front;
    front.experiment = std::move(experiment);
    front.generation = generation;
    front.gene_names = std::move(gene_names);
    front.objective_names = std::move(objective_names);
    for (auto i : fronts.front()) {
        const auto& ind = population[i];
        const bool duplicate = std::any_of(front.members.begin(), front.members.end(),
                                           [&](const FrontMember& m) { return m.objectives == ind.objectives; });
        if (!duplicate) {
            front.members.push_back({i, ind.genes, ind.objectives});
        }
    }
    return front;
}

struct ObjectiveStats {
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
};

struct SparsityStats {
    double epsilon = 1.0;
    std::vector<double> values;  // f of each epsilon-best member, ascending
    std::optional<double> median;
};

struct FrontSummary {
    std::vector<ObjectiveStats> objectives;
    double balanced_error = 0.0;       // min over members of max(d_exc, d_inh)
    std::size_t balanced_member = 0;   // position in the front
    std::optional<SparsityStats> sparsity;
};

inline double median_of(std::vector<double> v) {
    if (v.empty()) {
        throw std::invalid_argument("median of an empty set");
    }
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// The first two objectives are the rate errors; a third, when present, is
/// the connection fraction.
inline FrontSummary front_summary(const ParetoFront& front, double epsilon = 1.0) {
    if (front.members.empty()) {
        throw EmptyFrontError();
    }
    const std::size_t m = front.members.front().objectives.size();
    FrontSummary s;
    for (std::size_t k = 0; k < m; ++k) {
        std::vector<double> col;
        for (const auto& mem : front.members) {
            col.push_back(mem.objectives[k]);
        }
        s.objectives.push_back({*std::min_element(col.begin(), col.end()), median_of(col),
                                *std::max_element(col.begin(), col.end())});
    }
    const std::size_t rate_count = std::min<std::size_t>(2, m);
    s.balanced_error = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < front.members.size(); ++i) {
        const auto& obj = front.members[i].objectives;
        const double worst = *std::max_element(obj.begin(), obj.begin() + static_cast<long>(rate_count));
        if (worst < s.balanced_error) {
            s.balanced_error = worst;
            s.balanced_member = i;
        }
    }
    if (m >= 3) {
        SparsityStats sp;
        sp.epsilon = epsilon;
        for (const auto& mem : front.members) {
            if (mem.objectives[0] <= s.objectives[0].min + epsilon && mem.objectives[1] <= s.objectives[1].min + epsilon) {
                sp.values.push_back(mem.objectives[2]);
            }
        }
        std::sort(sp.values.begin(), sp.values.end());
        if (!sp.values.empty()) {
            sp.median = median_of(sp.values);
        }
        s.sparsity = std::move(sp);
    }
    return s;
}

inline nlohmann::json to_json(const FrontSummary& s, const ParetoFront& front) {
    nlohmann::json j;
    j["experiment"] = front.experiment;
    j["generation"] = front.generation;
    j["members"] = front.members.size();
    auto& objs = j["objectives"];
    objs = nlohmann::json::array();
    for (std::size_t k = 0; k < s.objectives.size(); ++k) {
        objs.push_back({{"name", k < front.objective_names.size() ? front.objective_names[k] : std::to_string(k)},
                        {"min", s.objectives[k].min},
                        {"median", s.objectives[k].median},
                        {"max", s.objectives[k].max}});
    }
    j["balanced_error"] = s.balanced_error;
    j["balanced_member"] = {{"genes", front.members[s.balanced_member].genes},
                            {"objectives", front.members[s.balanced_member].objectives}};
    if (s.sparsity) {
        j["sparsity"] = {{"epsilon", s.sparsity->epsilon}, {"values", s.sparsity->values}};
        j["sparsity"]["median"] = s.sparsity->median ? nlohmann::json(*s.sparsity->median) : nlohmann::json(nullptr);
    }
    return j;
}

}  // namespace snnmoo::analysis
