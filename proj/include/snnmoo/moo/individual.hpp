#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace snnmoo::moo {

/// Name and box bounds of one decision variable.
struct GeneSpec {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;

    void validate() const {
        if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
            throw std::domain_error("gene '" + name + "' needs finite bounds with lower < upper");
        }
    }

    bool contains(double x) const { return x >= lower && x <= upper; }
    double clip(double x) const { return x < lower ? lower : (x > upper ? upper : x); }
};

/// Identifies the evaluation an individual received; fitness seeds derive from it.
struct SeedTag {
    std::size_t generation = 0;
    std::size_t index = 0;

    friend bool operator==(const SeedTag&, const SeedTag&) = default;
};

struct Individual {
    std::vector<double> genes;
    std::vector<double> objectives;  // minimized; empty until evaluated
    std::size_t rank = 0;            // non-domination front
    std::size_t niche = 0;           // associated reference direction
    double niche_distance = 0.0;     // perpendicular distance to that direction
    SeedTag tag;

    bool evaluated() const noexcept { return !objectives.empty(); }
};

using Population = std::vector<Individual>;

}  // namespace snnmoo::moo
