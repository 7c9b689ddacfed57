#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "snnmoo/moo/dominance.hpp"
#include "snnmoo/moo/normalization.hpp"
#include "snnmoo/moo/reference_points.hpp"

namespace snnmoo::moo {

struct Association {
    std::vector<std::size_t> niche;
    std::vector<double> distance;
};

/// Assigns each normalized point to the reference direction with the
/// smallest perpendicular distance (lowest direction index on ties).
inline Association associate(std::span<const std::vector<double>> normalized, const ReferencePointSet& refs) {
    std::vector<std::vector<double>> units;
    units.reserve(refs.size());
    for (const auto& r : refs.points) {
        double norm = 0.0;
        for (double x : r) {
            norm += x * x;
        }
        norm = std::sqrt(norm);
        std::vector<double> u(r.size());
        for (std::size_t k = 0; k < r.size(); ++k) {
            u[k] = r[k] / norm;
        }
        units.push_back(std::move(u));
    }
    Association out;
    out.niche.resize(normalized.size());
    out.distance.resize(normalized.size());
    for (std::size_t i = 0; i < normalized.size(); ++i) {
        const auto& x = normalized[i];
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_ref = 0;
        for (std::size_t r = 0; r < units.size(); ++r) {
            const auto& u = units[r];
            double proj = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) {
                proj += x[k] * u[k];
            }
            double d2 = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) {
                const double diff = x[k] - proj * u[k];
                d2 += diff * diff;
            }
            const double d = std::sqrt(d2);
            if (d < best) {
                best = d;
                best_ref = r;
            }
        }
        out.niche[i] = best_ref;
        out.distance[i] = best;
    }
    return out;
}

/// Fills `count` slots from `candidates` by niche preservation: repeatedly
/// take the least crowded niches that still have candidates (lowest
/// reference index first); an empty niche contributes its closest member,
/// an occupied one its lowest-index member.
inline std::vector<std::size_t> niching(std::span<const std::size_t> candidates, std::size_t count,
                                        std::vector<std::size_t>& niche_count, const Association& assoc) {
    std::vector<std::size_t> chosen;
    std::vector<bool> taken(candidates.size(), false);
    while (chosen.size() < count) {
        std::vector<std::size_t> open_niches;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (!taken[c]) {
                open_niches.push_back(assoc.niche[candidates[c]]);
            }
        }
        if (open_niches.empty()) {
            throw std::logic_error("niching ran out of candidates");
        }
        std::sort(open_niches.begin(), open_niches.end());
        open_niches.erase(std::unique(open_niches.begin(), open_niches.end()), open_niches.end());
        std::size_t least = std::numeric_limits<std::size_t>::max();
        for (auto r : open_niches) {
            least = std::min(least, niche_count[r]);
        }
        for (auto r : open_niches) {
            if (chosen.size() == count) {
                break;
            }
            if (niche_count[r] != least) {
                continue;
            }
            std::size_t pick = candidates.size();
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                if (taken[c] || assoc.niche[candidates[c]] != r) {
                    continue;
                }
                if (pick == candidates.size()) {
                    pick = c;
                    if (niche_count[r] != 0) {
                        break;
                    }
                } else if (assoc.distance[candidates[c]] < assoc.distance[candidates[pick]]) {
                    pick = c;
                }
            }
            taken[pick] = true;
            chosen.push_back(candidates[pick]);
            ++niche_count[r];
        }
    }
    return chosen;
}

struct SurvivalResult {
    std::vector<std::size_t> survivors;  // ascending input indices
    std::vector<std::size_t> rank;       // per input index; meaningful for considered fronts
    Association association;             // per input index
    NormalizedObjectives normalized;
};

/// Accepts whole fronts while they fit and fills the remainder of `n` from
/// the splitting front by niching. `fronts` and `association` index the
/// same population.
inline std::vector<std::size_t> associate_and_niche(const Fronts& fronts, const Association& association,
                                                    std::size_t reference_count, std::size_t n) {
    std::vector<std::size_t> survivors;
    std::size_t split = 0;
    while (split < fronts.size() && survivors.size() + fronts[split].size() <= n) {
        survivors.insert(survivors.end(), fronts[split].begin(), fronts[split].end());
        ++split;
    }
    if (survivors.size() < n) {
        if (split == fronts.size()) {
            throw std::invalid_argument("population smaller than the survival target");
        }
        std::vector<std::size_t> niche_count(reference_count, 0);
        for (auto i : survivors) {
            ++niche_count[association.niche[i]];
        }
        const auto extra = niching(fronts[split], n - survivors.size(), niche_count, association);
        survivors.insert(survivors.end(), extra.begin(), extra.end());
    }
    std::sort(survivors.begin(), survivors.end());
    return survivors;
}

/// Full NSGA-III environmental selection over evaluated objective vectors.
inline SurvivalResult select_survivors(std::span<const std::vector<double>> objectives, std::size_t n,
                                       const ReferencePointSet& refs, NormalizationState& state) {
    if (objectives.size() < n) {
        throw std::invalid_argument("population smaller than the survival target");
    }
    Fronts all = nondominated_sort(objectives);
    SurvivalResult result;
    result.rank.assign(objectives.size(), all.size());
    for (std::size_t f = 0; f < all.size(); ++f) {
        for (auto i : all[f]) {
            result.rank[i] = f;
        }
    }
    Fronts considered;
    std::size_t covered = 0;
    for (auto& f : all) {
        if (covered >= n) {
            break;
        }
        covered += f.size();
        considered.push_back(f);
    }
    result.normalized = normalize_objectives(objectives, all.front(), state);
    result.association = associate(result.normalized.values, refs);
    result.survivors = associate_and_niche(considered, result.association, refs.size(), n);
    return result;
}

}  // namespace snnmoo::moo
