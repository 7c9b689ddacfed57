#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace snnmoo::moo {

/// Evenly spaced directions on the unit simplex (Das-Dennis lattice).
struct ReferencePointSet {
    std::vector<std::vector<double>> points;
    std::size_t objectives = 0;
    std::size_t partitions = 0;

    std::size_t size() const noexcept { return points.size(); }
};

inline std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) {
        return 0;
    }
    k = k < n - k ? k : n - k;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

namespace detail {
inline void das_dennis_fill(std::vector<std::size_t>& prefix, std::size_t remaining, std::size_t dims,
                            std::size_t partitions, std::vector<std::vector<double>>& out) {
    if (prefix.size() + 1 == dims) {
        std::vector<double> point;
        point.reserve(dims);
        for (auto q : prefix) {
            point.push_back(static_cast<double>(q) / static_cast<double>(partitions));
        }
        point.push_back(static_cast<double>(remaining) / static_cast<double>(partitions));
        out.push_back(std::move(point));
        return;
    }
    for (std::size_t q = 0; q <= remaining; ++q) {
        prefix.push_back(q);
        das_dennis_fill(prefix, remaining - q, dims, partitions, out);
        prefix.pop_back();
    }
}
}  // namespace detail

/// All points whose coordinates are multiples of 1/p summing to 1, in
/// lexicographic order; there are C(M + p - 1, p) of them.
inline ReferencePointSet das_dennis(std::size_t objectives, std::size_t partitions) {
    if (objectives < 2 || partitions < 1) {
        throw std::domain_error("Das-Dennis lattice needs M >= 2 and p >= 1");
    }
    ReferencePointSet set;
    set.objectives = objectives;
    set.partitions = partitions;
    set.points.reserve(binomial(objectives + partitions - 1, partitions));
    std::vector<std::size_t> prefix;
    detail::das_dennis_fill(prefix, partitions, objectives, partitions, set.points);
    return set;
}

/// Smallest p whose lattice has at least `population` points.
inline std::size_t partitions_for(std::size_t objectives, std::size_t population) {
    if (objectives < 2) {
        throw std::domain_error("need at least two objectives");
    }
    std::size_t p = 1;
    while (binomial(objectives + p - 1, p) < population) {
        ++p;
    }
    return p;
}

}  // namespace snnmoo::moo
