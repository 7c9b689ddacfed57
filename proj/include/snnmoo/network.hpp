#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "snnmoo/io/format.hpp"
#include "snnmoo/neuron.hpp"
#include "snnmoo/rng.hpp"

namespace snnmoo {

/// Connectivity parameters of one network realization.
struct NetworkGenome {
    double g_e = 0.5;     // excitatory weight scale
    double g_i = 1.0;     // inhibitory weight scale
    double f = 1.0;       // connection probability
    double mu_thal = 0.0; // thalamic mean offset (shared by both populations by default)
    std::optional<double> mu_thal_inh{};  // separate inhibitory offset when set

    double thalamic_mean(Population p) const {
        return p == Population::inhibitory ? mu_thal_inh.value_or(mu_thal) : mu_thal;
    }

    void validate() const {
        auto finite = [](double x) { return std::isfinite(x); };
        if (!finite(g_e) || !finite(g_i) || !finite(f) || !finite(mu_thal) ||
            (mu_thal_inh && !finite(*mu_thal_inh))) {
            throw std::domain_error("network genome contains a non-finite value");
        }
        if (g_e < 0.0 || g_i < 0.0) {
            throw std::domain_error("weight scales must be non-negative");
        }
        if (f < 0.0 || f > 1.0) {
            throw std::domain_error("connection fraction must lie in [0, 1], got " + std::to_string(f));
        }
    }
};

inline constexpr std::size_t kDefaultExcitatory = 800;
inline constexpr std::size_t kDefaultInhibitory = 200;

/// A realized network. Weights are stored column-major: column j holds the
/// synapses leaving presynaptic neuron j, row i the postsynaptic target.
class NetworkInstance {
public:
    NetworkInstance(std::size_t n_exc, std::size_t n_inh, std::vector<NeuronParams> params,
                    std::vector<double> weights, std::uint64_t seed)
        : n_exc_(n_exc), n_inh_(n_inh), params_(std::move(params)), weights_(std::move(weights)), seed_(seed) {
        if (params_.size() != size() || weights_.size() != size() * size()) {
            throw std::invalid_argument("network instance dimensions are inconsistent");
        }
    }

    std::size_t n_exc() const noexcept { return n_exc_; }
    std::size_t n_inh() const noexcept { return n_inh_; }
    std::size_t size() const noexcept { return n_exc_ + n_inh_; }
    std::uint64_t seed() const noexcept { return seed_; }

    Population population(std::size_t neuron) const noexcept {
        return neuron < n_exc_ ? Population::excitatory : Population::inhibitory;
    }

    const std::vector<NeuronParams>& params() const noexcept { return params_; }

    double weight(std::size_t post, std::size_t pre) const { return weights_[pre * size() + post]; }

    std::span<const double> column(std::size_t pre) const {
        return {weights_.data() + pre * size(), size()};
    }

    std::span<const double> weights() const noexcept { return weights_; }

    std::size_t nonzero_count() const {
        std::size_t n = 0;
        for (double w : weights_) {
            n += (w != 0.0);
        }
        return n;
    }

private:
    std::size_t n_exc_;
    std::size_t n_inh_;
    std::vector<NeuronParams> params_;
    std::vector<double> weights_;
    std::uint64_t seed_;
};

namespace detail {
inline constexpr std::uint64_t kParamStream = 0x70617261;  // neuron heterogeneity
inline constexpr std::uint64_t kWeightStream = 0x77656967; // mask and weights
inline constexpr std::uint64_t kNoiseStream = 0x6e6f6973;  // thalamic noise
}  // namespace detail

/// Every directed pair (j -> i) is present independently with probability f.
/// Mask and weight draws are made for every pair regardless of f and g, so
/// instances sharing a seed have nested masks and proportional weights.
inline NetworkInstance build_network(const NetworkGenome& genome, std::uint64_t seed,
                                     std::size_t n_exc = kDefaultExcitatory,
                                     std::size_t n_inh = kDefaultInhibitory) {
    if (n_exc + n_inh == 0) {
        throw std::domain_error("network needs at least one neuron");
    }
    genome.validate();
    const std::size_t n = n_exc + n_inh;

    std::vector<NeuronParams> params;
    params.reserve(n);
    Rng param_rng(derive_seed(seed, {detail::kParamStream}));
    for (std::size_t i = 0; i < n; ++i) {
        const auto pop = i < n_exc ? Population::excitatory : Population::inhibitory;
        params.push_back(sample_heterogeneous_params(pop, param_rng.uniform()));
    }

    std::vector<double> weights(n * n, 0.0);
    Rng weight_rng(derive_seed(seed, {detail::kWeightStream}));
    for (std::size_t pre = 0; pre < n; ++pre) {
        const double scale = pre < n_exc ? genome.g_e : -genome.g_i;
        double* col = weights.data() + pre * n;
        for (std::size_t post = 0; post < n; ++post) {
            // One 64-bit draw: high half decides presence, low half the weight.
            const std::uint64_t bits = weight_rng.next_u64();
            const double mask_draw = static_cast<double>(bits >> 32) * 0x1.0p-32;
            const double weight_draw = static_cast<double>(bits & 0xffffffffULL) * 0x1.0p-32;
            if (mask_draw < genome.f) {
                col[post] = scale * weight_draw;
            }
        }
    }
    return {n_exc, n_inh, std::move(params), std::move(weights), seed};
}

/// External drive for one neuron and tick given a standard normal draw z.
inline double thalamic_input(Population population, double mu_thal, double z) {
    return mu_thal + (population == Population::excitatory ? 5.0 : 2.0) * z;
}

/// Summed synaptic pulse into `post` from the presynaptic neurons that fired.
inline double recurrent_current(const NetworkInstance& net, std::span<const std::size_t> fired, std::size_t post) {
    double sum = 0.0;
    for (std::size_t pre : fired) {
        sum += net.weight(post, pre);
    }
    return sum;
}

/// Seeds used for one fitness evaluation, derived from the run seed and the
/// individual's (generation, index) tag.
struct EvaluationSeeds {
    std::uint64_t network = 0;
    std::uint64_t noise = 0;
};

inline EvaluationSeeds evaluation_seeds(std::uint64_t global_seed, std::uint64_t generation, std::uint64_t individual,
                                        std::uint64_t repeat = 0) {
    const std::uint64_t base = derive_seed(global_seed, {generation, individual, repeat});
    return {derive_seed(base, {detail::kWeightStream}), derive_seed(base, {detail::kNoiseStream})};
}

inline NetworkInstance regenerate_for_evaluation(const NetworkGenome& genome, std::uint64_t global_seed,
                                                 std::uint64_t generation, std::uint64_t individual,
                                                 std::size_t n_exc = kDefaultExcitatory,
                                                 std::size_t n_inh = kDefaultInhibitory) {
    return build_network(genome, evaluation_seeds(global_seed, generation, individual).network, n_exc, n_inh);
}

/// Nonzero weights as "row,col,weight" triplets (row = postsynaptic).
inline void write_weights_csv(const NetworkInstance& net, const std::string& path) {
    auto out = io::open_for_write(path);
    out << "row,col,weight\n";
    for (std::size_t post = 0; post < net.size(); ++post) {
        for (std::size_t pre = 0; pre < net.size(); ++pre) {
            const double w = net.weight(post, pre);
            if (w != 0.0) {
                out << post << ',' << pre << ',' << io::format_double(w) << '\n';
            }
        }
    }
    io::finish_write(out, path);
}

}  // namespace snnmoo
