#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "snnmoo/errors.hpp"

namespace snnmoo {

enum class Population { excitatory, inhibitory };

inline const char* to_string(Population p) { return p == Population::excitatory ? "exc" : "inh"; }

/// Izhikevich coefficients for one neuron.
///   dv/dt = 0.04 v^2 + 5 v + 140 - w + I
///   dw/dt = a (b v - w)
/// with v := c, w := w + d whenever v reaches the 30 mV peak.
struct NeuronParams {
    double a = 0.02;  // recovery decay rate (1/ms)
    double b = 0.2;   // recovery sensitivity
    double c = -65.0; // reset potential (mV)
    double d = 8.0;   // recovery increment

    bool valid() const noexcept { return a > 0.0 && c < kPeak && d >= 0.0; }

    static constexpr double kPeak = 30.0;

    friend bool operator==(const NeuronParams&, const NeuronParams&) = default;
};

struct NeuronState {
    double v = -65.0;  // membrane potential (mV)
    double w = -13.0;  // recovery variable

    static NeuronState at_rest(const NeuronParams& p) { return {p.c, p.b * p.c}; }

    friend bool operator==(const NeuronState&, const NeuronState&) = default;
};

inline double membrane_derivative(double v, double w, double input) {
    return 0.04 * v * v + 5.0 * v + 140.0 - w + input;
}

inline double recovery_derivative(double v, double w, const NeuronParams& p) { return p.a * (p.b * v - w); }

/// One 1-ms tick: two 0.5 ms Euler half-steps on v, then one 1 ms Euler step
/// on w using the updated v. Returns the state without checking finiteness.
inline NeuronState integrate_tick_unchecked(NeuronState s, const NeuronParams& p, double input) {
    s.v += 0.5 * membrane_derivative(s.v, s.w, input);
    s.v += 0.5 * membrane_derivative(s.v, s.w, input);
    s.w += recovery_derivative(s.v, s.w, p);
    return s;
}

inline NeuronState integrate_tick(const NeuronState& s, const NeuronParams& p, double input, std::size_t neuron = 0,
                                  long tick = 0) {
    NeuronState next = integrate_tick_unchecked(s, p, input);
    if (!std::isfinite(next.v) || !std::isfinite(next.w)) {
        throw NumericalDivergence(neuron, tick);
    }
    return next;
}

/// Same scheme with `substeps` equal v sub-steps per tick (2 is the reference scheme).
inline NeuronState integrate_tick_substeps(NeuronState s, const NeuronParams& p, double input, int substeps) {
    const double h = 1.0 / substeps;
    for (int k = 0; k < substeps; ++k) {
        s.v += h * membrane_derivative(s.v, s.w, input);
    }
    s.w += recovery_derivative(s.v, s.w, p);
    return s;
}

struct ResetResult {
    NeuronState state;
    bool fired = false;
};

/// Applied at the start of a tick to the state left by the previous tick.
inline ResetResult detect_and_reset(const NeuronState& s, const NeuronParams& p) {
    if (s.v >= NeuronParams::kPeak) {
        return {{p.c, s.w + p.d}, true};
    }
    return {s, false};
}

/// Heterogeneous parameters of the canonical 800/200 cortical network:
/// excitatory cells span regular spiking (r=0) to chattering (r=1) through r^2,
/// inhibitory cells span fast spiking to low-threshold spiking linearly in r.
inline NeuronParams sample_heterogeneous_params(Population population, double r) {
    if (!(r >= 0.0 && r <= 1.0)) {
        throw std::domain_error("heterogeneity draw must lie in [0, 1], got " + std::to_string(r));
    }
    if (population == Population::excitatory) {
        const double r2 = r * r;
        return {0.02, 0.2, -65.0 + 15.0 * r2, 8.0 - 6.0 * r2};
    }
    return {0.02 + 0.08 * r, 0.25 - 0.05 * r, -65.0, 2.0};
}

}  // namespace snnmoo
