#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "snnmoo/io/format.hpp"
#include "snnmoo/network.hpp"
#include "snnmoo/neuron.hpp"
#include "snnmoo/parallel.hpp"
#include "snnmoo/rng.hpp"

namespace snnmoo {

struct Spike {
    long tick = 0;
    std::size_t neuron = 0;

    friend bool operator==(const Spike&, const Spike&) = default;
    friend bool operator<(const Spike& x, const Spike& y) {
        return std::tie(x.tick, x.neuron) < std::tie(y.tick, y.neuron);
    }
};

/// Spike events of one run, ordered by (tick, neuron).
struct SpikeRecord {
    std::vector<Spike> events;
    long duration = 0;  // ticks (ms)
    std::size_t n_exc = 0;
    std::size_t n_inh = 0;

    std::size_t size() const noexcept { return n_exc + n_inh; }

    bool well_formed() const {
        for (std::size_t k = 0; k < events.size(); ++k) {
            const auto& e = events[k];
            if (e.tick < 0 || e.tick >= duration || e.neuron >= size()) {
                return false;
            }
            if (k > 0 && !(events[k - 1] < e)) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const SpikeRecord&, const SpikeRecord&) = default;
};

/// Population- and time-averaged rates in Hz.
struct RateSummary {
    double r_exc = 0.0;
    double r_inh = 0.0;
    double r_all = 0.0;

    friend bool operator==(const RateSummary&, const RateSummary&) = default;
};

struct RateSeries {
    long bin = 1;  // ticks per bin
    std::vector<double> r_exc;
    std::vector<double> r_inh;
    std::vector<double> r_all;
};

struct SimulationOptions {
    unsigned threads = 1;
    // Test hook: replaces every thalamic draw by z = 0.
    bool disable_noise = false;
    // Neurons whose membrane potential is recorded every tick (at most 10).
    std::vector<std::size_t> probes;
};

struct SimulationResult {
    SpikeRecord record;
    // probe_traces[k][t] is v of probes[k] at the end of tick t.
    std::vector<std::vector<double>> probe_traces;
};

namespace detail {
inline constexpr std::size_t kChunk = 128;
}

/// Clock-driven run. Each tick: (1) detect threshold crossings and reset,
/// (2) input = thalamic drive + sum of this tick's presynaptic pulses,
/// (3) integrate every neuron. Noise is drawn in neuron order before the
/// parallel fan-out so results do not depend on the thread count.
inline SimulationResult run_simulation_traced(const NetworkInstance& net, const NetworkGenome& genome, long duration,
                                              std::uint64_t noise_seed, const SimulationOptions& options = {}) {
    if (duration < 1) {
        throw std::domain_error("simulation duration must be at least one tick");
    }
    if (options.probes.size() > 10) {
        throw std::invalid_argument("at most 10 probe neurons are supported");
    }
    const std::size_t n = net.size();
    for (auto p : options.probes) {
        if (p >= n) {
            throw std::out_of_range("probe neuron index out of range");
        }
    }
    const auto& params = net.params();
    const double mean_exc = genome.thalamic_mean(Population::excitatory);
    const double mean_inh = genome.thalamic_mean(Population::inhibitory);

    std::vector<NeuronState> state(n);
    for (std::size_t i = 0; i < n; ++i) {
        state[i] = {-65.0, params[i].b * -65.0};
    }

    SimulationResult result;
    result.record.duration = duration;
    result.record.n_exc = net.n_exc();
    result.record.n_inh = net.n_inh();
    result.probe_traces.assign(options.probes.size(), std::vector<double>(static_cast<std::size_t>(duration)));

    Rng noise(noise_seed);
    std::vector<double> input(n);
    std::vector<std::size_t> fired;
    fired.reserve(n);
    const std::size_t chunks = (n + detail::kChunk - 1) / detail::kChunk;
    std::vector<std::size_t> bad_neuron(chunks);
    WorkerPool pool(std::min<unsigned>(options.threads, static_cast<unsigned>(chunks)));
    constexpr auto kNone = std::numeric_limits<std::size_t>::max();

    for (long t = 0; t < duration; ++t) {
        fired.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = detect_and_reset(state[i], params[i]);
            if (r.fired) {
                state[i] = r.state;
                fired.push_back(i);
            }
        }
        for (std::size_t i : fired) {
            result.record.events.push_back({t, i});
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double z = options.disable_noise ? 0.0 : noise.normal();
            const auto pop = net.population(i);
            input[i] = thalamic_input(pop, pop == Population::excitatory ? mean_exc : mean_inh, z);
        }

        pool.run(chunks, [&](std::size_t c) {
            const std::size_t lo = c * detail::kChunk;
            const std::size_t hi = std::min(n, lo + detail::kChunk);
            double* in = input.data();
            for (std::size_t pre : fired) {
                const double* col = net.column(pre).data();
                for (std::size_t i = lo; i < hi; ++i) {
                    in[i] += col[i];
                }
            }
            bad_neuron[c] = kNone;
            for (std::size_t i = lo; i < hi; ++i) {
                state[i] = integrate_tick_unchecked(state[i], params[i], in[i]);
                if (bad_neuron[c] == kNone && !(std::isfinite(state[i].v) && std::isfinite(state[i].w))) {
                    bad_neuron[c] = i;
                }
            }
        });
        for (std::size_t c = 0; c < chunks; ++c) {
            if (bad_neuron[c] != kNone) {
                throw NumericalDivergence(bad_neuron[c], t);
            }
        }
        for (std::size_t k = 0; k < options.probes.size(); ++k) {
            result.probe_traces[k][static_cast<std::size_t>(t)] = state[options.probes[k]].v;
        }
    }
    return result;
}

inline SpikeRecord run_simulation(const NetworkInstance& net, const NetworkGenome& genome, long duration,
                                  std::uint64_t noise_seed, const SimulationOptions& options = {}) {
    return run_simulation_traced(net, genome, duration, noise_seed, options).record;
}

inline RateSummary mean_rates(const SpikeRecord& record) {
    if (record.duration <= 0) {
        throw std::domain_error("record duration must be positive");
    }
    std::size_t exc = 0;
    std::size_t inh = 0;
    for (const auto& e : record.events) {
        (e.neuron < record.n_exc ? exc : inh) += 1;
    }
    const double seconds = static_cast<double>(record.duration) / 1000.0;
    auto rate = [seconds](std::size_t count, std::size_t size) {
        return size == 0 ? 0.0 : static_cast<double>(count) / (static_cast<double>(size) * seconds);
    };
    return {rate(exc, record.n_exc), rate(inh, record.n_inh), rate(exc + inh, record.size())};
}

/// Rates per bin of `bin` ticks; the last bin may be shorter and is
/// normalized by its actual width.
inline RateSeries instantaneous_rates(const SpikeRecord& record, long bin) {
    if (bin < 1) {
        throw std::domain_error("rate bin must be at least one tick");
    }
    if (record.duration <= 0) {
        throw std::domain_error("record duration must be positive");
    }
    const auto bins = static_cast<std::size_t>((record.duration + bin - 1) / bin);
    std::vector<std::size_t> exc(bins, 0);
    std::vector<std::size_t> inh(bins, 0);
    for (const auto& e : record.events) {
        const auto b = static_cast<std::size_t>(e.tick / bin);
        (e.neuron < record.n_exc ? exc : inh)[b] += 1;
    }
    RateSeries series;
    series.bin = bin;
    series.r_exc.resize(bins);
    series.r_inh.resize(bins);
    series.r_all.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        const long width = std::min(bin, record.duration - static_cast<long>(b) * bin);
        const double seconds = static_cast<double>(width) / 1000.0;
        auto rate = [seconds](std::size_t count, std::size_t size) {
            return size == 0 ? 0.0 : static_cast<double>(count) / (static_cast<double>(size) * seconds);
        };
        series.r_exc[b] = rate(exc[b], record.n_exc);
        series.r_inh[b] = rate(inh[b], record.n_inh);
        series.r_all[b] = rate(exc[b] + inh[b], record.size());
    }
    return series;
}

inline void export_raster(const SpikeRecord& record, const std::string& path) {
    auto out = io::open_for_write(path);
    out << "tick,neuron,population\n";
    for (const auto& e : record.events) {
        out << e.tick << ',' << e.neuron << ',' << (e.neuron < record.n_exc ? "exc" : "inh") << '\n';
    }
    io::finish_write(out, path);
}

/// Reads a raster written by export_raster. Duration and population sizes
/// are not part of the file and must be supplied.
inline SpikeRecord import_raster(const std::string& path, long duration, std::size_t n_exc, std::size_t n_inh) {
    auto in = io::open_for_read(path);
    SpikeRecord record;
    record.duration = duration;
    record.n_exc = n_exc;
    record.n_inh = n_inh;
    std::string line;
    if (!std::getline(in, line) || io::split_csv_line(line) != std::vector<std::string>{"tick", "neuron", "population"}) {
        throw IoError(path, "missing raster header");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto fields = io::split_csv_line(line);
        if (fields.size() != 3) {
            throw IoError(path, "malformed raster line " + std::to_string(line_no));
        }
        record.events.push_back(
            {static_cast<long>(io::parse_int(fields[0])), static_cast<std::size_t>(io::parse_int(fields[1]))});
    }
    if (!record.well_formed()) {
        throw IoError(path, "raster events out of range or unsorted");
    }
    return record;
}

inline void export_rate_series(const RateSeries& series, const std::string& path) {
    auto out = io::open_for_write(path);
    out << "bin_start_ms,r_exc,r_inh,r_all\n";
    for (std::size_t b = 0; b < series.r_all.size(); ++b) {
        out << static_cast<long>(b) * series.bin << ',' << io::format_double(series.r_exc[b]) << ','
            << io::format_double(series.r_inh[b]) << ',' << io::format_double(series.r_all[b]) << '\n';
    }
    io::finish_write(out, path);
}

}  // namespace snnmoo
