#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "snnmoo/analysis/export.hpp"
#include "snnmoo/analysis/front.hpp"
#include "snnmoo/analysis/plot.hpp"
#include "snnmoo/config.hpp"
#include "snnmoo/errors.hpp"
#include "snnmoo/moo/nsga3.hpp"
#include "snnmoo/network.hpp"
#include "snnmoo/objectives.hpp"
#include "snnmoo/simulator.hpp"

namespace snnmoo::app {

/// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kConfigError = 2,
    kNumericalFailure = 3,
    kPartialFailure = 4,
};

namespace fs = std::filesystem;

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline void write_json(const nlohmann::json& j, const std::string& path) {
    auto out = io::open_for_write(path);
    out << j.dump(2) << '\n';
    io::finish_write(out, path);
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
    std::optional<std::string> config;
    std::optional<double> g_e, g_i, f, mu, mu_inh;
    std::optional<std::uint64_t> seed;
    std::optional<long> duration;
    std::optional<std::size_t> n_exc, n_inh;
    std::string out = "simulation";
    unsigned jobs = 1;
    long bin = 1;
    bool svg = true;
    bool dump_weights = false;
    bool disable_noise = false;  // test hook
};

/// Seeds for a standalone simulation run.
inline EvaluationSeeds simulation_seeds(std::uint64_t seed) {
    return {derive_seed(seed, {detail::kWeightStream}), derive_seed(seed, {detail::kNoiseStream})};
}

inline int cmd_simulate(const SimulateOptions& opt, std::ostream& log) {
    NetworkGenome genome;
    std::uint64_t seed = 42;
    long duration = 1000;
    std::size_t n_exc = kDefaultExcitatory;
    std::size_t n_inh = kDefaultInhibitory;
    try {
        if (opt.config) {
            const auto cfg = load_config(*opt.config);
            seed = cfg.seed;
            duration = cfg.evaluation.duration;
            n_exc = cfg.evaluation.n_exc;
            n_inh = cfg.evaluation.n_inh;
            genome.mu_thal = cfg.family.fixed_mu;
        }
        if (opt.g_e) genome.g_e = *opt.g_e;
        if (opt.g_i) genome.g_i = *opt.g_i;
        if (opt.f) genome.f = *opt.f;
        if (opt.mu) genome.mu_thal = *opt.mu;
        if (opt.mu_inh) genome.mu_thal_inh = *opt.mu_inh;
        if (opt.seed) seed = *opt.seed;
        if (opt.duration) duration = *opt.duration;
        if (opt.n_exc) n_exc = *opt.n_exc;
        if (opt.n_inh) n_inh = *opt.n_inh;
        genome.validate();
        if (duration < 1) {
            throw ConfigError("duration must be at least 1 ms");
        }
        if (n_exc + n_inh == 0) {
            throw ConfigError("network needs at least one neuron");
        }
        if (opt.bin < 1) {
            throw ConfigError("rate bin must be at least 1 ms");
        }
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::domain_error& e) {
        log << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    const auto seeds = simulation_seeds(seed);
    const auto net = build_network(genome, seeds.network, n_exc, n_inh);
    SimulationOptions sim;
    sim.threads = opt.jobs;
    sim.disable_noise = opt.disable_noise;
    SpikeRecord record;
    try {
        record = run_simulation(net, genome, duration, seeds.noise, sim);
    } catch (const NumericalDivergence& e) {
        log << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }

    try {
        fs::create_directories(opt.out);
        const auto rates = instantaneous_rates(record, opt.bin);
        export_raster(record, (fs::path(opt.out) / "raster.csv").string());
        export_rate_series(rates, (fs::path(opt.out) / "rates.csv").string());
        if (opt.svg) {
            analysis::render_raster_plot(record, rates, (fs::path(opt.out) / "raster.svg").string());
        }
        if (opt.dump_weights) {
            write_weights_csv(net, (fs::path(opt.out) / "weights.csv").string());
        }
        const auto summary = mean_rates(record);
        nlohmann::json j;
        j["genome"] = {{"g_e", genome.g_e}, {"g_i", genome.g_i}, {"f", genome.f}, {"mu", genome.mu_thal}};
        if (genome.mu_thal_inh) {
            j["genome"]["mu_inh"] = *genome.mu_thal_inh;
        }
        j["seed"] = seed;
        j["network_seed"] = seeds.network;
        j["noise_seed"] = seeds.noise;
        j["noise"] = !opt.disable_noise;
        j["n_exc"] = n_exc;
        j["n_inh"] = n_inh;
        j["duration_ms"] = duration;
        j["spikes"] = record.events.size();
        j["rates"] = {{"r_exc", summary.r_exc}, {"r_inh", summary.r_inh}, {"r_all", summary.r_all}};
        write_json(j, (fs::path(opt.out) / "simulation.json").string());
        log << "rates (Hz): exc " << summary.r_exc << ", inh " << summary.r_inh << ", all " << summary.r_all
            << " -> " << opt.out << '\n';
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return 1;
    }
    return kSuccess;
}

// ---------------------------------------------------------------- optimize

struct OptimizeOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<unsigned> jobs;
};

inline std::vector<std::string> gene_names_of(const StudySpec& spec) {
    std::vector<std::string> names;
    for (const auto& g : spec.genes) {
        names.push_back(g.name);
    }
    return names;
}

inline std::string study_label(const StudySpec& spec) {
    std::ostringstream s;
    s << "exc " << io::format_double(spec.targets.exc) << " Hz, inh " << io::format_double(spec.targets.inh) << " Hz";
    if (spec.mode == StudyMode::two_objective_fixed_f) {
        s << ", f=" << io::format_double(spec.fixed_f);
    }
    return s.str();
}

/// The study as run for one entry of the repeat-seed list.
inline StudySpec seeded_spec(const StudySpec& spec, std::uint64_t repeat_seed) {
    StudySpec out = spec;
    out.seed = derive_seed(spec.seed, {repeat_seed});
    return out;
}

inline std::uint64_t ga_seed_for(const StudySpec& seeded) { return derive_seed(seeded.seed, {0x6761}); }

/// Plot groups: two-objective runs sharing targets and repeat seed (one
/// series per f); three-objective runs sharing a repeat seed (one series per
/// target pair).
inline std::map<std::string, std::vector<std::size_t>> plot_groups(const nlohmann::json& runs) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const auto& r = runs[k];
        if (r.at("status") != "ok") {
            continue;
        }
        const auto& study = r.at("study");
        std::string key;
        if (study.at("mode") == "two-objective") {
            key = "2obj_exc" + format_label(study.at("targets")[0].get<double>()) + "_inh" +
                  format_label(study.at("targets")[1].get<double>());
        } else {
            key = "3obj";
        }
        key += "_seed" + std::to_string(r.at("repeat_seed").get<std::uint64_t>());
        groups[key].push_back(k);
    }
    return groups;
}

inline nlohmann::json summarize_and_plot(const std::string& run_dir, const nlohmann::json& runs,
                                         const std::vector<std::optional<analysis::ParetoFront>>& fronts,
                                         double epsilon, const std::string& suffix) {
    nlohmann::json summary = nlohmann::json::array();
    nlohmann::json plots = nlohmann::json::array();
    for (std::size_t k = 0; k < runs.size(); ++k) {
        if (!fronts[k]) {
            continue;
        }
        const auto& id = runs[k].at("id").get<std::string>();
        auto s = analysis::to_json(analysis::front_summary(*fronts[k], epsilon), *fronts[k]);
        s["study"] = runs[k].at("study");
        summary.push_back(s);
        const std::string plot = "plots/" + id + suffix + ".svg";
        analysis::render_front_plot(std::span(&*fronts[k], 1), (fs::path(run_dir) / plot).string());
        plots.push_back(plot);
    }
    for (const auto& [key, members] : plot_groups(runs)) {
        std::vector<analysis::ParetoFront> group;
        for (auto k : members) {
            if (fronts[k]) {
                group.push_back(*fronts[k]);
            }
        }
        if (group.size() < 2) {
            continue;
        }
        const std::string plot = "plots/" + key + suffix + ".svg";
        analysis::render_front_plot(group, (fs::path(run_dir) / plot).string());
        plots.push_back(plot);
    }
    nlohmann::json out;
    out["summaries"] = summary;
    out["plots"] = plots;
    return out;
}

struct OptimizeResult {
    int exit_code = kSuccess;
    std::string run_dir;
};

inline OptimizeResult cmd_optimize(const OptimizeOptions& opt, std::ostream& log) {
    ExperimentConfig cfg;
    std::vector<StudySpec> specs;
    try {
        cfg = load_config(opt.config);
        if (opt.seed) {
            cfg.seed = *opt.seed;
        }
        if (opt.out) {
            cfg.output_dir = *opt.out;
        }
        cfg.ga.validate();
        specs = experiment_grid(cfg.family, cfg.seed);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return {kConfigError, {}};
    } catch (const std::invalid_argument& e) {
        log << "config error: " << e.what() << '\n';
        return {kConfigError, {}};
    } catch (const std::domain_error& e) {
        log << "config error: " << e.what() << '\n';
        return {kConfigError, {}};
    }

    const unsigned jobs = opt.jobs.value_or(hardware_jobs());
    const std::string digest = cfg.digest();
    const fs::path run_dir = fs::path(cfg.run_root()) / (cfg.name + "-" + digest.substr(0, 8));
    for (const char* sub : {"populations", "fronts", "plots", "logs"}) {
        fs::create_directories(run_dir / sub);
    }
    auto run_log = io::open_for_write((run_dir / "logs" / "run.log").string());
    const std::string started = utc_timestamp();

    nlohmann::json runs = nlohmann::json::array();
    std::vector<std::optional<analysis::ParetoFront>> fronts;
    bool any_failed = false;

    for (const auto& spec_template : specs) {
        for (auto repeat_seed : cfg.seeds) {
            const StudySpec spec = seeded_spec(spec_template, repeat_seed);
            const std::uint64_t ga_seed = ga_seed_for(spec);
            const std::string id = spec.id + "_seed" + std::to_string(repeat_seed);
            const auto gene_names = gene_names_of(spec);
            const auto objective_names = spec.objective_names();
            const std::string population_file = "populations/" + id + ".csv";

            nlohmann::json entry;
            entry["id"] = id;
            entry["repeat_seed"] = repeat_seed;
            entry["study_seed"] = spec.seed;
            entry["ga_seed"] = ga_seed;
            entry["gene_names"] = gene_names;
            entry["objective_names"] = objective_names;
            entry["study"] = {{"mode", to_string(spec.mode)},
                              {"targets", {spec.targets.exc, spec.targets.inh}},
                              {"label", study_label(spec)}};
            if (spec.mode == StudyMode::two_objective_fixed_f) {
                entry["study"]["f"] = spec.fixed_f;
                entry["study"]["mu"] = spec.fixed_mu;
            }

            log << "run " << id << " (" << study_label(spec) << ")\n";
            try {
                SnnRateProblem problem(spec, cfg.evaluation);
                moo::GaConfig ga = cfg.ga;
                ga.genes = spec.genes;
                ga.objectives = spec.objective_count();
                ga.jobs = jobs;
                const auto history = moo::evolve(
                    problem, ga, ga_seed, [&](std::size_t gen, const moo::Population& pop) {
                        std::size_t front0 = 0;
                        double best_exc = std::numeric_limits<double>::infinity();
                        double best_inh = best_exc;
                        for (const auto& ind : pop) {
                            front0 += ind.rank == 0;
                            best_exc = std::min(best_exc, ind.objectives[0]);
                            best_inh = std::min(best_inh, ind.objectives[1]);
                        }
                        run_log << id << " generation " << gen << "/" << ga.generations << " front0=" << front0
                                << " min_d_exc=" << io::format_double(best_exc)
                                << " min_d_inh=" << io::format_double(best_inh) << '\n';
                        run_log.flush();
                    });
                analysis::export_population_csv(history.generations, gene_names, objective_names,
                                                (run_dir / population_file).string());
                auto front = analysis::extract_front(history.generations.back(), id, history.generations.size() - 1,
                                                     gene_names, objective_names);
                front.metadata = {{"label", study_label(spec)},
                                  {"source", population_file},
                                  {"config_digest", digest},
                                  {"global_seed", cfg.seed},
                                  {"repeat_seed", repeat_seed},
                                  {"study_seed", spec.seed},
                                  {"ga_seed", ga_seed},
                                  {"created", utc_timestamp()}};
                const std::string front_csv = "fronts/" + id + ".csv";
                const std::string front_json = "fronts/" + id + ".json";
                analysis::export_front_csv(front, (run_dir / front_csv).string());
                analysis::export_front_json(front, (run_dir / front_json).string());
                entry["status"] = "ok";
                entry["divergences"] = problem.divergences();
                entry["files"] = {{"population", population_file}, {"front_csv", front_csv}, {"front_json", front_json}};
                fronts.push_back(std::move(front));
            } catch (const std::exception& e) {
                any_failed = true;
                entry["status"] = "failed";
                entry["error"] = e.what();
                run_log << id << " failed: " << e.what() << '\n';
                log << "  failed: " << e.what() << '\n';
                fronts.push_back(std::nullopt);
            }
            runs.push_back(entry);
        }
    }

    nlohmann::json products;
    try {
        products = summarize_and_plot(run_dir.string(), runs, fronts, cfg.epsilon, "");
        write_json(products["summaries"], (run_dir / "summary.json").string());
    } catch (const std::exception& e) {
        log << "error while summarizing: " << e.what() << '\n';
        any_failed = true;
    }

    nlohmann::json manifest;
    manifest["name"] = cfg.name;
    manifest["config_file"] = opt.config;
    manifest["config_digest"] = digest;
    manifest["global_seed"] = cfg.seed;
    manifest["effective_config"] = cfg.effective();
    manifest["jobs"] = jobs;
    manifest["started"] = started;
    manifest["finished"] = utc_timestamp();
    manifest["runs"] = runs;
    manifest["summary"] = "summary.json";
    manifest["plots"] = products.value("plots", nlohmann::json::array());
    manifest["log"] = "logs/run.log";
    manifest["status"] = any_failed ? "partial" : "complete";
    write_json(manifest, (run_dir / "manifest.json").string());
    log << "run directory: " << run_dir.string() << '\n';
    return {any_failed ? kPartialFailure : kSuccess, run_dir.string()};
}

// ------------------------------------------------------------------- front

struct FrontOptions {
    std::string run_dir;
    std::optional<std::size_t> generation;
    std::optional<double> epsilon;
};

inline int cmd_front(const FrontOptions& opt, std::ostream& log) {
    const fs::path dir(opt.run_dir);
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(io::read_file((dir / "manifest.json").string()));
        if (!manifest.contains("runs") || !manifest["runs"].is_array() || !manifest.contains("effective_config")) {
            throw ConfigError("manifest lacks runs or effective_config");
        }
    } catch (const std::exception& e) {
        log << "manifest error: " << e.what() << '\n';
        return kConfigError;
    }
    const double epsilon =
        opt.epsilon.value_or(manifest["effective_config"]["study"].value("epsilon", 1.0));
    const std::string suffix = opt.generation ? "_gen" + std::to_string(*opt.generation) : "";

    const auto& runs = manifest["runs"];
    std::vector<std::optional<analysis::ParetoFront>> fronts;
    try {
        for (const auto& r : runs) {
            if (r.at("status") != "ok") {
                fronts.push_back(std::nullopt);
                continue;
            }
            const auto id = r.at("id").get<std::string>();
            const auto population_file = r.at("files").at("population").get<std::string>();
            const auto gene_names = r.at("gene_names").get<std::vector<std::string>>();
            const auto table = analysis::import_population_csv((dir / population_file).string(), gene_names.size());
            if (table.generations.empty()) {
                throw ConfigError("population file " + population_file + " is empty");
            }
            const std::size_t gen = opt.generation.value_or(table.generations.size() - 1);
            if (gen >= table.generations.size()) {
                log << "generation " << gen << " not recorded for " << id << " (last is "
                    << table.generations.size() - 1 << ")\n";
                return kConfigError;
            }
            auto front = analysis::extract_front(table.generations[gen], id, gen, table.gene_names,
                                                 table.objective_names);
            front.metadata = {{"label", r.at("study").at("label")},
                              {"source", population_file},
                              {"config_digest", manifest.at("config_digest")},
                              {"global_seed", manifest.at("global_seed")},
                              {"repeat_seed", r.at("repeat_seed")},
                              {"study_seed", r.at("study_seed")},
                              {"ga_seed", r.at("ga_seed")},
                              {"created", utc_timestamp()}};
            analysis::export_front_csv(front, (dir / ("fronts/" + id + suffix + ".csv")).string());
            analysis::export_front_json(front, (dir / ("fronts/" + id + suffix + ".json")).string());
            fronts.push_back(std::move(front));
        }
        const auto products = summarize_and_plot(dir.string(), runs, fronts, epsilon, suffix);
        write_json(products["summaries"], (dir / ("summary" + suffix + ".json")).string());
        log << "wrote " << products["plots"].size() << " plots and " << products["summaries"].size()
            << " summaries\n";
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return kSuccess;
}

}  // namespace snnmoo::app
