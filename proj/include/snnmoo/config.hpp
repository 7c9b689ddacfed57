#pragma once

#include <cstdint>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "snnmoo/errors.hpp"
#include "snnmoo/io/format.hpp"
#include "snnmoo/io/toml_lite.hpp"
#include "snnmoo/moo/nsga3.hpp"
#include "snnmoo/objectives.hpp"

namespace snnmoo {

inline constexpr int kConfigSchema = 1;
inline constexpr const char* kRunRootEnv = "SNNMOO_RUN_ROOT";

/// Everything an `optimize` run needs. All fields have defaults; the
/// effective values (defaults included) are what gets digested.
struct ExperimentConfig {
    std::string name = "experiment";
    std::uint64_t seed = 42;
    std::vector<std::uint64_t> seeds{0};
    std::string output_dir;  // empty: $SNNMOO_RUN_ROOT or "runs"

    EvaluationSettings evaluation;
    moo::GaConfig ga;
    StudyFamily family;
    double epsilon = 1.0;

    std::string run_root() const {
        if (!output_dir.empty()) {
            return output_dir;
        }
        if (const char* env = std::getenv(kRunRootEnv); env != nullptr && *env != '\0') {
            return env;
        }
        return "runs";
    }

    /// Effective configuration, independent of the output location and of
    /// the degree of parallelism.
    nlohmann::json effective() const {
        nlohmann::json j;
        j["schema"] = kConfigSchema;
        j["name"] = name;
        j["seed"] = seed;
        j["seeds"] = seeds;
        j["network"] = {{"n_exc", evaluation.n_exc},
                        {"n_inh", evaluation.n_inh},
                        {"duration_ms", evaluation.duration},
                        {"repeats", evaluation.repeats},
                        {"divergence_sentinel", evaluation.divergence_sentinel}};
        j["ga"] = {{"population", ga.population},
                   {"generations", ga.generations},
                   {"eta_c", ga.crossover.eta},
                   {"p_c", ga.crossover.probability},
                   {"eta_m", ga.mutation.eta},
                   {"p_m", ga.mutation.probability},
                   {"partitions", ga.partitions},
                   {"reevaluate_survivors", ga.reevaluate_survivors}};
        const auto& b = family.bounds;
        j["bounds"] = {{"g_e", {b.g_e_lower, b.g_e_upper}},
                       {"g_i", {b.g_i_lower, b.g_i_upper}},
                       {"mu", {b.mu_lower, b.mu_upper}},
                       {"f", {b.f_lower, b.f_upper}}};
        nlohmann::json targets = nlohmann::json::array();
        for (const auto& t : family.targets) {
            targets.push_back({t.exc, t.inh});
        }
        j["study"] = {{"mode", to_string(family.mode)},
                      {"f", family.f_values},
                      {"targets", targets},
                      {"mu", family.fixed_mu},
                      {"separate_thalamic_means", family.separate_thalamic_means},
                      {"epsilon", epsilon}};
        return j;
    }

    std::string digest() const { return io::hex64(io::fnv1a64(effective().dump())); }
};

namespace detail {

class ConfigBinder {
public:
    ConfigBinder(const io::TomlDocument& doc, std::string source) : doc_(doc), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& what) const {
        const int line = doc_.line_of(path);
        throw ConfigError(source_ + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": field '" + path +
                          "': " + what);
    }

    void reject_unknown(const nlohmann::json& table, const std::string& prefix,
                        const std::set<std::string>& allowed) const {
        for (const auto& [key, value] : table.items()) {
            const std::string path = prefix.empty() ? key : prefix + "." + key;
            if (!allowed.count(key)) {
                fail(path, "unknown key");
            }
        }
    }

    const nlohmann::json* find(const nlohmann::json& table, const std::string& key) const {
        const auto it = table.find(key);
        return it == table.end() ? nullptr : &*it;
    }

    double number(const nlohmann::json& v, const std::string& path) const {
        if (!v.is_number()) {
            fail(path, "expected a number");
        }
        return v.get<double>();
    }

    long long integer(const nlohmann::json& v, const std::string& path, long long min_value) const {
        if (!v.is_number_integer()) {
            fail(path, "expected an integer");
        }
        const auto x = v.get<long long>();
        if (x < min_value) {
            fail(path, "must be at least " + std::to_string(min_value));
        }
        return x;
    }

    bool boolean(const nlohmann::json& v, const std::string& path) const {
        if (!v.is_boolean()) {
            fail(path, "expected true or false");
        }
        return v.get<bool>();
    }

    std::string string(const nlohmann::json& v, const std::string& path) const {
        if (!v.is_string()) {
            fail(path, "expected a string");
        }
        return v.get<std::string>();
    }

    std::pair<double, double> interval(const nlohmann::json& v, const std::string& path) const {
        if (!v.is_array() || v.size() != 2) {
            fail(path, "expected [lower, upper]");
        }
        const double lo = number(v[0], path);
        const double hi = number(v[1], path);
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
            fail(path, "bounds must be finite with lower < upper");
        }
        return {lo, hi};
    }

private:
    const io::TomlDocument& doc_;
    std::string source_;
};

}  // namespace detail

inline ExperimentConfig config_from_toml(const io::TomlDocument& doc, const std::string& source = "<config>") {
    detail::ConfigBinder bind(doc, source);
    const auto& root = doc.root;
    ExperimentConfig cfg;
    bind.reject_unknown(root, "", {"schema", "name", "seed", "seeds", "output_dir", "network", "ga", "bounds", "study"});

    const auto* schema = bind.find(root, "schema");
    if (schema == nullptr) {
        throw ConfigError(source + ": missing required key 'schema'");
    }
    if (bind.integer(*schema, "schema", 0) != kConfigSchema) {
        bind.fail("schema", "unsupported schema version (expected " + std::to_string(kConfigSchema) + ")");
    }
    if (const auto* v = bind.find(root, "name")) {
        cfg.name = bind.string(*v, "name");
        if (cfg.name.empty() || cfg.name.find_first_of("/\\") != std::string::npos) {
            bind.fail("name", "must be a non-empty name without path separators");
        }
    }
    if (const auto* v = bind.find(root, "seed")) {
        cfg.seed = static_cast<std::uint64_t>(bind.integer(*v, "seed", 0));
    }
    if (const auto* v = bind.find(root, "seeds")) {
        if (!v->is_array() || v->empty()) {
            bind.fail("seeds", "expected a non-empty array of integers");
        }
        cfg.seeds.clear();
        for (const auto& s : *v) {
            cfg.seeds.push_back(static_cast<std::uint64_t>(bind.integer(s, "seeds", 0)));
        }
    }
    if (const auto* v = bind.find(root, "output_dir")) {
        cfg.output_dir = bind.string(*v, "output_dir");
    }

    if (const auto* net = bind.find(root, "network")) {
        bind.reject_unknown(*net, "network", {"n_exc", "n_inh", "duration_ms", "repeats", "divergence_sentinel"});
        auto& e = cfg.evaluation;
        if (const auto* v = bind.find(*net, "n_exc")) e.n_exc = static_cast<std::size_t>(bind.integer(*v, "network.n_exc", 0));
        if (const auto* v = bind.find(*net, "n_inh")) e.n_inh = static_cast<std::size_t>(bind.integer(*v, "network.n_inh", 0));
        if (e.n_exc + e.n_inh == 0) {
            bind.fail("network.n_exc", "network needs at least one neuron");
        }
        if (const auto* v = bind.find(*net, "duration_ms")) e.duration = static_cast<long>(bind.integer(*v, "network.duration_ms", 1));
        if (const auto* v = bind.find(*net, "repeats")) e.repeats = static_cast<std::size_t>(bind.integer(*v, "network.repeats", 1));
        if (const auto* v = bind.find(*net, "divergence_sentinel")) {
            e.divergence_sentinel = bind.number(*v, "network.divergence_sentinel");
            if (!(e.divergence_sentinel > 0.0) || !std::isfinite(e.divergence_sentinel)) {
                bind.fail("network.divergence_sentinel", "must be positive and finite");
            }
        }
    }

    if (const auto* ga = bind.find(root, "ga")) {
        bind.reject_unknown(*ga, "ga", {"population", "generations", "eta_c", "p_c", "eta_m", "p_m", "partitions",
                                        "reevaluate_survivors"});
        auto& g = cfg.ga;
        if (const auto* v = bind.find(*ga, "population")) g.population = static_cast<std::size_t>(bind.integer(*v, "ga.population", 1));
        if (const auto* v = bind.find(*ga, "generations")) g.generations = static_cast<std::size_t>(bind.integer(*v, "ga.generations", 0));
        if (const auto* v = bind.find(*ga, "partitions")) g.partitions = static_cast<std::size_t>(bind.integer(*v, "ga.partitions", 0));
        if (const auto* v = bind.find(*ga, "reevaluate_survivors")) g.reevaluate_survivors = bind.boolean(*v, "ga.reevaluate_survivors");
        auto non_negative = [&](const char* key, double& out) {
            if (const auto* v = bind.find(*ga, key)) {
                out = bind.number(*v, std::string("ga.") + key);
                if (!(out >= 0.0) || !std::isfinite(out)) {
                    bind.fail(std::string("ga.") + key, "must be a non-negative number");
                }
            }
        };
        auto probability = [&](const char* key, double& out) {
            if (const auto* v = bind.find(*ga, key)) {
                out = bind.number(*v, std::string("ga.") + key);
                if (!(out >= 0.0 && out <= 1.0)) {
                    bind.fail(std::string("ga.") + key, "must lie in [0, 1]");
                }
            }
        };
        non_negative("eta_c", g.crossover.eta);
        non_negative("eta_m", g.mutation.eta);
        probability("p_c", g.crossover.probability);
        probability("p_m", g.mutation.probability);
    }

    if (const auto* bounds = bind.find(root, "bounds")) {
        bind.reject_unknown(*bounds, "bounds", {"g_e", "g_i", "mu", "f"});
        auto& b = cfg.family.bounds;
        if (const auto* v = bind.find(*bounds, "g_e")) {
            std::tie(b.g_e_lower, b.g_e_upper) = bind.interval(*v, "bounds.g_e");
            if (b.g_e_lower < 0.0) bind.fail("bounds.g_e", "weight scales must be non-negative");
        }
        if (const auto* v = bind.find(*bounds, "g_i")) {
            std::tie(b.g_i_lower, b.g_i_upper) = bind.interval(*v, "bounds.g_i");
            if (b.g_i_lower < 0.0) bind.fail("bounds.g_i", "weight scales must be non-negative");
        }
        if (const auto* v = bind.find(*bounds, "mu")) {
            std::tie(b.mu_lower, b.mu_upper) = bind.interval(*v, "bounds.mu");
        }
        if (const auto* v = bind.find(*bounds, "f")) {
            std::tie(b.f_lower, b.f_upper) = bind.interval(*v, "bounds.f");
            if (b.f_lower < 0.0 || b.f_upper > 1.0) bind.fail("bounds.f", "must lie within [0, 1]");
        }
    }

    if (const auto* study = bind.find(root, "study")) {
        bind.reject_unknown(*study, "study", {"mode", "f", "targets", "mu", "separate_thalamic_means", "epsilon"});
        auto& fam = cfg.family;
        if (const auto* v = bind.find(*study, "mode")) {
            const auto mode = bind.string(*v, "study.mode");
            if (mode == "two-objective") {
                fam.mode = StudyMode::two_objective_fixed_f;
            } else if (mode == "three-objective") {
                fam.mode = StudyMode::three_objective_free_f;
            } else {
                bind.fail("study.mode", "expected \"two-objective\" or \"three-objective\"");
            }
        }
        if (const auto* v = bind.find(*study, "f")) {
            if (!v->is_array() || v->empty()) {
                bind.fail("study.f", "expected a non-empty array of fractions");
            }
            fam.f_values.clear();
            for (const auto& x : *v) {
                const double f = bind.number(x, "study.f");
                if (!(f >= 0.0 && f <= 1.0)) {
                    bind.fail("study.f", "fractions must lie in [0, 1]");
                }
                fam.f_values.push_back(f);
            }
        }
        if (const auto* v = bind.find(*study, "targets")) {
            if (!v->is_array() || v->empty()) {
                bind.fail("study.targets", "expected a non-empty array of [exc, inh] pairs");
            }
            fam.targets.clear();
            for (const auto& pair : *v) {
                if (!pair.is_array() || pair.size() != 2) {
                    bind.fail("study.targets", "each target must be [exc, inh]");
                }
                const RateTargets t{bind.number(pair[0], "study.targets"), bind.number(pair[1], "study.targets")};
                if (!(t.exc >= 0.0) || !(t.inh >= 0.0) || !std::isfinite(t.exc) || !std::isfinite(t.inh)) {
                    bind.fail("study.targets", "targets must be finite and non-negative");
                }
                fam.targets.push_back(t);
            }
        }
        if (const auto* v = bind.find(*study, "mu")) fam.fixed_mu = bind.number(*v, "study.mu");
        if (const auto* v = bind.find(*study, "separate_thalamic_means")) {
            fam.separate_thalamic_means = bind.boolean(*v, "study.separate_thalamic_means");
        }
        if (const auto* v = bind.find(*study, "epsilon")) {
            cfg.epsilon = bind.number(*v, "study.epsilon");
            if (!(cfg.epsilon >= 0.0)) bind.fail("study.epsilon", "must be non-negative");
        }
    }

    cfg.ga.genes = gene_specs_for(cfg.family.mode, cfg.family.bounds, cfg.family.separate_thalamic_means);
    cfg.ga.objectives = cfg.family.mode == StudyMode::two_objective_fixed_f ? 2 : 3;
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    return config_from_toml(io::parse_toml(text, path), path);
}

}  // namespace snnmoo
