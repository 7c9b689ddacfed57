#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "snnmoo/app.hpp"

int main(int argc, char** argv) {
    namespace app = snnmoo::app;
    CLI::App cli{"Spiking network simulation and NSGA-III parameter fitting"};
    cli.require_subcommand(1);

    app::SimulateOptions sim;
    unsigned sim_jobs = 1;
    bool no_svg = false;
    auto* simulate = cli.add_subcommand("simulate", "Run one network simulation and write raster/rate files");
    simulate->add_option("--config", sim.config, "Experiment TOML supplying network defaults and seed");
    simulate->add_option("--ge", sim.g_e, "Maximum excitatory weight");
    simulate->add_option("--gi", sim.g_i, "Maximum inhibitory weight magnitude");
    simulate->add_option("--f", sim.f, "Connection probability");
    simulate->add_option("--mu", sim.mu, "Mean thalamic input");
    simulate->add_option("--mu-inh", sim.mu_inh, "Separate mean thalamic input for inhibitory neurons");
    simulate->add_option("--seed", sim.seed, "Seed (default 42)");
    simulate->add_option("--duration", sim.duration, "Simulated time in ms");
    simulate->add_option("--n-exc", sim.n_exc, "Excitatory population size");
    simulate->add_option("--n-inh", sim.n_inh, "Inhibitory population size");
    simulate->add_option("--bin", sim.bin, "Rate-series bin width in ms")->capture_default_str();
    simulate->add_option("--out", sim.out, "Output directory")->capture_default_str();
    simulate->add_option("--jobs", sim_jobs, "Threads for neuron updates")->capture_default_str();
    simulate->add_flag("--no-svg", no_svg, "Skip the SVG raster plot");
    simulate->add_flag("--dump-weights", sim.dump_weights, "Write the nonzero weights as CSV");
#ifdef SNNMOO_TEST_HOOKS
    simulate->add_flag("--no-noise", sim.disable_noise, "Disable thalamic noise (test builds only)");
#endif

    app::OptimizeOptions opt;
    unsigned opt_jobs = 0;
    auto* optimize = cli.add_subcommand("optimize", "Run every study and seed of an experiment file");
    optimize->add_option("--config", opt.config, "Experiment TOML")->required();
    optimize->add_option("--seed", opt.seed, "Override the global seed");
    optimize->add_option("--out", opt.out, "Run root (default $SNNMOO_RUN_ROOT or runs)");
    optimize->add_option("--jobs", opt_jobs, "Concurrent evaluations (default: hardware threads)");

    app::FrontOptions front;
    auto* front_cmd = cli.add_subcommand("front", "Rebuild fronts, summaries and plots from a run directory");
    front_cmd->add_option("run_dir", front.run_dir, "Run directory written by optimize")->required();
    front_cmd->add_option("--generation", front.generation, "Generation to extract (default: last)");
    front_cmd->add_option("--epsilon", front.epsilon, "Rate tolerance for the sparsity summary, Hz");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        cli.exit(e);
        return app::kConfigError;
    }

    if (simulate->parsed()) {
        sim.jobs = sim_jobs;
        sim.svg = !no_svg;
        return app::cmd_simulate(sim, std::cerr);
    }
    if (optimize->parsed()) {
        if (opt_jobs > 0) {
            opt.jobs = opt_jobs;
        }
        return app::cmd_optimize(opt, std::cerr).exit_code;
    }
    return app::cmd_front(front, std::cerr);
}
