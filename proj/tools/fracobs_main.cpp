#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fracobs/config.hpp"
#include "fracobs/driver.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    std::string out_dir;
    int workers = 0;
    bool no_truncate = false;
    int traj_every = 0;
    long long budget = 100000;
};

void add_common(CLI::App* cmd, CliArgs& args) {
    cmd->add_option("--config", args.config_path, "Configuration file (flat key=value or JSON)")
        ->required();
    cmd->add_option("--out", args.out_dir, "Output directory (default: config output_dir)");
    cmd->add_option("--workers", args.workers, "Concurrent runs (default: hardware)");
    cmd->add_flag("--no-truncate", args.no_truncate,
                  "Disable memory truncation at contact nodes (exhibits rebounds)");
    cmd->add_option("--traj-every", args.traj_every,
                    "Write trajectory CSV rows every k-th step");
    cmd->add_option("--budget", args.budget, "Step budget per run (default 100000)");
}

fracobs::DriverOptions to_options(const CliArgs& args) {
    fracobs::DriverOptions opts;
    opts.out_dir = args.out_dir;
    opts.workers = args.workers;
    opts.budget = args.budget;
    if (args.traj_every > 0) opts.traj_every = args.traj_every;
    if (args.no_truncate) opts.truncate_memory = false;
    return opts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-difference solver for the time-fractional obstacle problem"};
    app.require_subcommand(1);

    CliArgs args;
    CLI::App* cmd_run = app.add_subcommand("run", "One configuration end to end");
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "Cartesian sweep over parameter lists");
    CLI::App* cmd_decay = app.add_subcommand("decay", "Distance-to-stationary decay sampling");
    CLI::App* cmd_stationary =
        app.add_subcommand("stationary", "Stationary reference state only");
    for (CLI::App* cmd : {cmd_run, cmd_sweep, cmd_decay, cmd_stationary}) {
        add_common(cmd, args);
    }

    CLI11_PARSE(app, argc, argv);

    fracobs::RunConfig config;
    try {
        config = fracobs::load_config(args.config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return fracobs::exit_error;
    }

    const fracobs::DriverOptions opts = to_options(args);
    try {
        if (cmd_run->parsed()) return fracobs::run_single(config, opts, std::cout);
        if (cmd_sweep->parsed()) return fracobs::run_sweep(config, opts, std::cout);
        if (cmd_decay->parsed()) return fracobs::run_decay(config, opts, std::cout);
        return fracobs::run_stationary(config, opts, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return fracobs::exit_error;
    }
}
