// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bfsim/config.hpp"
#include "bfsim/runner.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    int workers = 1;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "scenario config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", args.out_path, "output CSV path")->required();
    sub->add_option("--seed", args.seed, "override master_seed from the config");
    sub->add_option("--workers", args.workers, "concurrent trial workers")
        ->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"blind adaptive beamformer simulator"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* simulate = app.add_subcommand("simulate", "per-frame records at one grid point");
    CLI::App* sweep = app.add_subcommand("sweep", "aggregate rows over one swept key");
    CLI::App* pattern = app.add_subcommand("pattern", "beam patterns of final trial weights");
    add_common(simulate, args);
    add_common(sweep, args);
    add_common(pattern, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        bfsim::ScenarioConfig cfg = bfsim::load_config(args.config_path);
        if (sub->count("--seed") > 0)
            cfg.master_seed = args.seed;

        if (sub == simulate) {
            bfsim::run_simulate(cfg, args.out_path, args.workers);
            std::cout << "wrote " << args.out_path << " (" << cfg.trials << " trials x "
                      << cfg.frames << " frames, " << cfg.algorithms.size() << " algorithms)\n";
        } else if (sub == sweep) {
            bfsim::run_sweep(cfg, args.out_path, args.workers);
            std::cout << "wrote " << args.out_path << '\n';
        } else {
            bfsim::run_pattern(cfg, args.out_path, args.workers);
            std::cout << "wrote " << args.out_path << '\n';
        }
    } catch (const bfsim::config_error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const bfsim::dimension_error& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const bfsim::io_error& e) {
        std::cerr << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
