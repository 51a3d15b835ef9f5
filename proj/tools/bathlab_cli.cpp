#include "bathlab/commands.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"bathlab: kinetic relaxation experiments for a gas in a thermal bath"};
    app.require_subcommand(1, 1);

    std::string config_path;
    bathlab::CommandContext ctx;
    std::string out_dir = ".";
    for (const char* name : {"verify", "spectrum", "propagator", "evolve"}) {
        CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
        sub->add_option("--config", config_path, "key = value configuration file");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", ctx.threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--seed", ctx.seed, "random seed");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    ctx.out_dir = out_dir;
    omp_set_num_threads(ctx.threads);

    try {
        const bathlab::RunConfig config = config_path.empty() ? bathlab::RunConfig::defaults(command)
                                                               : bathlab::RunConfig::load(config_path, command);
        return bathlab::run_command(config, ctx);
    } catch (const bathlab::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
