#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rte/io/runner.hpp"
#include "rte/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Explicit upwind solver for the radiative transfer equation"};
    app.set_version_flag("--version", std::string(rte::kVersion));
    app.require_subcommand(1);

    rte::io::CommandOptions opt;
    std::string out;
    const struct {
        const char* name;
        const char* help;
        rte::io::Mode mode;
    } commands[] = {
        {"check", "Evaluate the stability conditions and print a report", rte::io::Mode::Check},
        {"run", "Time-march the transient problem and write snapshots", rte::io::Mode::Run},
        {"steady", "Iterate to the stationary solution", rte::io::Mode::Steady},
        {"convergence", "Run the manufactured-solution convergence studies", rte::io::Mode::Convergence},
    };
    for (const auto& c : commands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("-c,--config", opt.config, "JSON config file")->required()->check(CLI::ExistingFile);
        sub->add_option("-o,--out", out, "Output directory (overrides output.directory)");
        sub->add_flag("--force", opt.force, "Run even when the stability conditions fail");
        sub->add_option("-j,--threads", opt.threads, "OpenMP threads (0: runtime default)")
            ->check(CLI::NonNegativeNumber);
        const auto mode = c.mode;
        sub->callback([&opt, mode] { opt.mode = mode; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // CLI11 returns 0 for --help; every other parse failure is a usage error
        const int code = app.exit(e);
        return code == 0 ? 0 : rte::io::kExitError;
    }
    if (!out.empty()) opt.out = out;
    return rte::io::run_command(opt, std::cout, std::cerr);
}
