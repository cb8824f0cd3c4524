#include "nlpar/config.hpp"
#include "nlpar/error.hpp"
#include "nlpar/run.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

int main(int argc, char** argv) {
    CLI::App app{"Nonlocal parabolic solver and inequality checker"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<unsigned> jobs;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    bool refine = false;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"solve", "solve one ensemble member and write its field files"},
        {"tail", "solve one member and tabulate its tails"},
        {"verify", "solve one member and run the theorem checks"},
        {"estimate", "run the theorem checks over a seeded ensemble"},
        {"oracle", "compare the solver with closed-form references"},
        {"lemma-check", "check the algebraic, Poincare, Sobolev and comparison-function lemmas"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->fallthrough();
    }
    app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
    app.add_option("--jobs", jobs, "worker threads for ensemble members")->check(CLI::PositiveNumber);
    app.add_option("--out", out, "output directory");
    app.add_option("--seed", seed, "run seed");
    app.add_flag("--refine", refine, "also run at 2N, dt/2 and report refinement ratios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return nlpar::exit_error;
    }

    nlpar::RunConfig config;
    try {
        if (!config_path.empty()) {
            config = nlpar::load_config(config_path);
        }
        config.command = app.get_subcommands().front()->get_name();
        if (jobs) config.jobs = *jobs;
        if (out) config.output.directory = *out;
        if (seed) config.seed = *seed;
        if (refine) config.refine = true;
        nlpar::validate(config);
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return nlpar::exit_error;
    }
    return nlpar::run(config, std::cout);
}
