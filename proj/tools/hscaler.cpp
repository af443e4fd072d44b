#include "hscaler/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"hscaler: design and verify time-dependent harmonic-trap scaling protocols"};
    app.require_subcommand(1);

    hscaler::cli::CommonOptions opt;
    std::uint64_t seed_value = 0;
    bool seed_given = false;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"design", "design u(t) and omega^2(t), write protocol.csv"},
        {"validate", "run protocol validation checks, write validation.json"},
        {"moments", "tabulate analytic moment propagation, write moments.csv"},
        {"qsim", "grid wave-packet propagation, write snapshots and measured moments"},
        {"wigner", "Wigner phase-space grids per snapshot"},
        {"csim", "classical Wigner-sampled ensemble propagation"},
        {"sweep", "sweep t_f or scale factors, fit scaling-law slopes"},
    };

    std::string chosen;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config_path, "path to the JSON run configuration")
            ->required();
        sub->add_option("--out", opt.out_dir, "output directory (overrides config)");
        sub->add_option("--seed", seed_value, "ensemble RNG seed (overrides config)")
            ->each([&](const std::string&) { seed_given = true; });
        sub->add_flag("--quiet", opt.quiet, "suppress progress notes");
        sub->callback([&chosen, name = name] { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);
    if (seed_given) opt.seed = seed_value;
    return hscaler::cli::dispatch(chosen, opt);
}
