#include "thzra/app/cli.hpp"

#include <functional>
#include <ostream>

#include "CLI11.hpp"
#include "thzra/app/commands.hpp"
#include "thzra/error.hpp"
#include "thzra/rng.hpp"

namespace thzra::app {

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"THz random-access laboratory"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    CommandOptions opts;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    std::uint64_t max_cells = 0;
    unsigned parallel = 0;

    using Command = std::function<CommandResult(const CommandOptions&, std::ostream&)>;
    std::vector<std::pair<CLI::App*, Command>> commands;
    auto add = [&](const char* name, const char* help, Command fn) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opts.config, "INI configuration file")->required();
        sub->add_option("--seed", seed, "RNG seed (overrides protocol.seed)");
        sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
        sub->add_option("--trials", trials, "trials per batch (overrides protocol.trials)")->check(CLI::PositiveNumber);
        sub->add_option("--parallel", parallel, "worker threads (also capped by THZRA_MAX_PARALLEL)");
        commands.emplace_back(sub, std::move(fn));
        return sub;
    };
    add("simulate", "run the FTP/ATP/optimal access simulator", cmd_simulate);
    add("analyze", "evaluate closed-form delay, energy, bounds and outage", cmd_analyze);
    add("validate", "cross-check sampling and simulation against theory", cmd_validate);
    CLI::App* sweep = add("sweep", "cartesian parameter sweep with resumable cells", cmd_sweep);
    sweep->add_option("--max-cells", max_cells, "compute at most this many new cells, then stop");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    for (auto& [sub, fn] : commands) {
        if (!sub->parsed())
            continue;
        if (sub->count("--seed"))
            opts.seed = seed;
        if (sub->count("--trials"))
            opts.trials = trials;
        if (sub == sweep && sub->count("--max-cells"))
            opts.max_cells = max_cells;
        set_parallel_limit(parallel);
        try {
            return fn(opts, out).exit_code;
        }
        catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return is_config_error(e.code()) ? 2 : 1;
        }
        catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return 2;
}

}  // namespace thzra::app
