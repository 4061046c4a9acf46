#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "scenarios.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw qfltool::ConfigError("cannot open config file " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum federated learning simulation toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string scenario_name;
    std::string out_dir;
    std::uint64_t seed = 0;

    CLI::App* run = app.add_subcommand("run", "run a JSON experiment config");
    run->add_option("config", config_path, "path to the config file")->required();
    run->add_option("--seed", seed, "override the config's seed");
    run->add_option("--out", out_dir, "output root (default $QFLSIM_OUT or ./qflsim-out)");

    CLI::App* scen = app.add_subcommand("scenario", "run a built-in scenario");
    scen->add_option("name", scenario_name, "scenario name, see list-scenarios")->required();
    scen->add_option("--seed", seed, "override the scenario's seed");
    scen->add_option("--out", out_dir, "output root (default $QFLSIM_OUT or ./qflsim-out)");

    CLI::App* list = app.add_subcommand("list-scenarios", "list the built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        // Help and version requests exit cleanly; anything else is a usage
        // error and maps onto the config-error exit code.
        return rc == 0 ? 0 : 1;
    }

    if (list->parsed()) {
        for (const qfltool::ScenarioInfo& s : qfltool::builtin_scenarios())
            std::cout << s.name << "\n    " << s.summary << "\n";
        return 0;
    }

    qfltool::RunOptions opts;
    opts.out_root = out_dir.empty() ? qfltool::default_out_root()
                                    : std::filesystem::path(out_dir);

    try {
        if (run->parsed()) {
            if (run->count("--seed") > 0) opts.seed_override = seed;
            return qfltool::run_config_text(read_file(config_path), config_path, opts);
        }
        if (scen->count("--seed") > 0) opts.seed_override = seed;
        const qfltool::ScenarioInfo* s = qfltool::find_scenario(scenario_name);
        if (s == nullptr) {
            std::cerr << "config error: unknown scenario \"" << scenario_name
                      << "\" (run list-scenarios for the available names)\n";
            return 1;
        }
        return qfltool::run_config_text(s->config_text, "scenario " + s->name, opts);
    } catch (const qfltool::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
