#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qfltool {

struct ScenarioInfo {
    std::string name;
    std::string summary;
    const char* config_text;  // embedded JSON preset
};

const std::vector<ScenarioInfo>& builtin_scenarios();
const ScenarioInfo* find_scenario(const std::string& name);

struct RunOptions {
    std::filesystem::path out_root;
    std::optional<std::uint64_t> seed_override;
};

// $QFLSIM_OUT when set, otherwise ./qflsim-out.
std::filesystem::path default_out_root();

// Parses and executes one config. `source_label` names the config origin in
// diagnostics (a file path or "scenario <name>"). Returns the process exit
// code: 0 success, 1 config error, 2 convergence not reached, 3 protocol
// abort.
int run_config_text(const std::string& text, const std::string& source_label,
                    const RunOptions& opts);

}  // namespace qfltool
