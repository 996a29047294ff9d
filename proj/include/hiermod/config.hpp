#pragma once

#include "hiermod/sim.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace hiermod {

struct GridConfig {
    double min_db = 4.0;
    double max_db = 12.0;
    double step_db = 0.5;

    void validate() const;
    std::vector<double> values() const;
};

struct PairConfig {
    double snr1_db = 7.0;
    double snr2_db = 10.0;
};

/// Structured run description. Every section is optional; absent keys keep
/// their defaults. Unknown keys are rejected.
struct RunConfig {
    ScenarioMode mode = ScenarioMode::homogeneous;
    ScenarioConfig scenario;
    std::optional<PairConfig> pair;
    std::optional<GridConfig> grid;
    std::optional<std::filesystem::path> standard_table;
    std::optional<std::filesystem::path> hierarchical_table;
    std::optional<std::filesystem::path> weather_cdf;
    std::optional<std::filesystem::path> output_dir;
};

/// Parses and validates a JSON config. Relative paths resolve against
/// `base_dir`. Throws ConfigError naming the offending key.
RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Looks up `name` as given, then as `<name>.json` and inside the shipped
/// configs directory.
std::filesystem::path resolve_config_path(const std::string& name);

} // namespace hiermod
