#include "hiermod/config.hpp"

#include "hiermod/csv.hpp"
#include "hiermod/error.hpp"

#include <cmath>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

namespace hiermod {

using nlohmann::json;

void GridConfig::validate() const {
    if (!std::isfinite(min_db) || !std::isfinite(max_db)) throw ConfigError("grid bounds must be finite");
    if (!(max_db >= min_db)) throw ConfigError("grid max must be >= min");
    if (!(step_db > 0.0)) throw ConfigError("grid step must be > 0");
}

std::vector<double> GridConfig::values() const {
    validate();
    std::vector<double> out;
    // Index-based so rounding never drops the upper bound.
    const auto n = static_cast<long>(std::floor((max_db - min_db) / step_db + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(min_db + static_cast<double>(k) * step_db);
    return out;
}

namespace {

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(fmt::format("{} must be an object", where));
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key)) throw ConfigError(fmt::format("unknown key '{}{}'", where.empty() ? "" : where + ".", key));
    }
}

template <typename T>
T get(const json& obj, const std::string& key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(fmt::format("'{}{}' has the wrong type", where.empty() ? "" : where + ".", key));
    }
}

template <typename T>
void read(const json& obj, const std::string& key, const std::string& where, T& dst) {
    if (obj.contains(key)) dst = get<T>(obj, key, where);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative() && !base.empty()) path = base / path;
    return path;
}

} // namespace

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    check_keys(root, "", {"mode", "scenario", "beam", "tables", "pair", "grid", "output_dir"});

    RunConfig cfg;
    if (root.contains("mode")) cfg.mode = parse_scenario_mode(get<std::string>(root, "mode", ""));

    if (root.contains("scenario")) {
        const auto& s = root["scenario"];
        check_keys(s, "scenario",
                   {"n_receivers", "n_trials", "snr_max_db", "strategies", "professional_shares",
                    "professional_weight", "rho_set", "seed", "threads"});
        auto& sc = cfg.scenario;
        read(s, "n_receivers", "scenario", sc.n_receivers);
        read(s, "n_trials", "scenario", sc.n_trials);
        read(s, "snr_max_db", "scenario", sc.snr_max_db);
        if (s.contains("strategies")) {
            sc.strategies.clear();
            for (const auto& name : get<std::vector<std::string>>(s, "strategies", "scenario")) {
                sc.strategies.push_back(parse_strategy(name));
            }
        }
        read(s, "professional_shares", "scenario", sc.professional_shares);
        read(s, "professional_weight", "scenario", sc.professional_weight);
        read(s, "rho_set", "scenario", sc.rho_set);
        read(s, "seed", "scenario", sc.seed);
        read(s, "threads", "scenario", sc.threads);
    }
    if (root.contains("beam")) {
        const auto& b = root["beam"];
        check_keys(b, "beam", {"antenna_diameter_m", "frequency_hz", "edge_attenuation_db", "satellite_altitude_m"});
        auto& bc = cfg.scenario.beam;
        read(b, "antenna_diameter_m", "beam", bc.antenna_diameter_m);
        read(b, "frequency_hz", "beam", bc.frequency_hz);
        read(b, "edge_attenuation_db", "beam", bc.edge_attenuation_db);
        read(b, "satellite_altitude_m", "beam", bc.satellite_altitude_m);
    }
    if (root.contains("tables")) {
        const auto& t = root["tables"];
        check_keys(t, "tables", {"standard", "hierarchical", "weather"});
        if (t.contains("standard")) cfg.standard_table = resolve(base_dir, get<std::string>(t, "standard", "tables"));
        if (t.contains("hierarchical")) {
            cfg.hierarchical_table = resolve(base_dir, get<std::string>(t, "hierarchical", "tables"));
        }
        if (t.contains("weather")) cfg.weather_cdf = resolve(base_dir, get<std::string>(t, "weather", "tables"));
    }
    if (root.contains("pair")) {
        const auto& p = root["pair"];
        check_keys(p, "pair", {"snr1_db", "snr2_db"});
        PairConfig pc;
        read(p, "snr1_db", "pair", pc.snr1_db);
        read(p, "snr2_db", "pair", pc.snr2_db);
        if (!std::isfinite(pc.snr1_db) || !std::isfinite(pc.snr2_db)) throw ConfigError("pair SNRs must be finite");
        cfg.pair = pc;
    }
    if (root.contains("grid")) {
        const auto& g = root["grid"];
        check_keys(g, "grid", {"min_db", "max_db", "step_db"});
        GridConfig gc;
        read(g, "min_db", "grid", gc.min_db);
        read(g, "max_db", "grid", gc.max_db);
        read(g, "step_db", "grid", gc.step_db);
        gc.validate();
        cfg.grid = gc;
    }
    if (root.contains("output_dir")) cfg.output_dir = resolve(base_dir, get<std::string>(root, "output_dir", ""));

    cfg.scenario.validate();
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    return parse_run_config(csv::read_file(path), path.parent_path());
}

std::filesystem::path resolve_config_path(const std::string& name) {
    const std::filesystem::path shipped(HIERMOD_CONFIG_DIR);
    for (const auto& candidate : {std::filesystem::path(name), std::filesystem::path(name + ".json"),
                                  shipped / name, shipped / (name + ".json")}) {
        if (std::filesystem::is_regular_file(candidate)) return candidate;
    }
    throw ConfigError(fmt::format("config '{}' not found", name));
}

} // namespace hiermod
