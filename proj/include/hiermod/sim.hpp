#pragma once

#include "hiermod/channel.hpp"
#include "hiermod/pairing.hpp"
#include "hiermod/rates.hpp"
#include "hiermod/thresholds.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace hiermod {

struct TrialResult {
    double classical_rate = 0.0;  // equal per-receiver rate, classical time sharing
    double hier_rate = 0.0;       // same with hierarchical modulation inside pairs
    double gain = 0.0;            // hier_rate / classical_rate - 1
    std::vector<std::size_t> excluded;  // receivers that decode no modcod
    std::optional<std::size_t> singleton;  // served alone when the decodable count is odd
};

/// One broadcast round. Receivers that decode nothing are excluded from
/// both schemes. Decodable receivers are paired with `strategy`; with an
/// odd count the median-SNR receiver is served alone. Each group runs at
/// its best weighted equal rate and groups share time so every served
/// receiver gets the same rate. Throws DegenerateError when no receiver
/// decodes anything.
TrialResult run_trial(const std::vector<Receiver>& population, Strategy strategy, const RateModel& model,
                      std::uint64_t pairing_seed = 0);

enum class ScenarioMode { homogeneous, heterogeneous };

std::string_view to_string(ScenarioMode m);
ScenarioMode parse_scenario_mode(std::string_view s);

struct ScenarioConfig {
    std::size_t n_receivers = 500;
    std::size_t n_trials = 100;
    std::vector<double> snr_max_db{7.0, 10.0, 13.0, 15.0, 18.0};
    std::vector<Strategy> strategies{Strategy::a, Strategy::b, Strategy::c, Strategy::d};
    std::vector<double> professional_shares{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    double professional_weight = 1.0;
    std::vector<double> rho_set{0.75, 0.8, 0.85, 0.9};
    BeamConfig beam;  // snr_max_db is overridden per sweep point
    std::uint64_t seed = 1;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const;
};

/// Seeds derived from (seed, trial). Populations depend only on these, so
/// strategies, SNR_max values and shares see the same positions and weather.
std::uint64_t population_seed(std::uint64_t seed, std::size_t trial);
std::uint64_t pairing_seed(std::uint64_t seed, std::size_t trial);

/// Population of one trial at one sweep point (share 0 when homogeneous).
std::vector<Receiver> trial_population(const ScenarioConfig& cfg, const WeatherCdf& weather, double snr_max_db,
                                       double share, std::size_t trial);

/// Drops hierarchical entries whose rho_he is not in `rhos`.
ThresholdTable restrict_rhos(const ThresholdTable& table, const std::vector<double>& rhos);

struct TrialRecord {
    double snr_max_db;
    Strategy strategy;
    double share;
    std::size_t trial;
    TrialResult result;
};

struct SummaryRow {
    double snr_max_db;
    Strategy strategy;
    double share;
    std::size_t trials;
    double mean_gain;
    double min_gain;
    double max_gain;
    double mean_excluded;
};

struct GainReport {
    ScenarioMode mode = ScenarioMode::homogeneous;
    std::vector<TrialRecord> trials;  // sorted by (snr_max, share, strategy, trial)
    std::vector<SummaryRow> summary;

    /// Summary row for one configuration, if present.
    const SummaryRow* find(double snr_max_db, Strategy s, double share = 0.0) const;
};

/// Full sweep. Homogeneous mode uses share 0 only. Deterministic for a
/// fixed config; trials run in parallel and are reduced in trial order.
GainReport run_scenario(const ScenarioConfig& cfg, ScenarioMode mode, const ThresholdTable& table,
                        const WeatherCdf& weather);

/// Mean-gain orderings between strategies for one (snr_max, share).
struct OrderingCheck {
    double snr_max_db;
    double share;
    // Each is empty when one of the two strategies is absent.
    std::optional<bool> a_ge_b;  // within `tie_tolerance`
    std::optional<bool> b_ge_c;
    std::optional<bool> c_ge_d;
    std::optional<bool> a_ge_c;

    bool consistent() const;
};

std::vector<OrderingCheck> summarize(const GainReport& report, double tie_tolerance = 0.005);

void write_trials_csv(std::ostream& out, const GainReport& report);
void write_summary_csv(std::ostream& out, const GainReport& report);
void write_orderings_csv(std::ostream& out, const std::vector<OrderingCheck>& checks);

} // namespace hiermod
