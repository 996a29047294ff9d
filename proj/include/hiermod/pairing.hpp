#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace hiermod {

/// Perfect matching of receivers with its SNR-difference statistics (dB).
struct PairingPlan {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    double delta_avg = 0.0;       // mean |SNR_i - SNR_j| over pairs
    double delta_variance = 0.0;  // population variance of the same
};

enum class Strategy { a, b, c, d };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view s);

/// Fills delta_avg / delta_variance for the given pairs.
PairingPlan make_plan(std::span<const double> snrs, std::vector<std::pair<std::size_t, std::size_t>> pairs);

/// Repeatedly pairs the two unmatched receivers with the largest SNR
/// difference (lowest indices on ties). Attains the maximum average
/// difference over all perfect matchings.
PairingPlan strategy_a(std::span<const double> snrs);

/// Greedy pairing whose differences stay as close as possible to the
/// maximum average difference: repeatedly takes the unmatched pair with
/// |diff - delta_max| smallest, lowest indices on ties.
PairingPlan strategy_b(std::span<const double> snrs);

/// Uniformly random perfect matching, reproducible for a seed.
PairingPlan strategy_c(std::span<const double> snrs, std::uint64_t seed);

/// Sorts by SNR and pairs neighbours; minimises the average difference.
PairingPlan strategy_d(std::span<const double> snrs);

PairingPlan pair_receivers(Strategy s, std::span<const double> snrs, std::uint64_t seed = 0);

struct LevelCount {
    double snr_db;
    std::size_t count;
};

/// Distinct SNR levels in ascending order with their multiplicity.
std::vector<LevelCount> histogram(std::span<const double> snrs);

/// (1/N) sum_i min(n_1+..+n_i, n_{i+1}+..+n_m) (SNR_{i+1} - SNR_i) for a
/// population of 2N receivers. Levels may come in any order.
double delta_upper_bound(std::span<const LevelCount> levels);

enum class Objective { max, min };

inline constexpr std::size_t kBruteForceCap = 12;

/// Exact optimum of the average SNR difference by enumerating every perfect
/// matching; at most kBruteForceCap receivers.
PairingPlan brute_force_matching(std::span<const double> snrs, Objective objective);

} // namespace hiermod
