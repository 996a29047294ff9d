#include "hiermod/pairing.hpp"

#include "hiermod/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include <fmt/format.h>

namespace hiermod {

namespace {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

void check_even(std::span<const double> snrs) {
    if (snrs.empty() || snrs.size() % 2 != 0) {
        throw DomainError(fmt::format("pairing needs an even, nonzero number of receivers (got {})", snrs.size()));
    }
}

std::vector<std::size_t> sorted_order(std::span<const double> snrs) {
    std::vector<std::size_t> order(snrs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return snrs[a] < snrs[b]; });
    return order;
}

std::pair<std::size_t, std::size_t> ordered(std::size_t i, std::size_t j) {
    return i < j ? std::pair{i, j} : std::pair{j, i};
}

} // namespace

std::string_view to_string(Strategy s) {
    switch (s) {
    case Strategy::a: return "A";
    case Strategy::b: return "B";
    case Strategy::c: return "C";
    case Strategy::d: return "D";
    }
    return "?";
}

Strategy parse_strategy(std::string_view s) {
    if (s == "A" || s == "a") return Strategy::a;
    if (s == "B" || s == "b") return Strategy::b;
    if (s == "C" || s == "c") return Strategy::c;
    if (s == "D" || s == "d") return Strategy::d;
    throw ConfigError(fmt::format("unknown strategy '{}' (expected A, B, C or D)", s));
}

PairingPlan make_plan(std::span<const double> snrs, Pairs pairs) {
    PairingPlan plan;
    plan.pairs = std::move(pairs);
    if (plan.pairs.empty()) return plan;
    double sum = 0.0;
    for (const auto& [i, j] : plan.pairs) sum += std::abs(snrs[i] - snrs[j]);
    const double n = static_cast<double>(plan.pairs.size());
    plan.delta_avg = sum / n;
    double var = 0.0;
    for (const auto& [i, j] : plan.pairs) {
        const double d = std::abs(snrs[i] - snrs[j]) - plan.delta_avg;
        var += d * d;
    }
    plan.delta_variance = var / n;
    return plan;
}

PairingPlan strategy_a(std::span<const double> snrs) {
    check_even(snrs);
    auto remaining = sorted_order(snrs);  // ascending SNR, then index
    Pairs pairs;
    while (!remaining.empty()) {
        const std::size_t low = remaining.front();
        // Lowest index among the highest SNR, excluding `low` itself.
        const double top = snrs[remaining.back()];
        auto it = std::find_if(remaining.begin() + 1, remaining.end(),
                               [&](std::size_t r) { return snrs[r] == top; });
        const std::size_t high = *it;
        pairs.push_back(ordered(low, high));
        remaining.erase(it);
        remaining.erase(remaining.begin());
    }
    return make_plan(snrs, std::move(pairs));
}

PairingPlan strategy_b(std::span<const double> snrs) {
    check_even(snrs);
    const double delta_max = strategy_a(snrs).delta_avg;

    using Key = std::pair<double, std::size_t>;  // (snr, index)
    std::set<Key> open;
    for (std::size_t i = 0; i < snrs.size(); ++i) open.insert({snrs[i], i});

    Pairs pairs;
    while (!open.empty()) {
        double best_gap = std::numeric_limits<double>::infinity();
        std::pair<std::size_t, std::size_t> best{0, 0};
        auto consider = [&](std::size_t i, std::size_t j) {
            const double gap = std::abs(std::abs(snrs[i] - snrs[j]) - delta_max);
            const auto p = ordered(i, j);
            if (gap < best_gap || (gap == best_gap && p < best)) {
                best_gap = gap;
                best = p;
            }
        };
        // Partner of i: among receivers after i in (snr, index) order, the
        // ones bracketing snr_i + delta_max; within a group of equal SNR the
        // lowest index after i.
        for (auto it = open.begin(); it != open.end(); ++it) {
            const auto [si, i] = *it;
            auto after_i = std::next(it);
            if (after_i == open.end()) break;
            auto first_of = [&](double snr) {
                auto g = open.lower_bound({snr, 0});
                if (g == it || (g != open.end() && *g < *after_i)) g = after_i;
                return g;
            };
            auto up = open.lower_bound({si + delta_max, 0});
            if (up != open.end()) {
                auto g = first_of(up->first);
                if (g != open.end()) consider(i, g->second);
            }
            if (up != after_i && up != open.begin()) {
                auto prev = std::prev(up);
                if (!(*prev < *after_i)) {
                    auto g = first_of(prev->first);
                    consider(i, g->second);
                }
            }
        }
        pairs.push_back(best);
        open.erase({snrs[best.first], best.first});
        open.erase({snrs[best.second], best.second});
    }
    return make_plan(snrs, std::move(pairs));
}

PairingPlan strategy_c(std::span<const double> snrs, std::uint64_t seed) {
    check_even(snrs);
    std::vector<std::size_t> perm(snrs.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 gen(seed);
    std::shuffle(perm.begin(), perm.end(), gen);
    Pairs pairs;
    for (std::size_t k = 0; k < perm.size(); k += 2) pairs.push_back(ordered(perm[k], perm[k + 1]));
    return make_plan(snrs, std::move(pairs));
}

PairingPlan strategy_d(std::span<const double> snrs) {
    check_even(snrs);
    const auto order = sorted_order(snrs);
    Pairs pairs;
    for (std::size_t k = 0; k < order.size(); k += 2) pairs.push_back(ordered(order[k], order[k + 1]));
    return make_plan(snrs, std::move(pairs));
}

PairingPlan pair_receivers(Strategy s, std::span<const double> snrs, std::uint64_t seed) {
    switch (s) {
    case Strategy::a: return strategy_a(snrs);
    case Strategy::b: return strategy_b(snrs);
    case Strategy::c: return strategy_c(snrs, seed);
    case Strategy::d: return strategy_d(snrs);
    }
    throw ConfigError("unknown strategy");
}

std::vector<LevelCount> histogram(std::span<const double> snrs) {
    std::vector<double> sorted(snrs.begin(), snrs.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<LevelCount> out;
    for (double s : sorted) {
        if (out.empty() || out.back().snr_db != s) {
            out.push_back({s, 1});
        } else {
            ++out.back().count;
        }
    }
    return out;
}

double delta_upper_bound(std::span<const LevelCount> levels) {
    std::vector<LevelCount> lv(levels.begin(), levels.end());
    std::sort(lv.begin(), lv.end(), [](const LevelCount& a, const LevelCount& b) { return a.snr_db < b.snr_db; });
    std::size_t total = 0;
    for (const auto& l : lv) total += l.count;
    if (total == 0 || total % 2 != 0) {
        throw DomainError(fmt::format("population size must be even and nonzero (got {})", total));
    }
    double sum = 0.0;
    std::size_t below = 0;
    for (std::size_t i = 0; i + 1 < lv.size(); ++i) {
        below += lv[i].count;
        const auto a = std::min(below, total - below);
        sum += static_cast<double>(a) * (lv[i + 1].snr_db - lv[i].snr_db);
    }
    return sum / static_cast<double>(total / 2);
}

namespace {

struct Search {
    std::span<const double> snrs;
    Objective objective;
    std::vector<bool> used;
    Pairs current;
    Pairs best;
    double best_sum = 0.0;
    bool found = false;

    void run(double sum) {
        const auto first = std::find(used.begin(), used.end(), false);
        if (first == used.end()) {
            const bool better = objective == Objective::max ? sum > best_sum : sum < best_sum;
            if (!found || better) {
                best = current;
                best_sum = sum;
                found = true;
            }
            return;
        }
        const auto i = static_cast<std::size_t>(first - used.begin());
        used[i] = true;
        for (std::size_t j = i + 1; j < used.size(); ++j) {
            if (used[j]) continue;
            used[j] = true;
            current.emplace_back(i, j);
            run(sum + std::abs(snrs[i] - snrs[j]));
            current.pop_back();
            used[j] = false;
        }
        used[i] = false;
    }
};

} // namespace

PairingPlan brute_force_matching(std::span<const double> snrs, Objective objective) {
    check_even(snrs);
    if (snrs.size() > kBruteForceCap) {
        throw DomainError(fmt::format("brute-force matching is capped at {} receivers (got {})", kBruteForceCap,
                                      snrs.size()));
    }
    Search s{snrs, objective, std::vector<bool>(snrs.size(), false), {}, {}, 0.0, false};
    s.run(0.0);
    return make_plan(snrs, std::move(s.best));
}

} // namespace hiermod
