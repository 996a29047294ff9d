#include "hiermod/sim.hpp"

#include "hiermod/csv.hpp"
#include "hiermod/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include <fmt/format.h>

namespace hiermod {

namespace {

// splitmix64 finalizer.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Rate of one group: the pair's weighted equal rate, or a lone receiver's
// rate per served receiver.
double group_rate(const std::vector<Receiver>& pop, std::size_t i, std::size_t j, const RateModel& model) {
    if (pop[i].snr_db > pop[j].snr_db) std::swap(i, j);
    const auto& lo = pop[i];
    const auto& hi = pop[j];
    const auto points = model.operating_points(lo.snr_db, hi.snr_db);
    // Time sharing of the single-receiver points is always feasible.
    const double classical = 1.0 / (lo.weight / model.best_single(lo.snr_db) + hi.weight / model.best_single(hi.snr_db));
    return std::max(weighted_rate_point(points, lo.weight, hi.weight), classical);
}

} // namespace

TrialResult run_trial(const std::vector<Receiver>& population, Strategy strategy, const RateModel& model,
                      std::uint64_t seed) {
    TrialResult out;
    std::vector<std::size_t> ok;
    std::vector<double> rates;
    std::vector<double> weights;
    for (std::size_t i = 0; i < population.size(); ++i) {
        const double r = model.best_single(population[i].snr_db);
        if (r > 0.0) {
            ok.push_back(i);
            rates.push_back(r);
            weights.push_back(population[i].weight);
        } else {
            out.excluded.push_back(i);
        }
    }
    if (ok.empty()) throw DegenerateError("no receiver decodes any modcod", out.excluded);

    out.classical_rate = ts_rate_n(rates, weights).per_receiver_rate;

    double inv_sum = 0.0;
    if (ok.size() % 2 != 0) {
        std::vector<std::size_t> by_snr = ok;
        std::stable_sort(by_snr.begin(), by_snr.end(), [&](std::size_t a, std::size_t b) {
            return population[a].snr_db < population[b].snr_db;
        });
        const std::size_t median = by_snr[by_snr.size() / 2];
        out.singleton = median;
        inv_sum += population[median].weight / model.best_single(population[median].snr_db);
        ok.erase(std::find(ok.begin(), ok.end(), median));
    }
    if (!ok.empty()) {
        std::vector<double> snrs;
        snrs.reserve(ok.size());
        for (auto i : ok) snrs.push_back(population[i].snr_db);
        const auto plan = pair_receivers(strategy, snrs, seed);
        for (const auto& [a, b] : plan.pairs) inv_sum += 1.0 / group_rate(population, ok[a], ok[b], model);
    }
    out.hier_rate = 1.0 / inv_sum;
    // Every group rate dominates its classical share, so the ratio is >= 1
    // up to rounding in the harmonic sums.
    out.gain = std::max(0.0, out.hier_rate / out.classical_rate - 1.0);
    return out;
}

std::string_view to_string(ScenarioMode m) {
    return m == ScenarioMode::homogeneous ? "homogeneous" : "heterogeneous";
}

ScenarioMode parse_scenario_mode(std::string_view s) {
    if (s == "homogeneous") return ScenarioMode::homogeneous;
    if (s == "heterogeneous") return ScenarioMode::heterogeneous;
    throw ConfigError(fmt::format("unknown mode '{}' (expected homogeneous or heterogeneous)", s));
}

void ScenarioConfig::validate() const {
    if (n_receivers == 0 || n_receivers % 2 != 0) {
        throw ConfigError(fmt::format("n_receivers must be even and > 0 (got {})", n_receivers));
    }
    if (n_trials < 1) throw ConfigError("n_trials must be >= 1");
    if (snr_max_db.empty()) throw ConfigError("snr_max_db must list at least one value");
    for (double s : snr_max_db) {
        if (!std::isfinite(s)) throw ConfigError("snr_max_db values must be finite");
    }
    if (strategies.empty()) throw ConfigError("strategies must list at least one of A, B, C, D");
    for (double s : professional_shares) {
        if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("professional shares must lie in [0, 1]");
    }
    if (!(professional_weight >= 1.0)) throw ConfigError("professional_weight must be >= 1");
    for (double r : rho_set) {
        if (!(r >= 0.5 && r < 1.0)) throw ConfigError("rho_he values must lie in [0.5, 1)");
    }
    beam.validate();
}

std::uint64_t population_seed(std::uint64_t seed, std::size_t trial) {
    return mix(mix(seed) ^ (2 * static_cast<std::uint64_t>(trial)));
}

std::uint64_t pairing_seed(std::uint64_t seed, std::size_t trial) {
    return mix(mix(seed) ^ (2 * static_cast<std::uint64_t>(trial) + 1));
}

std::vector<Receiver> trial_population(const ScenarioConfig& cfg, const WeatherCdf& weather, double snr_max_db,
                                       double share, std::size_t trial) {
    PopulationOptions opts;
    opts.n_terminals = cfg.n_receivers;
    opts.professional_share = share;
    opts.professional_weight = cfg.professional_weight;
    BeamConfig beam = cfg.beam;
    beam.snr_max_db = snr_max_db;
    return generate_population(opts, beam, weather, population_seed(cfg.seed, trial));
}

ThresholdTable restrict_rhos(const ThresholdTable& table, const std::vector<double>& rhos) {
    std::vector<ModCod> kept;
    for (const auto& e : table.entries()) {
        if (e.modulation.hierarchical() &&
            std::none_of(rhos.begin(), rhos.end(), [&](double r) { return std::abs(r - e.modulation.rho_he) < 1e-9; })) {
            continue;
        }
        kept.push_back(e);
    }
    return ThresholdTable(std::move(kept));
}

const SummaryRow* GainReport::find(double snr_max_db, Strategy s, double share) const {
    for (const auto& r : summary) {
        if (r.snr_max_db == snr_max_db && r.strategy == s && r.share == share) return &r;
    }
    return nullptr;
}

namespace {

struct Job {
    double snr_max_db;
    double share;
    std::size_t trial;
};

} // namespace

GainReport run_scenario(const ScenarioConfig& cfg, ScenarioMode mode, const ThresholdTable& table,
                        const WeatherCdf& weather) {
    cfg.validate();
    const RateModel model(restrict_rhos(table, cfg.rho_set));
    const std::vector<double> shares =
        mode == ScenarioMode::homogeneous ? std::vector<double>{0.0} : cfg.professional_shares;
    if (shares.empty()) throw ConfigError("heterogeneous mode needs at least one professional share");

    std::vector<Job> jobs;
    for (double snr : cfg.snr_max_db) {
        for (double share : shares) {
            for (std::size_t t = 0; t < cfg.n_trials; ++t) jobs.push_back({snr, share, t});
        }
    }
    const std::size_t n_strat = cfg.strategies.size();
    std::vector<TrialResult> results(jobs.size() * n_strat);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) {
            try {
                const auto& job = jobs[k];
                const auto pop = trial_population(cfg, weather, job.snr_max_db, job.share, job.trial);
                for (std::size_t s = 0; s < n_strat; ++s) {
                    results[k * n_strat + s] =
                        run_trial(pop, cfg.strategies[s], model, pairing_seed(cfg.seed, job.trial));
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = jobs.size();
            }
        }
    };
    unsigned n_threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, jobs.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);

    GainReport report;
    report.mode = mode;
    for (double snr : cfg.snr_max_db) {
        for (double share : shares) {
            for (std::size_t s = 0; s < n_strat; ++s) {
                SummaryRow row{snr, cfg.strategies[s], share, 0, 0.0, std::numeric_limits<double>::infinity(),
                               -std::numeric_limits<double>::infinity(), 0.0};
                for (std::size_t k = 0; k < jobs.size(); ++k) {
                    if (jobs[k].snr_max_db != snr || jobs[k].share != share) continue;
                    const auto& r = results[k * n_strat + s];
                    report.trials.push_back({snr, cfg.strategies[s], share, jobs[k].trial, r});
                    ++row.trials;
                    row.mean_gain += r.gain;
                    row.min_gain = std::min(row.min_gain, r.gain);
                    row.max_gain = std::max(row.max_gain, r.gain);
                    row.mean_excluded += static_cast<double>(r.excluded.size());
                }
                row.mean_gain /= static_cast<double>(row.trials);
                row.mean_excluded /= static_cast<double>(row.trials);
                report.summary.push_back(row);
            }
        }
    }
    return report;
}

bool OrderingCheck::consistent() const {
    for (const auto& c : {a_ge_b, b_ge_c, c_ge_d, a_ge_c}) {
        if (c && !*c) return false;
    }
    return true;
}

std::vector<OrderingCheck> summarize(const GainReport& report, double tie_tolerance) {
    std::vector<OrderingCheck> out;
    for (const auto& row : report.summary) {
        const bool seen = std::any_of(out.begin(), out.end(), [&](const OrderingCheck& c) {
            return c.snr_max_db == row.snr_max_db && c.share == row.share;
        });
        if (seen) continue;
        OrderingCheck c{row.snr_max_db, row.share, {}, {}, {}, {}};
        auto mean = [&](Strategy s) -> std::optional<double> {
            if (const auto* r = report.find(row.snr_max_db, s, row.share)) return r->mean_gain;
            return std::nullopt;
        };
        auto ge = [](std::optional<double> x, std::optional<double> y, double tol) -> std::optional<bool> {
            if (!x || !y) return std::nullopt;
            return *x + tol >= *y;
        };
        const auto a = mean(Strategy::a);
        const auto b = mean(Strategy::b);
        const auto cc = mean(Strategy::c);
        const auto d = mean(Strategy::d);
        c.a_ge_b = ge(a, b, tie_tolerance);
        c.b_ge_c = ge(b, cc, 0.0);
        c.c_ge_d = ge(cc, d, 0.0);
        c.a_ge_c = ge(a, cc, 0.0);
        out.push_back(c);
    }
    return out;
}

void write_trials_csv(std::ostream& out, const GainReport& report) {
    out << "snr_max_db,strategy,share,trial,classical_rate,hier_rate,gain\n";
    for (const auto& t : report.trials) {
        out << csv::num(t.snr_max_db) << ',' << to_string(t.strategy) << ',' << csv::num(t.share) << ','
            << t.trial << ',' << csv::num(t.result.classical_rate) << ',' << csv::num(t.result.hier_rate) << ','
            << csv::num(t.result.gain) << '\n';
    }
}

void write_summary_csv(std::ostream& out, const GainReport& report) {
    out << "snr_max_db,strategy,share,trials,mean_gain,min_gain,max_gain,mean_excluded\n";
    for (const auto& r : report.summary) {
        out << csv::num(r.snr_max_db) << ',' << to_string(r.strategy) << ',' << csv::num(r.share) << ','
            << r.trials << ',' << csv::num(r.mean_gain) << ',' << csv::num(r.min_gain) << ','
            << csv::num(r.max_gain) << ',' << csv::num(r.mean_excluded) << '\n';
    }
}

void write_orderings_csv(std::ostream& out, const std::vector<OrderingCheck>& checks) {
    auto cell = [](const std::optional<bool>& b) -> std::string_view {
        if (!b) return "na";
        return *b ? "true" : "false";
    };
    out << "snr_max_db,share,a_ge_b,b_ge_c,c_ge_d,a_ge_c,consistent\n";
    for (const auto& c : checks) {
        out << csv::num(c.snr_max_db) << ',' << csv::num(c.share) << ',' << cell(c.a_ge_b) << ',' << cell(c.b_ge_c)
            << ',' << cell(c.c_ge_d) << ',' << cell(c.a_ge_c) << ',' << (c.consistent() ? "true" : "false")
            << '\n';
    }
}

} // namespace hiermod
