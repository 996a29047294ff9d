// Command-line front end. Exit codes: 0 ok, 2 configuration error,
// 3 degenerate data (a receiver that decodes nothing), 1 anything else.

#include "hiermod/capacity.hpp"
#include "hiermod/channel.hpp"
#include "hiermod/config.hpp"
#include "hiermod/constellation.hpp"
#include "hiermod/csv.hpp"
#include "hiermod/error.hpp"
#include "hiermod/pairing.hpp"
#include "hiermod/rates.hpp"
#include "hiermod/sim.hpp"
#include "hiermod/thresholds.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace hiermod;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDegenerate = 3;

struct Globals {
    std::uint64_t seed = 1;
    bool seed_given = false;
    std::string out_dir = ".";
    std::string config;
};

std::optional<RunConfig> load_config(const Globals& g) {
    if (g.config.empty()) return std::nullopt;
    return load_run_config(resolve_config_path(g.config));
}

fs::path out_path(const Globals& g, const std::optional<RunConfig>& cfg, const std::string& name) {
    fs::path dir = g.out_dir;
    if (g.out_dir == "." && cfg && cfg->output_dir) dir = *cfg->output_dir;
    fs::create_directories(dir);
    return dir / name;
}

void emit(const fs::path& path, const std::string& content) {
    csv::write_file_atomic(path, content);
    std::cout << "wrote " << path.string() << '\n';
}

template <typename F>
std::string render(F&& f) {
    std::ostringstream os;
    f(os);
    return os.str();
}

ThresholdTable load_tables(const std::optional<RunConfig>& cfg) {
    auto table = load_thresholds(cfg && cfg->standard_table ? *cfg->standard_table : default_standard_table_path(),
                                 Provenance::standard);
    table.merge(load_thresholds(
        cfg && cfg->hierarchical_table ? *cfg->hierarchical_table : default_hierarchical_table_path(),
        Provenance::mi_estimated));
    return table;
}

std::string rho_tag(double rho) { return fmt::format("{:.2f}", rho); }

// --- constellation -------------------------------------------------------

struct ConstellationArgs {
    std::vector<double> rhos;
    std::size_t samples = kDefaultCurveSamples;
    double gamma_cap = kDefaultGammaCap;
    std::optional<double> gamma;
    std::optional<double> theta;
    std::optional<double> alpha;
    std::string uniform;
    std::string code_rate;
};

void cmd_constellation(const Globals& g, const ConstellationArgs& a) {
    if (a.rhos.empty() && !a.gamma && !a.theta && !a.alpha && a.uniform.empty()) {
        throw ConfigError("nothing to do: give --rho, --gamma/--theta, --alpha or --uniform");
    }
    if (a.gamma.has_value() != a.theta.has_value()) throw ConfigError("--gamma and --theta go together");
    const auto cfg = load_config(g);

    for (double rho : a.rhos) {
        const auto sol = solution_set(rho, a.samples, a.gamma_cap);
        emit(out_path(g, cfg, "curve_rho" + rho_tag(rho) + ".csv"),
             render([&](std::ostream& os) { write_solution_curve(os, sol); }));
    }
    if (a.gamma) {
        const Apsk16Params p{*a.gamma, *a.theta};
        const auto c = build_16apsk(p);
        std::cout << fmt::format("rho_he={}\n", csv::num(energy_fraction(p)));
        emit(out_path(g, cfg, fmt::format("constellation_16apsk_g{}_t{}.csv", csv::num(p.gamma), csv::num(p.theta_deg))),
             render([&](std::ostream& os) { write_constellation(os, c); }));
    }
    if (a.alpha) {
        const Qam16Params p{*a.alpha};
        const auto c = build_16qam(p);
        std::cout << fmt::format("rho_he={}\n", csv::num(qam16_he_fraction(p)));
        emit(out_path(g, cfg, fmt::format("constellation_16qam_a{}.csv", csv::num(p.alpha))),
             render([&](std::ostream& os) { write_constellation(os, c); }));
    }
    if (!a.uniform.empty()) {
        std::optional<double> rate;
        if (!a.code_rate.empty()) rate = parse_code_rate(a.code_rate).value();
        const auto c = build_uniform(parse_modulation(a.uniform), rate);
        emit(out_path(g, cfg, "constellation_" + a.uniform + ".csv"),
             render([&](std::ostream& os) { write_constellation(os, c); }));
    }
}

// --- thresholds ----------------------------------------------------------

struct ThresholdArgs {
    std::vector<double> rhos{0.75, 0.8, 0.85, 0.9};
    std::string rates;
    std::size_t quality = kDefaultMiQuality;
    std::uint64_t mi_seed = kDefaultMiSeed;
    double loss_db = kDefaultImplementationLossDb;
    std::optional<double> gamma;
    std::optional<double> theta;
    bool select = false;
    std::string output;
};

void cmd_thresholds_estimate(const Globals& g, const ThresholdArgs& a) {
    const auto rates = a.rates.empty() ? standard_code_rates() : parse_code_rates(a.rates);
    if (a.quality < 1000) throw ConfigError("--quality must be >= 1000");
    if (a.gamma.has_value() != a.theta.has_value()) throw ConfigError("--gamma and --theta go together");
    if (a.gamma && a.rhos.size() != 1) throw ConfigError("--gamma/--theta need exactly one --rho");
    EstimateOptions opts;
    opts.mi = {a.quality, a.mi_seed};
    opts.implementation_loss_db = a.loss_db;

    ThresholdTable table;
    for (double rho : a.rhos) {
        Apsk16Params geometry;
        if (a.gamma) {
            geometry = {*a.gamma, *a.theta};
        } else if (auto adopted = adopted_pair(rho); adopted && !a.select) {
            geometry = *adopted;
        } else {
            SelectOptions sel;
            sel.mi = opts.mi;
            geometry = select_pair(rho, rates, sel).params;
        }
        std::cerr << fmt::format("rho_he={} gamma={} theta={}\n", rho_tag(rho), csv::num(geometry.gamma),
                                 csv::num(geometry.theta_deg));
        table.merge(ThresholdTable(estimate_hierarchical_entries(rho, geometry, rates, opts)));
    }
    const auto text = render([&](std::ostream& os) { write_thresholds(os, table); });
    if (a.output.empty()) {
        std::cout << text;
    } else {
        emit(out_path(g, load_config(g), a.output), text);
    }
}

void cmd_thresholds_show(const Globals& g) {
    const auto table = load_tables(load_config(g));
    write_thresholds(std::cout, table);
}

// --- rates ---------------------------------------------------------------

struct PairArgs {
    std::optional<double> snr1;
    std::optional<double> snr2;
};

void cmd_rates_pair(const Globals& g, const PairArgs& a) {
    const auto cfg = load_config(g);
    PairConfig pc = cfg && cfg->pair ? *cfg->pair : PairConfig{};
    if (a.snr1) pc.snr1_db = *a.snr1;
    if (a.snr2) pc.snr2_db = *a.snr2;
    const RateModel model(load_tables(cfg));
    const auto ev = evaluate_pair(pc.snr1_db, pc.snr2_db, model);

    emit(out_path(g, cfg, "rates_pair_points.csv"), render([&](std::ostream& os) {
             os << "r1,r2,source\n";
             for (const auto& p : ev.points) os << csv::num(p.r1) << ',' << csv::num(p.r2) << ',' << p.source << '\n';
         }));
    emit(out_path(g, cfg, "rates_pair_hull.csv"), render([&](std::ostream& os) {
             os << "r1,r2\n";
             for (const auto& p : ev.hull) os << csv::num(p.x) << ',' << csv::num(p.y) << '\n';
         }));
    const auto summary = render([&](std::ostream& os) {
        os << "snr1_db,snr2_db,r_ts,r_hm,gain\n"
           << csv::num(ev.snr1_db) << ',' << csv::num(ev.snr2_db) << ',' << csv::num(ev.r_ts) << ','
           << csv::num(ev.r_hm) << ',' << csv::num(ev.gain) << '\n';
    });
    emit(out_path(g, cfg, "rates_pair_summary.csv"), summary);
    std::cout << summary;
}

struct GridArgs {
    std::optional<double> min;
    std::optional<double> max;
    std::optional<double> step;
};

void cmd_rates_grid(const Globals& g, const GridArgs& a) {
    const auto cfg = load_config(g);
    GridConfig gc = cfg && cfg->grid ? *cfg->grid : GridConfig{};
    if (a.min) gc.min_db = *a.min;
    if (a.max) gc.max_db = *a.max;
    if (a.step) gc.step_db = *a.step;
    const auto values = gc.values();
    const RateModel model(load_tables(cfg));

    double max_gain = 0.0;
    const auto text = render([&](std::ostream& os) {
        os << "snr1_db,snr2_db,r_ts,r_hm,gain\n";
        for (double s1 : values) {
            for (double s2 : values) {
                const auto ev = evaluate_pair(s1, s2, model);
                max_gain = std::max(max_gain, ev.gain);
                os << csv::num(s1) << ',' << csv::num(s2) << ',' << csv::num(ev.r_ts) << ',' << csv::num(ev.r_hm)
                   << ',' << csv::num(ev.gain) << '\n';
            }
        }
    });
    emit(out_path(g, cfg, "rates_grid.csv"), text);
    std::cout << fmt::format("max_gain={}\n", csv::num(max_gain));
}

// --- pairing -------------------------------------------------------------

struct PairingArgs {
    std::string strategy = "A";
    std::string snrs;
};

std::vector<double> read_snrs(const std::string& arg) {
    if (fs::is_regular_file(arg)) {
        const auto text = csv::read_file(arg);
        const auto doc = csv::parse(text, arg);
        if (doc.header == std::vector<std::string>{"snr_db", "class", "weight"}) {
            std::vector<double> out;
            for (const auto& r : parse_population(text, arg)) out.push_back(r.snr_db);
            return out;
        }
        csv::expect_header(doc, {"snr_db"});
        std::vector<double> out;
        for (const auto& row : doc.rows) out.push_back(csv::to_double(row.fields[0], arg, row.line));
        return out;
    }
    std::vector<double> out;
    for (const auto& f : csv::split(arg)) {
        try {
            out.push_back(csv::to_double(f, "--snrs", 0));
        } catch (const ParseError&) {
            throw ConfigError(fmt::format("--snrs: '{}' is neither a file nor a number list", arg));
        }
    }
    return out;
}

void cmd_pairing(const Globals& g, const PairingArgs& a) {
    const auto strategy = parse_strategy(a.strategy);
    const auto snrs = read_snrs(a.snrs);
    if (snrs.empty() || snrs.size() % 2 != 0) {
        throw ConfigError(fmt::format("pairing needs an even, nonzero number of SNRs (got {})", snrs.size()));
    }
    const auto plan = pair_receivers(strategy, snrs, g.seed);
    const auto cfg = load_config(g);
    emit(out_path(g, cfg, fmt::format("pairing_{}.csv", to_string(strategy))), render([&](std::ostream& os) {
             os << "i,j,snr_i_db,snr_j_db,delta_db\n";
             for (const auto& [i, j] : plan.pairs) {
                 os << i << ',' << j << ',' << csv::num(snrs[i]) << ',' << csv::num(snrs[j]) << ','
                    << csv::num(std::abs(snrs[i] - snrs[j])) << '\n';
             }
         }));
    const auto levels = histogram(snrs);
    std::cout << fmt::format("strategy={} delta_avg_db={} delta_variance={} delta_upper_bound_db={}\n",
                             to_string(strategy), csv::num(plan.delta_avg), csv::num(plan.delta_variance),
                             csv::num(delta_upper_bound(levels)));
}

// --- simulate ------------------------------------------------------------

struct SimulateArgs {
    std::string mode;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> receivers;
    std::optional<unsigned> threads;
    bool dump_populations = false;
};

void cmd_simulate(const Globals& g, const SimulateArgs& a) {
    if (g.config.empty()) throw ConfigError("simulate needs --config");
    auto cfg = load_config(g);
    auto& sc = cfg->scenario;
    if (g.seed_given) sc.seed = g.seed;
    if (a.trials) sc.n_trials = *a.trials;
    if (a.receivers) sc.n_receivers = *a.receivers;
    if (a.threads) sc.threads = *a.threads;
    const auto mode = a.mode.empty() ? cfg->mode : parse_scenario_mode(a.mode);
    sc.validate();

    const auto weather = load_weather_cdf(cfg->weather_cdf ? *cfg->weather_cdf : default_weather_cdf_path());
    const auto report = run_scenario(sc, mode, load_tables(cfg), weather);
    const std::string tag(to_string(mode));

    emit(out_path(g, cfg, "simulate_" + tag + "_trials.csv"),
         render([&](std::ostream& os) { write_trials_csv(os, report); }));
    const auto summary = render([&](std::ostream& os) { write_summary_csv(os, report); });
    emit(out_path(g, cfg, "simulate_" + tag + "_summary.csv"), summary);
    emit(out_path(g, cfg, "simulate_" + tag + "_orderings.csv"),
         render([&](std::ostream& os) { write_orderings_csv(os, summarize(report)); }));
    std::cout << summary;

    if (a.dump_populations) {
        const std::vector<double> shares =
            mode == ScenarioMode::homogeneous ? std::vector<double>{0.0} : sc.professional_shares;
        for (double snr : sc.snr_max_db) {
            for (double share : shares) {
                for (std::size_t t = 0; t < sc.n_trials; ++t) {
                    const auto pop = trial_population(sc, weather, snr, share, t);
                    csv::write_file_atomic(
                        out_path(g, cfg, fmt::format("population_snr{}_share{}_trial{}.csv", csv::num(snr),
                                                     csv::num(share), t)),
                        render([&](std::ostream& os) { write_population(os, pop); }));
                }
            }
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical-modulation time sharing for satellite broadcast"};
    app.require_subcommand(1);
    // Global flags are accepted before or after the subcommand.
    app.fallthrough();
    Globals g;
    auto* seed_opt = app.add_option("--seed", g.seed, "Seed for random pairing and simulations");
    app.add_option("--out-dir", g.out_dir, "Directory for output files");
    app.add_option("--config", g.config, "JSON run config (path or shipped preset name)");

    ConstellationArgs ca;
    auto* con = app.add_subcommand("constellation", "Solution curves and constellation symbol files");
    con->add_option("--rho", ca.rhos, "HE energy fraction; emits the (gamma, theta) curve (repeatable)");
    con->add_option("--samples", ca.samples, "Curve samples")->capture_default_str();
    con->add_option("--gamma-cap", ca.gamma_cap, "Upper bound on gamma")->capture_default_str();
    con->add_option("--gamma", ca.gamma, "16-APSK ring ratio");
    con->add_option("--theta", ca.theta, "16-APSK outer half angle (degrees)");
    con->add_option("--alpha", ca.alpha, "Hierarchical 16-QAM ratio");
    con->add_option("--uniform", ca.uniform, "Standard constellation: QPSK, 8PSK or 16APSK");
    con->add_option("--code-rate", ca.code_rate, "Code rate selecting the 16APSK ring ratio");

    ThresholdArgs ta;
    auto* thr = app.add_subcommand("thresholds", "Decoding threshold tables");
    thr->require_subcommand(1);
    auto* est = thr->add_subcommand("estimate", "MI-based HE/LE thresholds of hierarchical 16-APSK");
    est->add_option("--rho", ta.rhos, "HE energy fractions")->capture_default_str();
    est->add_option("--rates", ta.rates, "Comma-separated code rates p/q (default: all eleven)");
    est->add_option("--quality", ta.quality, "Noise draws per symbol")->capture_default_str();
    est->add_option("--mi-seed", ta.mi_seed, "Seed of the MI noise set")->capture_default_str();
    est->add_option("--loss", ta.loss_db, "Implementation loss added to each threshold (dB)")->capture_default_str();
    est->add_option("--gamma", ta.gamma, "Override geometry ring ratio");
    est->add_option("--theta", ta.theta, "Override geometry half angle (degrees)");
    est->add_flag("--select", ta.select, "Select the geometry by minimum mean HE threshold");
    est->add_option("--output", ta.output, "File name under --out-dir (default: stdout)");
    auto* show = thr->add_subcommand("show", "Print the merged threshold table in use");

    PairArgs pa;
    GridArgs ga;
    auto* rates = app.add_subcommand("rates", "Pair rate regions and gain surfaces");
    rates->require_subcommand(1);
    auto* pair = rates->add_subcommand("pair", "Operating points, hull, R_ts, R_hm and gain of one pair");
    pair->add_option("--snr1", pa.snr1, "SNR of the first receiver (dB)");
    pair->add_option("--snr2", pa.snr2, "SNR of the second receiver (dB)");
    auto* grid = rates->add_subcommand("grid", "Gain over a square SNR grid");
    grid->add_option("--min", ga.min, "Lowest SNR (dB)");
    grid->add_option("--max", ga.max, "Highest SNR (dB)");
    grid->add_option("--step", ga.step, "Grid step (dB)");

    PairingArgs pga;
    auto* pairing = app.add_subcommand("pairing", "Pair receivers with strategy A, B, C or D");
    pairing->add_option("--strategy", pga.strategy, "A, B, C or D")->capture_default_str();
    pairing->add_option("--snrs", pga.snrs, "Comma-separated SNRs (dB) or a CSV file")->required();

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "Run a homogeneous or heterogeneous scenario");
    sim->add_option("--mode", sa.mode, "homogeneous or heterogeneous (default: from config)");
    sim->add_option("--trials", sa.trials, "Override the number of trials");
    sim->add_option("--receivers", sa.receivers, "Override the number of receivers");
    sim->add_option("--threads", sa.threads, "Worker threads (0: all cores)");
    sim->add_flag("--dump-populations", sa.dump_populations, "Write every trial population");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }
    g.seed_given = seed_opt->count() > 0;

    try {
        if (*con) cmd_constellation(g, ca);
        else if (*est) cmd_thresholds_estimate(g, ta);
        else if (*show) cmd_thresholds_show(g);
        else if (*pair) cmd_rates_pair(g, pa);
        else if (*grid) cmd_rates_grid(g, ga);
        else if (*pairing) cmd_pairing(g, pga);
        else if (*sim) cmd_simulate(g, sa);
    } catch (const DegenerateError& e) {
        std::string who;
        for (auto r : e.receivers()) who += (who.empty() ? "" : ",") + std::to_string(r);
        std::cerr << "error: " << e.what() << (who.empty() ? "" : " (receivers: " + who + ")") << '\n';
        return kExitDegenerate;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
