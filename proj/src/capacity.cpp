#include "hiermod/capacity.hpp"

#include "hiermod/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <fmt/format.h>

namespace hiermod {

namespace {

constexpr double kSymbolTol = 1e-9;

// Symbols to average over, with multiplicity. A constellation invariant under
// a quarter turn (with HE groups mapped onto HE groups) only needs one symbol
// per rotation orbit: circular noise makes the rotated terms identically
// distributed.
struct AveragingPlan {
    std::vector<std::size_t> symbols;
    std::vector<double> weights;
};

AveragingPlan make_plan(const Constellation& c) {
    const std::size_t m = c.size();
    AveragingPlan all;
    for (std::size_t i = 0; i < m; ++i) {
        all.symbols.push_back(i);
        all.weights.push_back(1.0);
    }

    std::vector<std::size_t> rot(m);
    for (std::size_t i = 0; i < m; ++i) {
        const cdouble r = c.symbols[i] * cdouble{0.0, 1.0};
        std::size_t hits = 0;
        for (std::size_t j = 0; j < m; ++j) {
            if (std::abs(r - c.symbols[j]) < kSymbolTol) {
                rot[i] = j;
                ++hits;
            }
        }
        if (hits != 1) return all;
    }
    // HE groups must map consistently.
    std::vector<long> group_map(m, -1);
    for (std::size_t i = 0; i < m; ++i) {
        const auto g = c.he_label(i);
        const auto h = static_cast<long>(c.he_label(rot[i]));
        if (group_map[g] == -1) {
            group_map[g] = h;
        } else if (group_map[g] != h) {
            return all;
        }
    }

    AveragingPlan plan;
    std::vector<bool> seen(m, false);
    for (std::size_t i = 0; i < m; ++i) {
        if (seen[i]) continue;
        double orbit = 0.0;
        for (std::size_t j = i; !seen[j]; j = rot[j]) {
            seen[j] = true;
            orbit += 1.0;
        }
        plan.symbols.push_back(i);
        plan.weights.push_back(orbit);
    }
    return plan;
}

int stream_bits(const Constellation& c, Stream s) {
    switch (s) {
    case Stream::single: return c.bits_per_symbol;
    case Stream::he: return c.he_bits;
    case Stream::le: return c.le_bits();
    }
    return 0;
}

void check_stream(const Constellation& c, Stream s) {
    if (s != Stream::single && !c.hierarchical()) {
        throw DomainError(fmt::format("{} has no {} stream", c.name, to_string(s)));
    }
}

} // namespace

MiEstimator::MiEstimator(MiOptions opts) {
    if (opts.quality < 1) throw DomainError("MI quality must be positive");
    // Rank-1 lattice (k/n, k g/n) with g near n/phi and coprime to n; in two
    // dimensions its error decays close to 1/n against 1/sqrt(n) for
    // independent draws. The random shift keeps the estimate unbiased.
    const std::size_t n = opts.quality;
    auto g = static_cast<std::size_t>(std::llround(static_cast<double>(n) / std::numbers::phi));
    while (std::gcd(g, n) != 1) ++g;
    std::mt19937_64 gen(opts.seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double s1 = uniform(gen);
    const double s2 = uniform(gen);
    noise_.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = std::fmod(static_cast<double>(k) / static_cast<double>(n) + s1, 1.0);
        const double v = std::fmod(static_cast<double>((k * g) % n) / static_cast<double>(n) + s2, 1.0);
        // |z|^2 ~ Exp(1) for CN(0, 1); 1 - u lies in (0, 1].
        noise_.push_back(std::polar(std::sqrt(-std::log(1.0 - u)), 2.0 * std::numbers::pi * v));
    }
}

StreamMi MiEstimator::evaluate(const Constellation& c, double snr_db) const {
    const std::size_t m = c.size();
    const double n0 = std::pow(10.0, -snr_db / 10.0);
    const double sigma = std::sqrt(n0);
    const auto plan = make_plan(c);

    // Group size, in symbols, of each HE label.
    std::vector<double> group_size(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) group_size[c.he_label(j)] += 1.0;

    std::vector<double> a(m), bre(m), bim(m);
    std::vector<char> same(m);
    double he = 0.0;
    double total = 0.0;
    double weight_sum = 0.0;
    const double log2m = std::log2(static_cast<double>(m));

    for (std::size_t p = 0; p < plan.symbols.size(); ++p) {
        const std::size_t i = plan.symbols[p];
        const auto gi = c.he_label(i);
        for (std::size_t j = 0; j < m; ++j) {
            // |y - x_j|^2 - |y - x_i|^2 = |d|^2 + 2 Re(d conj(n)), d = x_i - x_j
            const cdouble d = c.symbols[i] - c.symbols[j];
            a[j] = std::norm(d) / n0;
            bre[j] = 2.0 * d.real() / n0;
            bim[j] = 2.0 * d.imag() / n0;
            same[j] = c.he_label(j) == gi;
        }
        const double log2_group = std::log2(static_cast<double>(m) / group_size[gi]);

        double acc_total = 0.0;
        double acc_he = 0.0;
        for (const auto& z : noise_) {
            const double nre = sigma * z.real();
            const double nim = sigma * z.imag();
            double s_all = 0.0;
            double s_grp = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double e = std::exp(-(a[j] + bre[j] * nre + bim[j] * nim));
                s_all += e;
                if (same[j]) s_grp += e;
            }
            acc_total += log2m - std::log2(s_all);
            acc_he += log2_group + std::log2(s_grp / s_all);
        }
        const double w = plan.weights[p];
        total += w * acc_total / static_cast<double>(noise_.size());
        he += w * acc_he / static_cast<double>(noise_.size());
        weight_sum += w;
    }
    StreamMi out;
    out.total = total / weight_sum;
    out.he = c.hierarchical() ? he / weight_sum : 0.0;
    out.le = out.total - out.he;
    return out;
}

double MiEstimator::evaluate(const Constellation& c, Stream s, double snr_db) const {
    check_stream(c, s);
    return evaluate(c, snr_db).get(s);
}

double stream_mutual_information(const Constellation& c, Stream s, double snr_db, MiOptions opts) {
    return MiEstimator(opts).evaluate(c, s, snr_db);
}

double estimate_threshold(const MiEstimator& mi, const Constellation& c, Stream s, CodeRate rate) {
    check_stream(c, s);
    const double target = stream_bits(c, s) * rate.value();

    double hi = kMaxSnrDb;
    if (mi.evaluate(c, s, hi) < target) {
        throw DomainError(fmt::format("{} {} rate {}: MI stays below {} bit up to {} dB", c.name,
                                      to_string(s), rate.str(), target, kMaxSnrDb));
    }
    double lo = kMinSnrDb;
    if (mi.evaluate(c, s, lo) >= target) return lo;
    while (hi - lo > 0.01) {
        const double mid = 0.5 * (lo + hi);
        if (mi.evaluate(c, s, mid) >= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

double estimate_threshold(const Constellation& c, Stream s, CodeRate rate, MiOptions opts) {
    return estimate_threshold(MiEstimator(opts), c, s, rate);
}

SelectedPair select_pair(double rho_he, const std::vector<CodeRate>& rates, SelectOptions opts) {
    if (rates.empty()) throw DomainError("select_pair needs at least one code rate");
    const auto sol = solution_set(rho_he, opts.n_samples, opts.gamma_cap);
    const MiEstimator mi(opts.mi);

    std::optional<SelectedPair> best;
    for (const auto& pt : sol.curve) {
        const Apsk16Params params{pt.gamma, pt.theta_deg};
        Constellation c;
        try {
            c = build_16apsk(params);
        } catch (const DomainError&) {
            continue;
        }
        double sum = 0.0;
        for (const auto& r : rates) sum += estimate_threshold(mi, c, Stream::he, r);
        const double mean = sum / static_cast<double>(rates.size());
        if (!best || mean < best->mean_he_threshold_db) best = SelectedPair{params, mean};
    }
    if (!best) throw DomainError(fmt::format("no buildable geometry on the rho_he={} curve", rho_he));
    return *best;
}

std::vector<ModCod> estimate_hierarchical_entries(double rho_he, const Apsk16Params& geometry,
                                                  const std::vector<CodeRate>& rates,
                                                  EstimateOptions opts) {
    const auto c = build_16apsk(geometry);
    const MiEstimator mi(opts.mi);
    std::vector<ModCod> out;
    for (Stream s : {Stream::he, Stream::le}) {
        for (const auto& r : rates) {
            ModCod m;
            m.modulation = hierarchical_apsk_id(rho_he);
            m.code_rate = r;
            m.stream = s;
            const double t = estimate_threshold(mi, c, s, r) + opts.implementation_loss_db;
            m.threshold_db = std::round(t * 100.0) / 100.0;
            m.provenance = Provenance::mi_estimated;
            out.push_back(m);
        }
    }
    return out;
}

ThresholdTable estimate_hierarchical_table(const std::vector<double>& rhos,
                                           const std::vector<CodeRate>& rates, EstimateOptions opts) {
    ThresholdTable table;
    for (double rho : rhos) {
        Apsk16Params geometry;
        if (auto adopted = adopted_pair(rho)) {
            geometry = *adopted;
        } else {
            SelectOptions sel;
            sel.mi = opts.mi;
            geometry = select_pair(rho, rates, sel).params;
        }
        table.merge(ThresholdTable(estimate_hierarchical_entries(rho, geometry, rates, opts)));
    }
    return table;
}

} // namespace hiermod
