#include "hiermod/constellation.hpp"

#include "hiermod/csv.hpp"
#include "hiermod/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

namespace hiermod {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinSymbolDistance = 1e-9;

double deg2rad(double deg) { return deg * kPi / 180.0; }
double rad2deg(double rad) { return rad * 180.0 / kPi; }

// Quadrant label from the signs of I and Q: Q1=00, Q2=10, Q3=11, Q4=01.
// Adjacent quadrants differ in one bit.
std::uint32_t quadrant_label(cdouble z) {
    const std::uint32_t bi = z.real() < 0.0 ? 1u : 0u;
    const std::uint32_t bq = z.imag() < 0.0 ? 1u : 0u;
    return (bi << 1) | bq;
}

void normalize_energy(Constellation& c) {
    const double es = c.mean_energy();
    const double g = 1.0 / std::sqrt(es);
    for (auto& z : c.symbols) z *= g;
}

void check_distinct(const Constellation& c) {
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t j = i + 1; j < c.size(); ++j) {
            if (std::abs(c.symbols[i] - c.symbols[j]) < kMinSymbolDistance) {
                throw DomainError(fmt::format(
                    "{}: symbols {} and {} coincide", c.name, i, j));
            }
        }
    }
}

} // namespace

void Apsk16Params::validate() const {
    if (!(gamma >= 1.0) || !std::isfinite(gamma)) {
        throw DomainError(fmt::format("gamma must be >= 1 (got {})", gamma));
    }
    if (!(theta_deg >= 0.0 && theta_deg < 90.0)) {
        throw DomainError(fmt::format("theta must lie in [0, 90) degrees (got {})", theta_deg));
    }
}

std::string_view to_string(Modulation m) {
    switch (m) {
    case Modulation::qpsk: return "QPSK";
    case Modulation::psk8: return "8PSK";
    case Modulation::apsk16: return "16APSK";
    }
    return "?";
}

Modulation parse_modulation(std::string_view name) {
    if (name == "QPSK") return Modulation::qpsk;
    if (name == "8PSK") return Modulation::psk8;
    if (name == "16APSK" || name == "16APSK-uniform") return Modulation::apsk16;
    throw ConfigError(fmt::format("unknown modulation '{}'", name));
}

double Constellation::mean_energy() const {
    double s = 0.0;
    for (const auto& z : symbols) s += std::norm(z);
    return s / static_cast<double>(symbols.size());
}

std::string Constellation::label_string(std::size_t i) const {
    std::string out(static_cast<std::size_t>(bits_per_symbol), '0');
    for (int b = 0; b < bits_per_symbol; ++b) {
        if ((labels[i] >> (bits_per_symbol - 1 - b)) & 1u) out[static_cast<std::size_t>(b)] = '1';
    }
    return out;
}

double energy_fraction(const Apsk16Params& p) {
    const double c = std::cos(deg2rad(p.theta_deg));
    const double num = 1.0 + p.gamma * (1.0 + 2.0 * c);
    return num * num / (4.0 * (1.0 + 3.0 * p.gamma * p.gamma));
}

double cos_theta(double gamma, double rho_he) {
    return 0.5 * ((std::sqrt(4.0 * rho_he * (1.0 + 3.0 * gamma * gamma)) - 1.0) / gamma - 1.0);
}

std::optional<double> gamma_limit(double rho_he) {
    if (rho_he <= 0.75) return std::nullopt;
    return (3.0 + 4.0 * std::sqrt(3.0 * rho_he * (1.0 - rho_he))) / (3.0 * (4.0 * rho_he - 3.0));
}

namespace {

void check_rho(double rho_he) {
    if (!(rho_he >= 0.5 && rho_he < 1.0)) {
        throw DomainError(fmt::format("rho_he must be >= 0.5 and < 1 (got {})", rho_he));
    }
}

} // namespace

double solve_theta(double gamma, double rho_he) {
    check_rho(rho_he);
    if (!(gamma >= 1.0)) throw DomainError(fmt::format("gamma must be >= 1 (got {})", gamma));
    double f = cos_theta(gamma, rho_he);
    if (f > 1.0) {
        // Rounding at gamma == gamma_lim can push f a few ulps above 1.
        const auto lim = gamma_limit(rho_he);
        if (lim && gamma <= *lim * (1.0 + 1e-12)) {
            f = 1.0;
        } else {
            throw DomainError(fmt::format(
                "gamma {} exceeds gamma_lim for rho_he {}: no feasible theta", gamma, rho_he));
        }
    }
    return rad2deg(std::acos(f));
}

EnergySolution solution_set(double rho_he, std::size_t n_samples, double gamma_cap) {
    check_rho(rho_he);
    if (n_samples < 2) throw DomainError("solution_set needs at least 2 samples");
    if (!(gamma_cap >= 1.0)) throw DomainError("gamma cap must be >= 1");

    EnergySolution sol{rho_he, gamma_limit(rho_he), {}};
    const double hi = sol.gamma_lim ? std::min(gamma_cap, *sol.gamma_lim) : gamma_cap;
    sol.curve.reserve(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double g = k + 1 == n_samples
                             ? hi
                             : 1.0 + (hi - 1.0) * static_cast<double>(k) / static_cast<double>(n_samples - 1);
        sol.curve.push_back({g, solve_theta(g, rho_he)});
    }
    return sol;
}

std::optional<Apsk16Params> adopted_pair(double rho_he) {
    struct Row {
        double rho, gamma, theta;
    };
    static constexpr std::array<Row, 4> rows{{
        {0.75, 2.8, 31.5},
        {0.80, 2.3, 28.4},
        {0.85, 1.9, 25.1},
        {0.90, 1.6, 20.9},
    }};
    for (const auto& r : rows) {
        if (std::abs(r.rho - rho_he) < 1e-9) return Apsk16Params{r.gamma, r.theta};
    }
    return std::nullopt;
}

Constellation build_16apsk(const Apsk16Params& params) {
    params.validate();
    Constellation c;
    c.name = fmt::format("16APSK-H(gamma={},theta={})", params.gamma, params.theta_deg);
    c.bits_per_symbol = 4;
    c.he_bits = 2;

    const double th = deg2rad(params.theta_deg);
    for (int q = 0; q < 4; ++q) {
        const double base = kPi / 4.0 + q * kPi / 2.0;
        const std::array<cdouble, 4> quad{
            std::polar(1.0, base),
            std::polar(params.gamma, base - th),
            std::polar(params.gamma, base),
            std::polar(params.gamma, base + th),
        };
        for (std::size_t k = 0; k < quad.size(); ++k) {
            const cdouble z = quad[k];
            // In-quadrant label, mirrored across the axes:
            // inner = 11, outer near the I axis = 01, near the Q axis = 10,
            // outer on the diagonal = 00.
            std::uint32_t le = 0;
            if (k == 0) {
                le = 0b11;
            } else if (k != 2) {
                le = std::abs(z.real()) > std::abs(z.imag()) ? 0b01 : 0b10;
            }
            c.symbols.push_back(z);
            c.labels.push_back((quadrant_label(std::polar(1.0, base)) << 2) | le);
        }
    }
    normalize_energy(c);
    check_distinct(c);
    return c;
}

double qam16_he_fraction(const Qam16Params& p) {
    const double r = (1.0 + p.alpha) * (1.0 + p.alpha);
    return r / (r + 1.0);
}

Constellation build_16qam(const Qam16Params& params) {
    if (!(params.alpha >= 0.0) || !std::isfinite(params.alpha)) {
        throw DomainError(fmt::format("alpha must be >= 0 (got {})", params.alpha));
    }
    Constellation c;
    c.name = fmt::format("16QAM-H(alpha={})", params.alpha);
    c.bits_per_symbol = 4;
    c.he_bits = 2;

    // HE QPSK at +/-(d_h + d_l) per axis plus LE QPSK at +/-d_l, with d_l = 1.
    const double he = params.alpha + 1.0;
    for (int q = 0; q < 4; ++q) {
        const double si = (q == 0 || q == 3) ? 1.0 : -1.0;
        const double sq = (q == 0 || q == 1) ? 1.0 : -1.0;
        const std::uint32_t ql = quadrant_label({si, sq});
        for (std::uint32_t le = 0; le < 4; ++le) {
            // LE bit set means the point sits on the inner side of that axis.
            const double di = (le & 0b10) ? -1.0 : 1.0;
            const double dq = (le & 0b01) ? -1.0 : 1.0;
            c.symbols.emplace_back(si * (he + di), sq * (he + dq));
            c.labels.push_back((ql << 2) | le);
        }
    }
    normalize_energy(c);
    return c;
}

Constellation build_8psk_hierarchical(double theta_psk_deg) {
    if (!(theta_psk_deg > 0.0 && theta_psk_deg < 45.0)) {
        throw DomainError(fmt::format("theta_psk must lie in (0, 45) degrees (got {})", theta_psk_deg));
    }
    Constellation c;
    c.name = fmt::format("8PSK-H(theta={})", theta_psk_deg);
    c.bits_per_symbol = 3;
    c.he_bits = 2;
    const double th = deg2rad(theta_psk_deg);
    for (int q = 0; q < 4; ++q) {
        const double base = kPi / 4.0 + q * kPi / 2.0;
        const std::uint32_t ql = quadrant_label(std::polar(1.0, base));
        for (double sign : {-1.0, 1.0}) {
            const cdouble z = std::polar(1.0, base + sign * th);
            const std::uint32_t le = std::abs(z.real()) > std::abs(z.imag()) ? 0u : 1u;
            c.symbols.push_back(z);
            c.labels.push_back((ql << 1) | le);
        }
    }
    return c;
}

double dvbs2_apsk16_ring_ratio(double code_rate) {
    struct Row {
        double rate, gamma;
    };
    static constexpr std::array<Row, 6> rows{{
        {2.0 / 3.0, 3.15},
        {3.0 / 4.0, 2.85},
        {4.0 / 5.0, 2.75},
        {5.0 / 6.0, 2.70},
        {8.0 / 9.0, 2.60},
        {9.0 / 10.0, 2.57},
    }};
    for (const auto& r : rows) {
        if (std::abs(r.rate - code_rate) < 1e-9) return r.gamma;
    }
    throw ConfigError(fmt::format("16APSK is not defined for code rate {}", code_rate));
}

Constellation build_uniform(Modulation m, std::optional<double> code_rate) {
    Constellation c;
    c.name = std::string(to_string(m));
    switch (m) {
    case Modulation::qpsk: {
        c.bits_per_symbol = 2;
        // 00 -> pi/4, 01 -> -pi/4, 10 -> 3pi/4, 11 -> -3pi/4
        constexpr std::array<double, 4> ang{1.0, 7.0, 3.0, 5.0};
        for (std::uint32_t l = 0; l < 4; ++l) {
            c.symbols.push_back(std::polar(1.0, ang[l] * kPi / 4.0));
            c.labels.push_back(l);
        }
        break;
    }
    case Modulation::psk8: {
        c.bits_per_symbol = 3;
        constexpr std::array<double, 8> ang{1.0, 0.0, 4.0, 5.0, 2.0, 7.0, 3.0, 6.0};
        for (std::uint32_t l = 0; l < 8; ++l) {
            c.symbols.push_back(std::polar(1.0, ang[l] * kPi / 4.0));
            c.labels.push_back(l);
        }
        break;
    }
    case Modulation::apsk16: {
        c.bits_per_symbol = 4;
        const double gamma = dvbs2_apsk16_ring_ratio(code_rate.value_or(3.0 / 4.0));
        c.name += fmt::format("(gamma={})", gamma);
        // Outer ring (labels 0..11) then inner ring (12..15).
        constexpr std::array<double, 12> outer{3.0, -3.0, 9.0, -9.0, 1.0, -1.0,
                                               11.0, -11.0, 5.0, -5.0, 7.0, -7.0};
        for (std::uint32_t l = 0; l < 12; ++l) {
            c.symbols.push_back(std::polar(gamma, outer[l] * kPi / 12.0));
            c.labels.push_back(l);
        }
        constexpr std::array<double, 4> inner{1.0, -1.0, 3.0, -3.0};
        for (std::uint32_t l = 0; l < 4; ++l) {
            c.symbols.push_back(std::polar(1.0, inner[l] * kPi / 4.0));
            c.labels.push_back(12 + l);
        }
        break;
    }
    }
    normalize_energy(c);
    return c;
}

void write_constellation(std::ostream& out, const Constellation& c) {
    out << "symbol_index,I,Q,bits\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
        out << i << ',' << csv::num(c.symbols[i].real()) << ',' << csv::num(c.symbols[i].imag()) << ','
            << c.label_string(i) << '\n';
    }
}

Constellation parse_constellation(std::string_view text, const std::string& source, int he_bits) {
    const auto doc = csv::parse(text, source);
    csv::expect_header(doc, {"symbol_index", "I", "Q", "bits"});
    Constellation c;
    c.name = source;
    c.he_bits = he_bits;
    for (const auto& row : doc.rows) {
        if (csv::to_long(row.fields[0], source, row.line) != static_cast<long>(c.size())) {
            throw ParseError(source, row.line, "symbol_index out of sequence");
        }
        const auto& bits = row.fields[3];
        if (bits.empty() || bits.find_first_not_of("01") != std::string::npos) {
            throw ParseError(source, row.line, "bits must be a nonempty 0/1 string");
        }
        if (c.bits_per_symbol == 0) c.bits_per_symbol = static_cast<int>(bits.size());
        if (static_cast<int>(bits.size()) != c.bits_per_symbol) {
            throw ParseError(source, row.line, "labels differ in width");
        }
        c.symbols.emplace_back(csv::to_double(row.fields[1], source, row.line),
                               csv::to_double(row.fields[2], source, row.line));
        c.labels.push_back(static_cast<std::uint32_t>(std::stoul(bits, nullptr, 2)));
    }
    if (c.symbols.empty()) throw ParseError(source, doc.header_line, "no symbols");
    if (he_bits < 0 || he_bits > c.bits_per_symbol) throw ParseError(source, doc.header_line, "bad HE width");
    return c;
}

void write_solution_curve(std::ostream& out, const EnergySolution& sol) {
    out << "gamma,theta_deg,rho_he\n";
    for (const auto& p : sol.curve) {
        out << csv::num(p.gamma) << ',' << csv::num(p.theta_deg) << ',' << csv::num(sol.rho_he) << '\n';
    }
}

std::vector<GammaTheta> parse_solution_curve(std::string_view text, const std::string& source) {
    const auto doc = csv::parse(text, source);
    csv::expect_header(doc, {"gamma", "theta_deg", "rho_he"});
    std::vector<GammaTheta> out;
    for (const auto& row : doc.rows) {
        out.push_back({csv::to_double(row.fields[0], source, row.line),
                       csv::to_double(row.fields[1], source, row.line)});
    }
    return out;
}

} // namespace hiermod
