#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hiermod {

using cdouble = std::complex<double>;

/// Hierarchical 16-QAM geometry. `alpha` is the ratio of the inter-quadrant
/// half distance to the intra-quadrant half distance.
struct Qam16Params {
    double alpha = 1.0;
};

/// Hierarchical 16-APSK geometry: ring ratio R2/R1 and the half angle (degrees)
/// between the outer-ring points of one quadrant.
struct Apsk16Params {
    double gamma = 1.0;
    double theta_deg = 0.0;

    void validate() const;
};

enum class Modulation { qpsk, psk8, apsk16 };

std::string_view to_string(Modulation m);
Modulation parse_modulation(std::string_view name);

/// Labeled symbol set with unit mean energy.
///
/// Labels are `bits_per_symbol` wide, most significant bit first. The leading
/// `he_bits` bits form the HE stream (quadrant), the remaining bits the LE
/// stream. Uniform constellations have `he_bits == 0`.
struct Constellation {
    std::string name;
    std::vector<cdouble> symbols;
    std::vector<std::uint32_t> labels;
    int bits_per_symbol = 0;
    int he_bits = 0;

    std::size_t size() const noexcept { return symbols.size(); }
    int le_bits() const noexcept { return bits_per_symbol - he_bits; }
    bool hierarchical() const noexcept { return he_bits > 0; }

    std::uint32_t he_label(std::size_t i) const noexcept { return labels[i] >> le_bits(); }
    std::uint32_t le_label(std::size_t i) const noexcept {
        return labels[i] & ((1u << le_bits()) - 1u);
    }

    double mean_energy() const;
    std::string label_string(std::size_t i) const;
};

struct GammaTheta {
    double gamma;
    double theta_deg;
};

struct EnergySolution {
    double rho_he;
    std::optional<double> gamma_lim;  // nullopt: unbounded
    std::vector<GammaTheta> curve;
};

inline constexpr double kDefaultGammaCap = 5.0;
inline constexpr std::size_t kDefaultCurveSamples = 512;

double energy_fraction(const Apsk16Params& params);

/// cos(theta) as a function of (gamma, rho_he); nondecreasing in gamma.
double cos_theta(double gamma, double rho_he);

double solve_theta(double gamma, double rho_he);
std::optional<double> gamma_limit(double rho_he);

EnergySolution solution_set(double rho_he,
                            std::size_t n_samples = kDefaultCurveSamples,
                            double gamma_cap = kDefaultGammaCap);

/// Geometries adopted for the four standard energy fractions
/// {0.75, 0.8, 0.85, 0.9}; nullopt for any other value.
std::optional<Apsk16Params> adopted_pair(double rho_he);

Constellation build_16apsk(const Apsk16Params& params);
Constellation build_16qam(const Qam16Params& params);

/// HE energy fraction of the hierarchical 16-QAM, (1+a)^2 / ((1+a)^2 + 1).
double qam16_he_fraction(const Qam16Params& params);

/// Hierarchical 8-PSK: two points per quadrant at +/-theta around the diagonal.
/// The half angle is an operator choice; there is no default.
Constellation build_8psk_hierarchical(double theta_psk_deg);

/// Standard (non-hierarchical) constellation. For 16APSK the ring ratio
/// depends on the code rate it is paired with.
Constellation build_uniform(Modulation m, std::optional<double> code_rate = std::nullopt);

/// DVB-S2 16-APSK ring ratio for a code rate in {2/3, 3/4, 4/5, 5/6, 8/9, 9/10}.
double dvbs2_apsk16_ring_ratio(double code_rate);

/// CSV `symbol_index,I,Q,bits`.
void write_constellation(std::ostream& out, const Constellation& c);
/// Reads symbols and labels back; `he_bits` must be supplied by the caller.
Constellation parse_constellation(std::string_view text, const std::string& source, int he_bits);

/// CSV `gamma,theta_deg,rho_he`.
void write_solution_curve(std::ostream& out, const EnergySolution& sol);
std::vector<GammaTheta> parse_solution_curve(std::string_view text, const std::string& source);

} // namespace hiermod
