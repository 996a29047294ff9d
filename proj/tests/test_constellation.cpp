#include "hiermod/constellation.hpp"
#include "hiermod/error.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

using namespace hiermod;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Barycenter of the HE group that owns the first-quadrant diagonal point.
// Grouping by label keeps wide outer angles (points crossing an axis) and
// coincident 16-QAM points in their own group.
cdouble quadrant1_barycenter(const Constellation& c) {
    std::size_t anchor = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!(c.symbols[i].real() > 0 && c.symbols[i].imag() > 0)) continue;
        const double diag = (c.symbols[i].real() + c.symbols[i].imag()) / std::abs(c.symbols[i]);
        if (diag > best) {
            best = diag;
            anchor = i;
        }
    }
    cdouble sum{};
    int n = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c.he_label(i) == c.he_label(anchor)) {
            sum += c.symbols[i];
            ++n;
        }
    }
    return sum / static_cast<double>(n);
}

int hamming(std::uint32_t a, std::uint32_t b) { return std::popcount(a ^ b); }

} // namespace

TEST(EnergyFraction, AdoptedGeometries) {
    EXPECT_NEAR(energy_fraction({2.3, 28.4}), 0.8, 0.001);
    EXPECT_NEAR(energy_fraction({1.6, 20.9}), 0.9, 0.002);
}

TEST(EnergyFraction, DirectSubstitutionOutsideSolverDomain) {
    EXPECT_NEAR(energy_fraction({1.0, 90.0}), 0.25, 1e-15);
}

TEST(SolveTheta, UnitRingRatio) {
    EXPECT_NEAR(solve_theta(1.0, 0.8), 38.0, 0.2);
    EXPECT_NEAR(solve_theta(1.0, 0.9), 26.0, 0.3);
    EXPECT_NEAR(solve_theta(1.0, 0.5), std::acos(std::sqrt(2.0) - 1.0) / kDeg, 1e-12);
}

TEST(SolveTheta, RejectsGammaBeyondLimit) {
    const double lim = *gamma_limit(0.9);
    EXPECT_NO_THROW(solve_theta(lim, 0.9));
    EXPECT_THROW(solve_theta(lim * 1.01, 0.9), DomainError);
    EXPECT_THROW(solve_theta(2.0, 0.3), DomainError);
    EXPECT_THROW(solve_theta(0.5, 0.8), DomainError);
}

TEST(GammaLimit, Values) {
    EXPECT_FALSE(gamma_limit(0.75).has_value());
    EXPECT_FALSE(gamma_limit(0.5).has_value());
    EXPECT_NEAR(*gamma_limit(0.9), (3.0 + 4.0 * std::sqrt(0.27)) / 1.8, 1e-12);
    EXPECT_NEAR(*gamma_limit(0.9), 2.822, 0.001);
}

TEST(GammaLimit, MatchesBisectionOnCosTheta) {
    // Independent root of f(gamma, rho) = 1 by bisection.
    for (double rho : {0.76, 0.8, 0.85, 0.9, 0.95}) {
        double lo = 1.0, hi = 1000.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (cos_theta(mid, rho) < 1.0 ? lo : hi) = mid;
        }
        EXPECT_NEAR(*gamma_limit(rho), lo, 1e-9 * lo) << rho;
        EXPECT_NEAR(cos_theta(*gamma_limit(rho), rho), 1.0, 1e-9) << rho;
        EXPECT_NEAR(solve_theta(*gamma_limit(rho), rho), 0.0, 1e-6) << rho;
    }
    EXPECT_NEAR(*gamma_limit(0.8), 9.62, 0.01);
}

TEST(SolutionSet, EndpointsAndCap) {
    const auto s = solution_set(0.8, 2, 5.0);
    ASSERT_EQ(s.curve.size(), 2u);
    EXPECT_DOUBLE_EQ(s.curve[0].gamma, 1.0);
    EXPECT_NEAR(s.curve[0].theta_deg, 38.0, 0.2);
    EXPECT_DOUBLE_EQ(s.curve[1].gamma, 5.0);
    EXPECT_NEAR(energy_fraction({5.0, s.curve[1].theta_deg}), 0.8, 1e-9);

    const auto s9 = solution_set(0.9, 64, 5.0);
    EXPECT_NEAR(s9.curve.back().gamma, *gamma_limit(0.9), 1e-12);
    for (const auto& p : s9.curve) EXPECT_LE(p.gamma, *gamma_limit(0.9) + 1e-12);

    for (const auto& p : solution_set(0.5, 3, 5.0).curve) {
        EXPECT_NEAR(energy_fraction({p.gamma, p.theta_deg}), 0.5, 1e-9);
    }
    EXPECT_THROW(solution_set(0.8, 1, 5.0), DomainError);
}

TEST(SolutionSet, UniformSpacing) {
    const auto s = solution_set(0.7, 9, 5.0);
    for (std::size_t k = 0; k < s.curve.size(); ++k) EXPECT_NEAR(s.curve[k].gamma, 1.0 + 0.5 * k, 1e-12);
}

TEST(EnergyProperties, RoundTripOnGrid) {
    for (int k = 0; k <= 9; ++k) {
        const double rho = 0.5 + 0.05 * k;
        for (const auto& p : solution_set(rho, 512, 5.0).curve) {
            EXPECT_NEAR(energy_fraction({p.gamma, p.theta_deg}), rho, 1e-9) << rho << ' ' << p.gamma;
        }
    }
}

TEST(EnergyProperties, CosThetaNondecreasingInGammaAndBounded) {
    for (double rho = 0.5; rho < 0.999; rho += 0.01) {
        double prev = -2.0;
        for (double g = 1.0; g <= 10.0; g += 0.01) {
            const double f = cos_theta(g, rho);
            EXPECT_GE(f, prev - 1e-15);
            EXPECT_GE(f, std::sqrt(2.0) - 1.0 - 1e-12);
            prev = f;
        }
    }
}

TEST(EnergyProperties, ThetaDecreasesWithRho) {
    for (double g : {1.0, 1.5, 2.0, 2.5}) {
        double prev = 91.0;
        for (double rho = 0.5; rho <= 0.9; rho += 0.05) {
            const double t = solve_theta(g, rho);
            EXPECT_LT(t, prev);
            prev = t;
        }
    }
}

TEST(Build16Apsk, BarycenterIdentity) {
    for (double g : {1.2, 1.6, 2.3, 3.0, 4.5}) {
        for (double t : {5.0, 15.0, 28.4, 40.0, 60.0}) {
            const Apsk16Params p{g, t};
            const auto c = build_16apsk(p);
            EXPECT_NEAR(std::norm(quadrant1_barycenter(c)) / c.mean_energy(), energy_fraction(p), 1e-12);
        }
    }
    const auto c = build_16apsk({2.3, 28.4});
    EXPECT_NEAR(std::abs(quadrant1_barycenter(c)), std::sqrt(0.8), 0.001);
}

TEST(Build16Apsk, Structure) {
    const Apsk16Params p{2.3, 28.4};
    const auto c = build_16apsk(p);
    ASSERT_EQ(c.size(), 16u);
    EXPECT_NEAR(c.mean_energy(), 1.0, 1e-12);
    std::vector<double> radii;
    for (const auto& z : c.symbols) radii.push_back(std::abs(z));
    std::sort(radii.begin(), radii.end());
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(radii[i], radii[0], 1e-12);
    for (int i = 4; i < 16; ++i) EXPECT_NEAR(radii[i], p.gamma * radii[0], 1e-12);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double ang = std::arg(c.symbols[i]) / kDeg;
        const double off = std::remainder(ang - 45.0, 90.0);
        if (std::abs(c.symbols[i]) < 1.5 * radii[0]) {
            EXPECT_NEAR(off, 0.0, 1e-9);
        } else {
            EXPECT_TRUE(std::abs(off) < 1e-9 || std::abs(std::abs(off) - 28.4) < 1e-9) << off;
        }
    }
}

TEST(Build16Apsk, LabelsAndStreams) {
    const auto c = build_16apsk({2.3, 28.4});
    std::set<std::uint32_t> labels(c.labels.begin(), c.labels.end());
    EXPECT_EQ(labels.size(), 16u);
    for (std::size_t i = 0; i < c.size(); ++i) {
        // HE bits pick the quadrant.
        for (std::size_t j = 0; j < c.size(); ++j) {
            const bool same_quadrant = (c.symbols[i].real() > 0) == (c.symbols[j].real() > 0) &&
                                       (c.symbols[i].imag() > 0) == (c.symbols[j].imag() > 0);
            EXPECT_EQ(same_quadrant, c.he_label(i) == c.he_label(j));
        }
        // Neighbouring quadrants differ in one HE bit.
        const cdouble rotated = c.symbols[i] * cdouble(0, 1);
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (std::abs(c.symbols[j] - rotated) < 1e-12) {
                EXPECT_EQ(hamming(c.he_label(i), c.he_label(j)), 1);
            }
        }
    }
    // Gray inside a quadrant: the inner point and the diagonal outer point
    // differ in both LE bits; each off-diagonal outer point is adjacent to both.
    for (std::size_t q = 0; q < 4; ++q) {
        std::uint32_t inner = 0, diag = 0;
        std::vector<std::uint32_t> side;
        for (std::size_t k = 0; k < 4; ++k) {
            const std::size_t i = 4 * q + k;
            const double off = std::remainder(std::arg(c.symbols[i]) / kDeg - 45.0, 90.0);
            if (std::abs(c.symbols[i]) < 0.5) inner = c.le_label(i);
            else if (std::abs(off) < 1e-9) diag = c.le_label(i);
            else side.push_back(c.le_label(i));
        }
        EXPECT_EQ(hamming(inner, diag), 2);
        for (auto s : side) {
            EXPECT_EQ(hamming(s, inner), 1);
            EXPECT_EQ(hamming(s, diag), 1);
        }
    }
}

TEST(Build16Apsk, Degenerate) {
    EXPECT_THROW(build_16apsk({1.0, 0.0}), DomainError);
    EXPECT_THROW(build_16apsk({0.9, 20.0}), DomainError);
    EXPECT_THROW(build_16apsk({2.0, 95.0}), DomainError);
}

TEST(Build16Apsk, UnitRingRatioFortyFive) {
    // With gamma = 1 the middle outer point of each quadrant lands on the
    // inner diagonal point, and at 45 degrees the axis points of adjacent
    // quadrants meet as well: the geometry is rejected.
    EXPECT_THROW(build_16apsk({1.0, 45.0}), DomainError);
    EXPECT_NEAR(energy_fraction({1.0, 45.0}), std::pow(2.0 + std::sqrt(2.0), 2) / 16.0, 1e-12);
}

TEST(Build16Qam, HeFraction) {
    EXPECT_NEAR(qam16_he_fraction({2.0}), 0.9, 1e-12);
    EXPECT_NEAR(qam16_he_fraction({4.0}), 0.962, 0.001);
    EXPECT_NEAR(qam16_he_fraction({0.0}), 0.5, 1e-12);
    for (double a : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const auto c = build_16qam({a});
        EXPECT_NEAR(c.mean_energy(), 1.0, 1e-12);
        EXPECT_NEAR(std::norm(quadrant1_barycenter(c)), qam16_he_fraction({a}), 1e-12);
    }
}

TEST(Build16Qam, UniformAtAlphaOne) {
    const auto c = build_16qam({1.0});
    std::set<std::pair<long, long>> grid;
    const double unit = std::sqrt(10.0);  // mean energy of {±1, ±3}^2 is 10
    for (const auto& z : c.symbols) {
        grid.insert({std::lround(z.real() * unit), std::lround(z.imag() * unit)});
        EXPECT_NEAR(z.real() * unit, std::round(z.real() * unit), 1e-12);
    }
    EXPECT_EQ(grid.size(), 16u);
    for (const auto& [x, y] : grid) {
        EXPECT_TRUE(std::abs(x) == 1 || std::abs(x) == 3);
        EXPECT_TRUE(std::abs(y) == 1 || std::abs(y) == 3);
    }
    EXPECT_THROW(build_16qam({-0.1}), DomainError);
}

TEST(Build8PskHierarchical, Structure) {
    const auto c = build_8psk_hierarchical(15.0);
    ASSERT_EQ(c.size(), 8u);
    EXPECT_NEAR(c.mean_energy(), 1.0, 1e-12);
    EXPECT_EQ(c.he_bits, 2);
    EXPECT_THROW(build_8psk_hierarchical(0.0), DomainError);
    EXPECT_THROW(build_8psk_hierarchical(45.0), DomainError);
}

TEST(BuildUniform, Shapes) {
    const auto q = build_uniform(Modulation::qpsk);
    ASSERT_EQ(q.size(), 4u);
    for (const auto& z : q.symbols) {
        EXPECT_NEAR(std::abs(z), 1.0, 1e-12);
        EXPECT_NEAR(std::abs(std::remainder(std::arg(z) / kDeg - 45.0, 90.0)), 0.0, 1e-9);
    }
    const auto p8 = build_uniform(Modulation::psk8);
    ASSERT_EQ(p8.size(), 8u);
    std::vector<double> ang;
    for (const auto& z : p8.symbols) {
        EXPECT_NEAR(std::abs(z), 1.0, 1e-12);
        ang.push_back(std::arg(z));
    }
    std::sort(ang.begin(), ang.end());
    for (std::size_t i = 1; i < ang.size(); ++i) EXPECT_NEAR(ang[i] - ang[i - 1], std::numbers::pi / 4.0, 1e-12);

    const auto a16 = build_uniform(Modulation::apsk16, 3.0 / 4.0);
    ASSERT_EQ(a16.size(), 16u);
    EXPECT_NEAR(a16.mean_energy(), 1.0, 1e-12);
    std::vector<double> radii;
    for (const auto& z : a16.symbols) radii.push_back(std::abs(z));
    std::sort(radii.begin(), radii.end());
    EXPECT_NEAR(radii[3], radii[0], 1e-12);
    EXPECT_NEAR(radii[4] / radii[0], 2.85, 1e-12);
    EXPECT_NEAR(radii[15], radii[4], 1e-12);

    EXPECT_THROW(parse_modulation("64QAM"), ConfigError);
    EXPECT_THROW(build_uniform(Modulation::apsk16, 0.5), ConfigError);
}

TEST(BuildUniform, GrayNeighbours) {
    for (auto m : {Modulation::qpsk, Modulation::psk8}) {
        const auto c = build_uniform(m);
        for (std::size_t i = 0; i < c.size(); ++i) {
            // Nearest neighbours differ in exactly one bit.
            double dmin = 1e9;
            for (std::size_t j = 0; j < c.size(); ++j) {
                if (j != i) dmin = std::min(dmin, std::abs(c.symbols[i] - c.symbols[j]));
            }
            for (std::size_t j = 0; j < c.size(); ++j) {
                if (j != i && std::abs(std::abs(c.symbols[i] - c.symbols[j]) - dmin) < 1e-9) {
                    EXPECT_EQ(hamming(c.labels[i], c.labels[j]), 1);
                }
            }
        }
    }
}

TEST(AdoptedPair, Table) {
    ASSERT_TRUE(adopted_pair(0.8).has_value());
    EXPECT_DOUBLE_EQ(adopted_pair(0.8)->gamma, 2.3);
    EXPECT_DOUBLE_EQ(adopted_pair(0.75)->theta_deg, 31.5);
    EXPECT_FALSE(adopted_pair(0.7).has_value());
    for (double rho : {0.75, 0.8, 0.85, 0.9}) EXPECT_NEAR(energy_fraction(*adopted_pair(rho)), rho, 0.003);
}

TEST(ConstellationCsv, RoundTrip) {
    const auto c = build_16apsk({2.3, 28.4});
    std::ostringstream os;
    write_constellation(os, c);
    const auto back = parse_constellation(os.str(), "mem", 2);
    ASSERT_EQ(back.size(), c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_EQ(back.symbols[i], c.symbols[i]);
        EXPECT_EQ(back.labels[i], c.labels[i]);
    }
    EXPECT_EQ(back.bits_per_symbol, 4);

    const auto sol = solution_set(0.8, 16, 5.0);
    std::ostringstream cs;
    write_solution_curve(cs, sol);
    const auto curve = parse_solution_curve(cs.str(), "mem");
    ASSERT_EQ(curve.size(), sol.curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        EXPECT_EQ(curve[i].gamma, sol.curve[i].gamma);
        EXPECT_EQ(curve[i].theta_deg, sol.curve[i].theta_deg);
    }
}
