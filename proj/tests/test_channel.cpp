#include "hiermod/channel.hpp"
#include "hiermod/error.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace hiermod;

namespace {

// Pattern attenuation from the standard-library Bessel function.
double reference_attenuation(double angle, const BeamConfig& cfg) {
    const double u = std::sin(angle) * std::numbers::pi * cfg.antenna_diameter_m / cfg.wavelength_m();
    if (u == 0.0) return 0.0;
    return -20.0 * std::log10(std::abs(2.0 * std::cyl_bessel_j(1.0, u) / u));
}

double reference_angle(double att_db, const BeamConfig& cfg) {
    double lo = 0.0, hi = 0.01;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (reference_attenuation(mid, cfg) < att_db ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST(Beam, Defaults) {
    const BeamConfig cfg;
    EXPECT_NEAR(cfg.wavelength_m(), 0.0149896229, 1e-10);
    EXPECT_NO_THROW(cfg.validate());
    BeamConfig bad = cfg;
    bad.antenna_diameter_m = 0.0;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = cfg;
    bad.frequency_hz = -1.0;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = cfg;
    bad.edge_attenuation_db = 0.0;
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Beam, PatternShape) {
    const BeamConfig cfg;
    EXPECT_DOUBLE_EQ(pattern_attenuation(0.0, cfg), 0.0);
    const double null = first_null_angle(cfg);
    double prev = -1.0;
    for (int k = 0; k < 1000; ++k) {
        const double a = null * k / 1000.0;
        const double att = pattern_attenuation(a, cfg);
        EXPECT_GT(att, prev);
        EXPECT_NEAR(att, reference_attenuation(a, cfg), 1e-8);
        prev = att;
    }
    EXPECT_THROW(pattern_attenuation(null, cfg), DomainError);
    EXPECT_THROW(pattern_attenuation(null * 1.5, cfg), DomainError);
}

TEST(Beam, EdgeAngle) {
    const BeamConfig cfg;
    const double edge = edge_angle(cfg);
    EXPECT_NEAR(pattern_attenuation(edge, cfg), 4.0, 0.01);
    EXPECT_NEAR(reference_attenuation(edge, cfg), 4.0, 0.01);
    EXPECT_NEAR(edge, reference_angle(4.0, cfg), 1e-9);
    // Roughly 0.3 degrees off axis: a beam of a few hundred km radius.
    EXPECT_GT(ground_radius(edge, cfg), 100e3);
    EXPECT_LT(ground_radius(edge, cfg), 400e3);
    EXPECT_DOUBLE_EQ(angle_for_attenuation(0.0, cfg), 0.0);
    EXPECT_THROW(angle_for_attenuation(-1.0, cfg), DomainError);
}

TEST(Beam, LocationCdfEndpointsAndMonotone) {
    const BeamConfig cfg;
    EXPECT_DOUBLE_EQ(location_attenuation_cdf(0.0, cfg), 0.0);
    EXPECT_DOUBLE_EQ(location_attenuation_cdf(4.0, cfg), 1.0);
    double prev = 0.0;
    for (double a = 0.05; a < 4.0; a += 0.05) {
        const double p = location_attenuation_cdf(a, cfg);
        EXPECT_GT(p, prev);
        prev = p;
    }
    EXPECT_THROW(location_attenuation_cdf(-0.1, cfg), DomainError);
    EXPECT_THROW(location_attenuation_cdf(4.1, cfg), DomainError);
}

TEST(Beam, LocationCdfAgainstDiskAreaSampling) {
    const BeamConfig cfg;
    const double p = location_attenuation_cdf(2.0, cfg);
    EXPECT_GT(p, 0.25);
    EXPECT_LT(p, 0.75);

    // Uniform points on the disk by rejection from the bounding square.
    const double r_edge = cfg.satellite_altitude_m * std::tan(reference_angle(4.0, cfg));
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::size_t inside = 0, hits = 0;
    while (inside < 1'000'000) {
        const double x = u(rng), y = u(rng);
        const double rr = x * x + y * y;
        if (rr > 1.0) continue;
        ++inside;
        const double angle = std::atan(r_edge * std::sqrt(rr) / cfg.satellite_altitude_m);
        if (reference_attenuation(angle, cfg) <= 2.0) ++hits;
    }
    EXPECT_NEAR(static_cast<double>(hits) / 1e6, p, 0.005);
    // Frozen from the oracle above.
    EXPECT_NEAR(p, 0.5207, 0.0005);
}

TEST(Weather, DegenerateAndTwoPoint) {
    const auto clear = WeatherCdf::clear_sky();
    for (double x : sample_weather(clear, 1000, 3)) EXPECT_DOUBLE_EQ(x, 0.0);

    const WeatherCdf two({{0.0, 0.9}, {10.0, 1.0}});
    const auto draws = sample_weather(two, 100000, 5);
    const auto wet = std::count_if(draws.begin(), draws.end(), [](double x) { return x > 0.0; });
    EXPECT_NEAR(static_cast<double>(wet) / 1e5, 0.10, 0.01);
    for (double x : draws) {
        EXPECT_GE(x, 0.0);
        EXPECT_LE(x, 10.0);
    }
    EXPECT_EQ(sample_weather(two, 50, 9), sample_weather(two, 50, 9));
    EXPECT_NE(sample_weather(two, 50, 9), sample_weather(two, 50, 10));
}

TEST(Weather, QuantileInterpolates) {
    const WeatherCdf cdf({{0.0, 0.0}, {1.0, 0.5}, {3.0, 1.0}});
    EXPECT_DOUBLE_EQ(cdf.quantile(0.0), 0.0);
    EXPECT_NEAR(cdf.quantile(0.25), 0.5, 1e-12);
    EXPECT_NEAR(cdf.quantile(0.75), 2.0, 1e-12);
    EXPECT_DOUBLE_EQ(cdf.quantile(1.0), 3.0);
    const auto draws = sample_weather(cdf, 100000, 1);
    const auto below = std::count_if(draws.begin(), draws.end(), [](double x) { return x <= 1.0; });
    EXPECT_NEAR(static_cast<double>(below) / 1e5, 0.5, 0.01);
}

TEST(Weather, Validation) {
    EXPECT_THROW(WeatherCdf(std::vector<WeatherCdf::Point>{}), DomainError);
    EXPECT_THROW(WeatherCdf({{0.0, 0.5}}), DomainError);
    EXPECT_THROW(WeatherCdf({{1.0, 0.5}, {0.5, 1.0}}), DomainError);
    EXPECT_THROW(WeatherCdf({{0.0, 0.6}, {1.0, 0.5}, {2.0, 1.0}}), DomainError);
    EXPECT_THROW(WeatherCdf({{-1.0, 0.0}, {1.0, 1.0}}), DomainError);
}

TEST(Weather, ParseAndWrite) {
    const std::string header = "attenuation_db,cumulative_probability\n";
    const auto cdf = parse_weather_cdf(header + "0,0.2\n1,0.7\n5,1\n", "w.csv");
    ASSERT_EQ(cdf.points().size(), 3u);
    EXPECT_DOUBLE_EQ(cdf.max_attenuation(), 5.0);
    std::ostringstream out;
    write_weather_cdf(out, cdf);
    EXPECT_EQ(out.str(), header + "0,0.2\n1,0.7\n5,1\n");
    try {
        parse_weather_cdf(header + "0,0.2\n1,0.1\n5,1\n", "w.csv");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(parse_weather_cdf(header + "0,0.2\n1,1.5\n", "w.csv"), ParseError);
    EXPECT_THROW(parse_weather_cdf(header + "0,0.2\n1,0.9\n", "w.csv"), ParseError);
    EXPECT_THROW(parse_weather_cdf(header, "w.csv"), ParseError);
    EXPECT_THROW(parse_weather_cdf("a,b\n0,1\n", "w.csv"), ParseError);
}

TEST(Weather, ShippedPlaceholder) {
    const auto cdf = load_weather_cdf(default_weather_cdf_path());
    EXPECT_DOUBLE_EQ(cdf.max_attenuation(), 10.0);
    EXPECT_GE(cdf.quantile(0.5), 0.0);
    EXPECT_LE(cdf.quantile(0.5), 1.0);
}

TEST(Population, ClearSkyMatchesLocationCdf) {
    BeamConfig cfg;
    cfg.snr_max_db = 10.0;
    PopulationOptions opts;
    opts.n_terminals = 20000;
    const auto pop = generate_population(opts, cfg, WeatherCdf::clear_sky(), 8);
    std::vector<double> att;
    for (const auto& r : pop) {
        EXPECT_LE(r.snr_db, 10.0);
        EXPECT_GE(r.snr_db, 6.0);
        EXPECT_EQ(r.terminal_class, TerminalClass::personal);
        att.push_back(10.0 - r.snr_db);
    }
    std::sort(att.begin(), att.end());
    double ks = 0.0;
    const double n = static_cast<double>(att.size());
    for (std::size_t i = 0; i < att.size(); ++i) {
        const double f = location_attenuation_cdf(std::clamp(att[i], 0.0, 4.0), cfg);
        ks = std::max({ks, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
    }
    EXPECT_LT(ks, 0.02);
}

TEST(Population, BoundsWithWeather) {
    BeamConfig cfg;
    cfg.snr_max_db = 13.0;
    const auto weather = load_weather_cdf(default_weather_cdf_path());
    PopulationOptions opts;
    opts.n_terminals = 2000;
    opts.professional_share = 0.3;
    for (const auto& r : generate_population(opts, cfg, weather, 2)) {
        const double top = 13.0 + (r.terminal_class == TerminalClass::professional ? 5.0 : 0.0);
        EXPECT_LE(r.snr_db, top);
        EXPECT_GE(r.snr_db, top - 4.0 - weather.max_attenuation());
    }
}

TEST(Population, ProfessionalShift) {
    BeamConfig cfg;
    const auto weather = load_weather_cdf(default_weather_cdf_path());
    PopulationOptions none, all;
    none.n_terminals = all.n_terminals = 100;
    all.professional_share = 1.0;
    const auto a = generate_population(none, cfg, weather, 77);
    const auto b = generate_population(all, cfg, weather, 77);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(b[i].snr_db, a[i].snr_db + 5.0, 1e-12);
        EXPECT_EQ(b[i].terminal_class, TerminalClass::professional);
        EXPECT_DOUBLE_EQ(b[i].weight, 1.0);
    }
}

TEST(Population, ProfessionalCount) {
    PopulationOptions o;
    o.n_terminals = 500;
    o.professional_share = 0.5;
    EXPECT_EQ(professional_count(o), 250u);
    o.professional_weight = 4.0;
    // k terminals of weight 4 serve half of 4k + (500 - k) receivers: k = 100.
    EXPECT_EQ(professional_count(o), 100u);
    o.professional_share = 0.0;
    EXPECT_EQ(professional_count(o), 0u);
    o.professional_share = 1.0;
    EXPECT_EQ(professional_count(o), 500u);
    o.n_terminals = 3;
    EXPECT_THROW(o.validate(), ConfigError);
}

TEST(Population, CsvRoundTrip) {
    BeamConfig cfg;
    PopulationOptions opts;
    opts.n_terminals = 40;
    opts.professional_share = 0.4;
    opts.professional_weight = 2.0;
    const auto pop = generate_population(opts, cfg, WeatherCdf::clear_sky(), 3);
    std::ostringstream out;
    write_population(out, pop);
    const auto back = parse_population(out.str(), "pop.csv");
    ASSERT_EQ(back.size(), pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        EXPECT_EQ(back[i].snr_db, pop[i].snr_db);
        EXPECT_EQ(back[i].terminal_class, pop[i].terminal_class);
        EXPECT_EQ(back[i].weight, pop[i].weight);
    }
    EXPECT_THROW(parse_population("snr_db,class,weight\n1,alien,1\n", "p"), ParseError);
    EXPECT_THROW(parse_population("snr_db,class,weight\n1,personal,0.5\n", "p"), ParseError);
}
