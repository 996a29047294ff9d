#include "hiermod/channel.hpp"

#include "hiermod/bessel.hpp"
#include "hiermod/csv.hpp"
#include "hiermod/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

namespace hiermod {

void BeamConfig::validate() const {
    if (!std::isfinite(snr_max_db)) throw ConfigError("snr_max_db must be finite");
    if (!(antenna_diameter_m > 0.0)) throw ConfigError("antenna_diameter_m must be > 0");
    if (!(frequency_hz > 0.0)) throw ConfigError("frequency_hz must be > 0");
    if (!(edge_attenuation_db > 0.0)) throw ConfigError("edge_attenuation_db must be > 0");
    if (!(satellite_altitude_m > 0.0)) throw ConfigError("satellite_altitude_m must be > 0");
}

namespace {

double pattern_scale(const BeamConfig& cfg) {
    return std::numbers::pi * cfg.antenna_diameter_m / cfg.wavelength_m();
}

} // namespace

double first_null_angle(const BeamConfig& cfg) {
    const double s = kBesselJ1FirstZero / pattern_scale(cfg);
    if (s >= 1.0) return 0.5 * std::numbers::pi;  // aperture below ~1.2 wavelengths: no null off axis
    return std::asin(s);
}

double pattern_attenuation(double off_axis_rad, const BeamConfig& cfg) {
    const double a = std::abs(off_axis_rad);
    if (a >= first_null_angle(cfg)) {
        throw DomainError(fmt::format("off-axis angle {} rad is at or beyond the first pattern null ({} rad)", a,
                                      first_null_angle(cfg)));
    }
    const double u = std::sin(a) * pattern_scale(cfg);
    return -20.0 * std::log10(airy_amplitude(u));
}

double angle_for_attenuation(double attenuation_db, const BeamConfig& cfg) {
    if (!(attenuation_db >= 0.0)) throw DomainError("attenuation must be >= 0 dB");
    if (attenuation_db == 0.0) return 0.0;
    double lo = 0.0;
    double hi = first_null_angle(cfg);
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (pattern_attenuation(mid, cfg) < attenuation_db) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double edge_angle(const BeamConfig& cfg) { return angle_for_attenuation(cfg.edge_attenuation_db, cfg); }

double ground_radius(double off_axis_rad, const BeamConfig& cfg) {
    return cfg.satellite_altitude_m * std::tan(off_axis_rad);
}

double location_attenuation_cdf(double attenuation_db, const BeamConfig& cfg) {
    if (!(attenuation_db >= 0.0) || attenuation_db > cfg.edge_attenuation_db) {
        throw DomainError(fmt::format("location attenuation {} dB outside [0, {}]", attenuation_db,
                                      cfg.edge_attenuation_db));
    }
    if (attenuation_db == cfg.edge_attenuation_db) return 1.0;
    const double r = ground_radius(angle_for_attenuation(attenuation_db, cfg), cfg);
    const double r_edge = ground_radius(edge_angle(cfg), cfg);
    return std::min(1.0, (r / r_edge) * (r / r_edge));
}

namespace {

// Uniform point on the disk of radius r_edge: r = r_edge sqrt(U).
double location_attenuation_at(const BeamConfig& cfg, double r_edge, std::mt19937_64& rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double r = r_edge * std::sqrt(u);
    // The bisected edge angle may overshoot by an ulp.
    return std::min(pattern_attenuation(std::atan(r / cfg.satellite_altitude_m), cfg), cfg.edge_attenuation_db);
}

} // namespace

double sample_location_attenuation(const BeamConfig& cfg, std::mt19937_64& rng) {
    return location_attenuation_at(cfg, ground_radius(edge_angle(cfg), cfg), rng);
}

WeatherCdf::WeatherCdf(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.empty()) throw DomainError("weather CDF needs at least one breakpoint");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!(p.attenuation_db >= 0.0) || !std::isfinite(p.attenuation_db)) {
            throw DomainError(fmt::format("weather CDF breakpoint {}: attenuation must be finite and >= 0", i));
        }
        if (!(p.probability >= 0.0 && p.probability <= 1.0)) {
            throw DomainError(fmt::format("weather CDF breakpoint {}: probability must lie in [0, 1]", i));
        }
        if (i > 0 && (p.attenuation_db < points_[i - 1].attenuation_db ||
                      p.probability < points_[i - 1].probability)) {
            throw DomainError(fmt::format("weather CDF breakpoint {} decreases", i));
        }
    }
    if (points_.back().probability != 1.0) throw DomainError("weather CDF must end at probability 1");
}

double WeatherCdf::quantile(double u) const {
    if (u < points_.front().probability) return points_.front().attenuation_db;
    for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
        const auto& a = points_[k];
        const auto& b = points_[k + 1];
        if (u < b.probability) {
            const double t = (u - a.probability) / (b.probability - a.probability);
            return a.attenuation_db + t * (b.attenuation_db - a.attenuation_db);
        }
    }
    return points_.back().attenuation_db;
}

WeatherCdf WeatherCdf::clear_sky() { return WeatherCdf({{0.0, 1.0}}); }

WeatherCdf parse_weather_cdf(std::string_view text, const std::string& source) {
    const auto doc = csv::parse(text, source);
    csv::expect_header(doc, {"attenuation_db", "cumulative_probability"});
    if (doc.rows.empty()) throw ParseError(source, doc.header_line, "no breakpoints");
    std::vector<WeatherCdf::Point> pts;
    for (const auto& row : doc.rows) {
        const WeatherCdf::Point p{csv::to_double(row.fields[0], source, row.line),
                                  csv::to_double(row.fields[1], source, row.line)};
        // Per-row checks so errors carry the offending line.
        if (!(p.attenuation_db >= 0.0) || !std::isfinite(p.attenuation_db)) {
            throw ParseError(source, row.line, "attenuation must be finite and >= 0");
        }
        if (!(p.probability >= 0.0 && p.probability <= 1.0)) {
            throw ParseError(source, row.line, "probability must lie in [0, 1]");
        }
        if (!pts.empty() && (p.attenuation_db < pts.back().attenuation_db || p.probability < pts.back().probability)) {
            throw ParseError(source, row.line, "breakpoints must be nondecreasing");
        }
        pts.push_back(p);
    }
    try {
        return WeatherCdf(std::move(pts));
    } catch (const DomainError& e) {
        throw ParseError(source, doc.rows.back().line, e.what());
    }
}

WeatherCdf load_weather_cdf(const std::filesystem::path& path) {
    return parse_weather_cdf(csv::read_file(path), path.string());
}

void write_weather_cdf(std::ostream& out, const WeatherCdf& cdf) {
    out << "attenuation_db,cumulative_probability\n";
    for (const auto& p : cdf.points()) out << csv::num(p.attenuation_db) << ',' << csv::num(p.probability) << '\n';
}

std::filesystem::path default_weather_cdf_path() {
    if (const char* v = std::getenv("HIERMOD_WEATHER_CDF"); v != nullptr && *v != '\0') return v;
    return std::filesystem::path(HIERMOD_DATA_DIR) / "weather_placeholder.csv";
}

double sample_weather(const WeatherCdf& cdf, std::mt19937_64& rng) {
    return cdf.quantile(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
}

std::vector<double> sample_weather(const WeatherCdf& cdf, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> out(count);
    for (auto& x : out) x = sample_weather(cdf, rng);
    return out;
}

std::string_view to_string(TerminalClass c) {
    return c == TerminalClass::personal ? "personal" : "professional";
}

TerminalClass parse_terminal_class(std::string_view s) {
    if (s == "personal") return TerminalClass::personal;
    if (s == "professional") return TerminalClass::professional;
    throw ConfigError(fmt::format("unknown terminal class '{}' (expected personal or professional)", s));
}

void PopulationOptions::validate() const {
    if (n_terminals == 0 || n_terminals % 2 != 0) {
        throw ConfigError(fmt::format("n_receivers must be even and > 0 (got {})", n_terminals));
    }
    if (!(professional_share >= 0.0 && professional_share <= 1.0)) {
        throw ConfigError("professional_share must lie in [0, 1]");
    }
    if (!(professional_weight >= 1.0)) throw ConfigError("professional_weight must be >= 1");
    if (!std::isfinite(professional_offset_db)) throw ConfigError("professional_offset_db must be finite");
}

std::size_t professional_count(const PopulationOptions& opts) {
    // k terminals of weight w serve k w of k w + (n - k) receivers.
    const double n = static_cast<double>(opts.n_terminals);
    const double s = opts.professional_share;
    const double w = opts.professional_weight;
    const double k = s * n / (w - s * (w - 1.0));
    return std::min(opts.n_terminals, static_cast<std::size_t>(std::llround(k)));
}

std::vector<Receiver> generate_population(const PopulationOptions& opts, const BeamConfig& cfg,
                                          const WeatherCdf& weather, std::uint64_t seed) {
    opts.validate();
    cfg.validate();
    const std::size_t n_pro = professional_count(opts);
    const double r_edge = ground_radius(edge_angle(cfg), cfg);
    std::mt19937_64 rng(seed);
    std::vector<Receiver> out(opts.n_terminals);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double location = location_attenuation_at(cfg, r_edge, rng);
        const double rain = sample_weather(weather, rng);
        auto& r = out[i];
        r.snr_db = cfg.snr_max_db - location - rain;
        if (i < n_pro) {
            r.terminal_class = TerminalClass::professional;
            r.weight = opts.professional_weight;
            r.snr_db += opts.professional_offset_db;
        }
    }
    return out;
}

std::vector<Receiver> parse_population(std::string_view text, const std::string& source) {
    const auto doc = csv::parse(text, source);
    csv::expect_header(doc, {"snr_db", "class", "weight"});
    std::vector<Receiver> out;
    for (const auto& row : doc.rows) {
        Receiver r;
        r.snr_db = csv::to_double(row.fields[0], source, row.line);
        try {
            r.terminal_class = parse_terminal_class(row.fields[1]);
        } catch (const ConfigError& e) {
            throw ParseError(source, row.line, e.what());
        }
        r.weight = csv::to_double(row.fields[2], source, row.line);
        if (!std::isfinite(r.snr_db)) throw ParseError(source, row.line, "snr_db must be finite");
        if (!(r.weight >= 1.0)) throw ParseError(source, row.line, "weight must be >= 1");
        out.push_back(r);
    }
    return out;
}

std::vector<Receiver> load_population(const std::filesystem::path& path) {
    return parse_population(csv::read_file(path), path.string());
}

void write_population(std::ostream& out, const std::vector<Receiver>& receivers) {
    out << "snr_db,class,weight\n";
    for (const auto& r : receivers) {
        out << csv::num(r.snr_db) << ',' << to_string(r.terminal_class) << ',' << csv::num(r.weight) << '\n';
    }
}

} // namespace hiermod
