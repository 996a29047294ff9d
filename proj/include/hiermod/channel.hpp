#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace hiermod {

inline constexpr double kSpeedOfLight = 299'792'458.0;
inline constexpr double kGeostationaryAltitudeM = 35'786'000.0;
inline constexpr double kProfessionalOffsetDb = 5.0;

/// Spot beam of a geostationary satellite with a circular-aperture antenna.
struct BeamConfig {
    double snr_max_db = 10.0;           // clear-sky SNR at beam center
    double antenna_diameter_m = 1.5;
    double frequency_hz = 20e9;
    double edge_attenuation_db = 4.0;   // pattern attenuation at the beam edge
    double satellite_altitude_m = kGeostationaryAltitudeM;

    double wavelength_m() const { return kSpeedOfLight / frequency_hz; }
    /// Throws ConfigError naming the violated constraint.
    void validate() const;
};

/// Off-axis angle (radians) of the first null of the pattern.
double first_null_angle(const BeamConfig& cfg);

/// -20 log10 |2 J1(u) / u| with u = sin(angle) pi D / lambda. Zero on axis,
/// strictly increasing up to the first null. Throws DomainError at or
/// beyond the null.
double pattern_attenuation(double off_axis_rad, const BeamConfig& cfg);

/// Off-axis angle at which the pattern attenuation equals `attenuation_db`
/// (bisection, inverse of pattern_attenuation on [0, null)).
double angle_for_attenuation(double attenuation_db, const BeamConfig& cfg);

/// Beam-edge angle: angle_for_attenuation(cfg.edge_attenuation_db).
double edge_angle(const BeamConfig& cfg);

/// Ground distance from the sub-satellite point, altitude * tan(angle).
double ground_radius(double off_axis_rad, const BeamConfig& cfg);

/// Fraction of the uniformly populated beam disk whose location
/// attenuation is at most `attenuation_db`. Throws DomainError outside
/// [0, edge_attenuation_db].
double location_attenuation_cdf(double attenuation_db, const BeamConfig& cfg);

/// Location attenuation of a point drawn uniformly on the beam disk.
double sample_location_attenuation(const BeamConfig& cfg, std::mt19937_64& rng);

/// Piecewise-linear CDF of weather attenuation.
class WeatherCdf {
public:
    struct Point {
        double attenuation_db;
        double probability;
    };

    WeatherCdf() = default;
    /// Throws DomainError unless attenuations are nonnegative and
    /// nondecreasing, probabilities nondecreasing in [0, 1] ending at 1.
    explicit WeatherCdf(std::vector<Point> points);

    const std::vector<Point>& points() const { return points_; }
    double max_attenuation() const { return points_.back().attenuation_db; }
    /// Inverse CDF: a probability-mass of points()[0].probability sits on
    /// the first breakpoint; linear interpolation in between.
    double quantile(double u) const;

    /// Single breakpoint at 0 dB with probability 1.
    static WeatherCdf clear_sky();

private:
    std::vector<Point> points_{{0.0, 1.0}};
};

WeatherCdf parse_weather_cdf(std::string_view text, const std::string& source);
WeatherCdf load_weather_cdf(const std::filesystem::path& path);
void write_weather_cdf(std::ostream& out, const WeatherCdf& cdf);

/// data/weather_placeholder.csv unless HIERMOD_WEATHER_CDF is set.
std::filesystem::path default_weather_cdf_path();

double sample_weather(const WeatherCdf& cdf, std::mt19937_64& rng);
std::vector<double> sample_weather(const WeatherCdf& cdf, std::size_t count, std::uint64_t seed);

enum class TerminalClass { personal, professional };

std::string_view to_string(TerminalClass c);
TerminalClass parse_terminal_class(std::string_view s);

struct Receiver {
    double snr_db = 0.0;
    TerminalClass terminal_class = TerminalClass::personal;
    double weight = 1.0;  // receivers served by this terminal
};

struct PopulationOptions {
    std::size_t n_terminals = 500;
    double professional_share = 0.0;  // fraction of served receivers behind a professional terminal
    double professional_weight = 1.0;
    double professional_offset_db = kProfessionalOffsetDb;

    void validate() const;
};

/// Number of professional terminals among n so that the share of served
/// receivers behind them is closest to `professional_share`.
std::size_t professional_count(const PopulationOptions& opts);

/// Receivers on the beam disk: SNR = snr_max - location - weather
/// (+ offset for professional terminals, which come first). The same seed
/// gives the same positions and weather draws regardless of the share.
std::vector<Receiver> generate_population(const PopulationOptions& opts, const BeamConfig& cfg,
                                          const WeatherCdf& weather, std::uint64_t seed);

std::vector<Receiver> parse_population(std::string_view text, const std::string& source);
std::vector<Receiver> load_population(const std::filesystem::path& path);
void write_population(std::ostream& out, const std::vector<Receiver>& receivers);

} // namespace hiermod
