#pragma once

#include "hiermod/error.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace hiermod {

enum class Stream { single, he, le };

std::string_view to_string(Stream s);
Stream parse_stream(std::string_view s);

/// Code rate p/q kept as a rational so table keys compare exactly.
struct CodeRate {
    int num = 1;
    int den = 2;

    double value() const noexcept { return static_cast<double>(num) / den; }
    std::string str() const;

    friend bool operator==(const CodeRate& a, const CodeRate& b) noexcept {
        return static_cast<long>(a.num) * b.den == static_cast<long>(b.num) * a.den;
    }
    friend bool operator<(const CodeRate& a, const CodeRate& b) noexcept {
        return static_cast<long>(a.num) * b.den < static_cast<long>(b.num) * a.den;
    }
};

CodeRate parse_code_rate(std::string_view s);
std::vector<CodeRate> parse_code_rates(std::string_view comma_list);

/// The eleven LDPC code rates of the standard, 1/4 ... 9/10.
const std::vector<CodeRate>& standard_code_rates();

/// Modulation identifier as it appears in threshold tables: `QPSK`, `8PSK`,
/// `16APSK`, or `16APSK-H<rho>` for the hierarchical 16-APSK with HE energy
/// fraction rho (e.g. `16APSK-H0.80`).
struct ModulationId {
    enum class Family { qpsk, psk8, apsk16, apsk16_hier };

    Family family = Family::qpsk;
    double rho_he = 0.0;

    bool hierarchical() const noexcept { return family == Family::apsk16_hier; }
    std::string str() const;

    friend bool operator==(const ModulationId& a, const ModulationId& b) noexcept {
        return a.family == b.family && (!a.hierarchical() || std::abs(a.rho_he - b.rho_he) < 1e-9);
    }
};

ModulationId parse_modulation_id(std::string_view s);
ModulationId hierarchical_apsk_id(double rho_he);

enum class Provenance { standard, mi_estimated, user_supplied };

std::string_view to_string(Provenance p);

struct ModCod {
    ModulationId modulation;
    CodeRate code_rate;
    Stream stream = Stream::single;
    double threshold_db = 0.0;
    Provenance provenance = Provenance::standard;

    int bits_per_stream() const;
    /// bit/symbol carried by this stream.
    double spectral_efficiency() const { return bits_per_stream() * code_rate.value(); }
};

/// Raised when thresholds of one modulation and stream do not strictly
/// increase with the code rate.
class MonotonicityError : public ParseError {
public:
    using ParseError::ParseError;
};

class ThresholdTable {
public:
    ThresholdTable() = default;
    explicit ThresholdTable(std::vector<ModCod> entries);

    const std::vector<ModCod>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }

    /// Adds or replaces entries sharing (modulation, code rate, stream).
    void merge(const ThresholdTable& other);

    const ModCod* find(const ModulationId& m, const CodeRate& r, Stream s) const;

    /// Energy fractions of the hierarchical modulations present, ascending.
    std::vector<double> hierarchical_rhos() const;

    /// Throws MonotonicityError if some modulation/stream is not increasing.
    void validate() const;

    /// Throws ConfigError unless every standard single-stream modcod is present
    /// and each of the four standard energy fractions has HE and LE entries
    /// for every code rate.
    void check_complete() const;

private:
    std::vector<ModCod> entries_;
};

/// Largest single-stream spectral efficiency decodable at `snr_db`; 0 if none.
double best_single_rate(const ThresholdTable& table, double snr_db);

/// Best rate a hierarchical stream offers at `snr_db`; 0 if none.
double best_stream_rate(const ThresholdTable& table, const ModulationId& m, Stream s, double snr_db);

ThresholdTable load_thresholds(const std::filesystem::path& path,
                               Provenance provenance = Provenance::standard);
ThresholdTable parse_thresholds(std::string_view text, const std::string& source,
                                Provenance provenance = Provenance::standard);
void write_thresholds(std::ostream& out, const ThresholdTable& table);

std::filesystem::path default_standard_table_path();
std::filesystem::path default_hierarchical_table_path();

/// Standard table merged with the hierarchical table. Paths default to the
/// shipped data files; HIERMOD_STANDARD_TABLE and HIERMOD_HIER_TABLE override.
ThresholdTable load_default_tables();

} // namespace hiermod
