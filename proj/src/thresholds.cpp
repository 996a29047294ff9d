#include "hiermod/thresholds.hpp"

#include "hiermod/csv.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

namespace hiermod {

std::string_view to_string(Stream s) {
    switch (s) {
    case Stream::single: return "single";
    case Stream::he: return "HE";
    case Stream::le: return "LE";
    }
    return "?";
}

Stream parse_stream(std::string_view s) {
    if (s == "single") return Stream::single;
    if (s == "HE" || s == "he") return Stream::he;
    if (s == "LE" || s == "le") return Stream::le;
    throw ConfigError(fmt::format("unknown stream '{}' (expected single, HE or LE)", s));
}

std::string CodeRate::str() const { return fmt::format("{}/{}", num, den); }

CodeRate parse_code_rate(std::string_view s) {
    s = csv::trim(s);
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) throw ConfigError(fmt::format("code rate '{}' is not p/q", s));
    CodeRate r;
    try {
        r.num = static_cast<int>(csv::to_long(s.substr(0, slash), "code rate", 0));
        r.den = static_cast<int>(csv::to_long(s.substr(slash + 1), "code rate", 0));
    } catch (const ParseError&) {
        throw ConfigError(fmt::format("code rate '{}' is not p/q", s));
    }
    if (r.num <= 0 || r.den <= 0 || r.num >= r.den) {
        throw ConfigError(fmt::format("code rate '{}' must lie in (0, 1)", s));
    }
    return r;
}

std::vector<CodeRate> parse_code_rates(std::string_view comma_list) {
    std::vector<CodeRate> out;
    for (const auto& f : csv::split(comma_list)) out.push_back(parse_code_rate(f));
    if (out.empty()) throw ConfigError("empty code rate list");
    return out;
}

const std::vector<CodeRate>& standard_code_rates() {
    static const std::vector<CodeRate> rates{{1, 4}, {1, 3}, {2, 5}, {1, 2}, {3, 5}, {2, 3},
                                             {3, 4}, {4, 5}, {5, 6}, {8, 9}, {9, 10}};
    return rates;
}

std::string ModulationId::str() const {
    switch (family) {
    case Family::qpsk: return "QPSK";
    case Family::psk8: return "8PSK";
    case Family::apsk16: return "16APSK";
    case Family::apsk16_hier: return fmt::format("16APSK-H{:.2f}", rho_he);
    }
    return "?";
}

ModulationId hierarchical_apsk_id(double rho_he) {
    return {ModulationId::Family::apsk16_hier, rho_he};
}

ModulationId parse_modulation_id(std::string_view s) {
    using F = ModulationId::Family;
    if (s == "QPSK") return {F::qpsk, 0.0};
    if (s == "8PSK") return {F::psk8, 0.0};
    if (s == "16APSK") return {F::apsk16, 0.0};
    constexpr std::string_view prefix = "16APSK-H";
    if (s.starts_with(prefix)) {
        double rho = 0.0;
        try {
            rho = csv::to_double(s.substr(prefix.size()), "modulation", 0);
        } catch (const ParseError&) {
            throw ConfigError(fmt::format("bad hierarchical modulation id '{}'", s));
        }
        if (!(rho >= 0.5 && rho < 1.0)) {
            throw ConfigError(fmt::format("'{}': rho_he must lie in [0.5, 1)", s));
        }
        return {F::apsk16_hier, rho};
    }
    throw ConfigError(fmt::format("unknown modulation '{}'", s));
}

std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::standard: return "standard-ingested";
    case Provenance::mi_estimated: return "mi-estimated";
    case Provenance::user_supplied: return "user-supplied";
    }
    return "?";
}

int ModCod::bits_per_stream() const {
    using F = ModulationId::Family;
    switch (modulation.family) {
    case F::qpsk: return 2;
    case F::psk8: return 3;
    case F::apsk16: return 4;
    case F::apsk16_hier: return 2;
    }
    return 0;
}

namespace {

bool same_key(const ModCod& a, const ModCod& b) {
    return a.modulation == b.modulation && a.code_rate == b.code_rate && a.stream == b.stream;
}

void check_entry(const ModCod& m, const std::string& source, std::size_t line) {
    if (!std::isfinite(m.threshold_db)) throw ParseError(source, line, "threshold must be finite");
    if (m.modulation.hierarchical() == (m.stream == Stream::single)) {
        throw ParseError(source, line,
                         fmt::format("stream {} does not match modulation {}", to_string(m.stream),
                                     m.modulation.str()));
    }
}

// Checks strict increase of thresholds with code rate inside each
// (modulation, stream) group. `lines` parallels `entries` (0 when unknown).
void check_monotone(const std::vector<ModCod>& entries, const std::vector<std::size_t>& lines,
                    const std::string& source) {
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return entries[a].code_rate < entries[b].code_rate;
    });
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const auto& hi = entries[order[oi]];
        for (std::size_t oj = 0; oj < oi; ++oj) {
            const auto& lo = entries[order[oj]];
            if (!(lo.modulation == hi.modulation) || lo.stream != hi.stream) continue;
            const bool dup = lo.code_rate == hi.code_rate;
            if (dup || !(lo.threshold_db < hi.threshold_db)) {
                const auto line = std::max(lines[order[oi]], lines[order[oj]]);
                throw MonotonicityError(
                    source, line,
                    dup ? fmt::format("duplicate entry {} {} {}", hi.modulation.str(), hi.code_rate.str(),
                                      to_string(hi.stream))
                        : fmt::format("{} {}: threshold of rate {} ({} dB) is not below rate {} ({} dB)",
                                      hi.modulation.str(), to_string(hi.stream), lo.code_rate.str(),
                                      lo.threshold_db, hi.code_rate.str(), hi.threshold_db));
            }
        }
    }
}

} // namespace

ThresholdTable::ThresholdTable(std::vector<ModCod> entries) : entries_(std::move(entries)) {
    validate();
}

void ThresholdTable::validate() const {
    for (const auto& e : entries_) check_entry(e, "threshold table", 0);
    check_monotone(entries_, std::vector<std::size_t>(entries_.size(), 0), "threshold table");
}

void ThresholdTable::merge(const ThresholdTable& other) {
    for (const auto& e : other.entries_) {
        auto it = std::find_if(entries_.begin(), entries_.end(),
                               [&](const ModCod& m) { return same_key(m, e); });
        if (it != entries_.end()) {
            *it = e;
        } else {
            entries_.push_back(e);
        }
    }
    validate();
}

const ModCod* ThresholdTable::find(const ModulationId& m, const CodeRate& r, Stream s) const {
    for (const auto& e : entries_) {
        if (e.modulation == m && e.code_rate == r && e.stream == s) return &e;
    }
    return nullptr;
}

std::vector<double> ThresholdTable::hierarchical_rhos() const {
    std::vector<double> out;
    for (const auto& e : entries_) {
        if (!e.modulation.hierarchical()) continue;
        const bool seen = std::any_of(out.begin(), out.end(),
                                      [&](double r) { return std::abs(r - e.modulation.rho_he) < 1e-9; });
        if (!seen) out.push_back(e.modulation.rho_he);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void ThresholdTable::check_complete() const {
    using F = ModulationId::Family;
    struct Need {
        F family;
        std::vector<CodeRate> rates;
    };
    const std::vector<Need> singles{
        {F::qpsk, standard_code_rates()},
        {F::psk8, {{3, 5}, {2, 3}, {3, 4}, {5, 6}, {8, 9}, {9, 10}}},
        {F::apsk16, {{2, 3}, {3, 4}, {4, 5}, {5, 6}, {8, 9}, {9, 10}}},
    };
    for (const auto& n : singles) {
        for (const auto& r : n.rates) {
            const ModulationId id{n.family, 0.0};
            if (!find(id, r, Stream::single)) {
                throw ConfigError(fmt::format("threshold table lacks {} {}", id.str(), r.str()));
            }
        }
    }
    for (double rho : {0.75, 0.8, 0.85, 0.9}) {
        for (const auto& r : standard_code_rates()) {
            for (Stream s : {Stream::he, Stream::le}) {
                if (!find(hierarchical_apsk_id(rho), r, s)) {
                    throw ConfigError(fmt::format("threshold table lacks {} {} {}",
                                                  hierarchical_apsk_id(rho).str(), r.str(), to_string(s)));
                }
            }
        }
    }
}

double best_single_rate(const ThresholdTable& table, double snr_db) {
    double best = 0.0;
    for (const auto& e : table.entries()) {
        if (e.stream == Stream::single && e.threshold_db <= snr_db) {
            best = std::max(best, e.spectral_efficiency());
        }
    }
    return best;
}

double best_stream_rate(const ThresholdTable& table, const ModulationId& m, Stream s, double snr_db) {
    double best = 0.0;
    for (const auto& e : table.entries()) {
        if (e.stream == s && e.modulation == m && e.threshold_db <= snr_db) {
            best = std::max(best, e.spectral_efficiency());
        }
    }
    return best;
}

ThresholdTable parse_thresholds(std::string_view text, const std::string& source, Provenance provenance) {
    const auto doc = csv::parse(text, source);
    csv::expect_header(doc, {"modulation", "code_rate", "stream", "threshold_db"});
    if (doc.rows.empty()) throw ParseError(source, doc.header_line, "no entries");

    std::vector<ModCod> entries;
    std::vector<std::size_t> lines;
    for (const auto& row : doc.rows) {
        ModCod m;
        try {
            m.modulation = parse_modulation_id(row.fields[0]);
            m.code_rate = parse_code_rate(row.fields[1]);
            m.stream = parse_stream(row.fields[2]);
        } catch (const ConfigError& e) {
            throw ParseError(source, row.line, e.what());
        }
        m.threshold_db = csv::to_double(row.fields[3], source, row.line);
        m.provenance = provenance;
        check_entry(m, source, row.line);
        entries.push_back(m);
        lines.push_back(row.line);
    }
    check_monotone(entries, lines, source);

    ThresholdTable table;
    table.merge(ThresholdTable(std::move(entries)));
    return table;
}

ThresholdTable load_thresholds(const std::filesystem::path& path, Provenance provenance) {
    return parse_thresholds(csv::read_file(path), path.string(), provenance);
}

void write_thresholds(std::ostream& out, const ThresholdTable& table) {
    out << "modulation,code_rate,stream,threshold_db\n";
    for (const auto& e : table.entries()) {
        out << e.modulation.str() << ',' << e.code_rate.str() << ',' << to_string(e.stream) << ','
            << csv::num(e.threshold_db) << '\n';
    }
}

namespace {

std::filesystem::path env_or(const char* var, std::filesystem::path fallback) {
    if (const char* v = std::getenv(var); v != nullptr && *v != '\0') return v;
    return fallback;
}

} // namespace

std::filesystem::path default_standard_table_path() {
    return env_or("HIERMOD_STANDARD_TABLE", std::filesystem::path(HIERMOD_DATA_DIR) / "dvbs2_thresholds.csv");
}

std::filesystem::path default_hierarchical_table_path() {
    return env_or("HIERMOD_HIER_TABLE",
                  std::filesystem::path(HIERMOD_DATA_DIR) / "hierarchical_16apsk_thresholds.csv");
}

ThresholdTable load_default_tables() {
    auto table = load_thresholds(default_standard_table_path(), Provenance::standard);
    table.merge(load_thresholds(default_hierarchical_table_path(), Provenance::mi_estimated));
    return table;
}

} // namespace hiermod
