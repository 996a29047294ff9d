#include "hiermod/csv.hpp"

#include "hiermod/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace hiermod::csv {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

Document parse(std::string_view text, const std::string& source) {
    Document doc;
    doc.source = source;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(start, end - start));
        ++line_no;
        start = end + 1;
        if (line.empty() || line.front() == '#') {
            if (end == text.size()) break;
            continue;
        }
        if (doc.header.empty()) {
            doc.header = split(line);
            doc.header_line = line_no;
        } else {
            doc.rows.push_back({line_no, split(line)});
            if (doc.rows.back().fields.size() != doc.header.size()) {
                throw ParseError(source, line_no,
                                 fmt::format("expected {} fields, found {}", doc.header.size(),
                                             doc.rows.back().fields.size()));
            }
        }
        if (end == text.size()) break;
    }
    if (doc.header.empty()) throw ParseError(source, line_no == 0 ? 1 : line_no, "empty file");
    return doc;
}

void expect_header(const Document& doc, const std::vector<std::string>& expected) {
    if (doc.header != expected) {
        std::string want;
        for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
        throw ParseError(doc.source, doc.header_line, "expected header '" + want + "'");
    }
}

double to_double(std::string_view field, const std::string& source, std::size_t line) {
    // std::from_chars for double is available in libstdc++ 11.
    double v = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || field.empty()) {
        throw ParseError(source, line, fmt::format("not a number: '{}'", field));
    }
    return v;
}

long to_long(std::string_view field, const std::string& source, std::size_t line) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        throw ParseError(source, line, fmt::format("not an integer: '{}'", field));
    }
    return v;
}

std::string num(double x) { return fmt::format("{}", x); }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw ConfigError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace hiermod::csv
