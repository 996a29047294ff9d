#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hiermod::csv {

struct Row {
    std::size_t line;
    std::vector<std::string> fields;
};

struct Document {
    std::string source;
    std::size_t header_line = 0;
    std::vector<std::string> header;
    std::vector<Row> rows;
};

/// Comma-separated text with a header row. Blank lines and lines starting
/// with '#' are ignored; fields are trimmed. No quoting.
Document parse(std::string_view text, const std::string& source);

/// Throws ParseError unless the header equals `expected`.
void expect_header(const Document& doc, const std::vector<std::string>& expected);

std::vector<std::string> split(std::string_view s, char sep = ',');
std::string_view trim(std::string_view s);

double to_double(std::string_view field, const std::string& source, std::size_t line);
long to_long(std::string_view field, const std::string& source, std::size_t line);

/// Shortest decimal form that parses back to the same double.
std::string num(double x);

std::string read_file(const std::filesystem::path& path);

/// Writes via a sibling temporary file and rename, so readers never observe
/// a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

} // namespace hiermod::csv
