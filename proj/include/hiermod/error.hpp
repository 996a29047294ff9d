#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hiermod {

// Parameters outside the domain of a formula (infeasible geometry, angle past
// the first pattern null, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Invalid user-facing configuration: bad CLI values, unknown config keys.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A receiver (or pair of receivers) cannot be served at any rate.
class DegenerateError : public std::runtime_error {
public:
    DegenerateError(const std::string& what, std::vector<std::size_t> receivers = {})
        : std::runtime_error(what), receivers_(std::move(receivers)) {}

    const std::vector<std::size_t>& receivers() const noexcept { return receivers_; }

private:
    std::vector<std::size_t> receivers_;
};

} // namespace hiermod
