#pragma once

#include <stdexcept>
#include <string>

namespace epm {

// Malformed external input: CSV rows, XES documents, tree text.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration: coding schemes, unit rules, grade books, thresholds.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace epm
