#pragma once

#include <stdexcept>
#include <string>

namespace stsim {

// Bad command-line or API usage. CLI exit code 1.
struct usage_error : std::runtime_error {
    explicit usage_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent input data (files, datasets). CLI exit code 2.
struct data_error : std::runtime_error {
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric failure: non-finite values, shape violations, degenerate math. CLI exit code 3.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace stsim
