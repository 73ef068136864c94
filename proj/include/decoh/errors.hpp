#pragma once

#include <stdexcept>
#include <string>

namespace decoh {

// Violated precondition on a physical input (non-positive mass, spread, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure failed to converge or produced an inconsistent result.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// A grid or run configuration that cannot be used as given.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace decoh
