#pragma once

#include <stdexcept>
#include <string>

namespace flatcluster {

/// Malformed arguments: non-finite entries, mismatched dimensions, bad sizes.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A flat whose directions are dependent (or whose equations are inconsistent).
class DegenerateFlat : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A generator configuration that cannot be sampled.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace flatcluster
