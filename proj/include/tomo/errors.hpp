#pragma once

#include <stdexcept>

namespace tomo {

// Malformed user input: bad config values, inconsistent dimensions, geometry
// that cannot be constructed.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical breakdown: factorization failure after jitter escalation,
// degenerate synthetic field, too many ensemble failures.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem trouble while reading inputs or writing outputs.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tomo
