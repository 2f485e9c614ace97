#pragma once

#include <stdexcept>
#include <string>

namespace mk {

// Bad user-facing parameters (s < 2, n < 1, unknown group, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Requested ring or group exceeds the configured size guard.
class InfeasibleSize : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operands built over different rings / truncations.
class ParamsMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A mathematically impossible state was reached: this is always a bug in the
// engine (or a deliberately corrupted input in a negative control).
class AlgebraError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace mk
