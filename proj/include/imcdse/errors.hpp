#pragma once

#include <stdexcept>
#include <string>

namespace imcdse {

// Base of everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input files or option strings. The CLI maps these to exit code 2.
struct ConfigError : Error {
    using Error::Error;
};
struct ParseError : ConfigError {
    using ConfigError::ConfigError;
};
struct SchemaError : ConfigError {
    using ConfigError::ConfigError;
};
struct UnknownKind : ConfigError {
    using ConfigError::ConfigError;
};

struct IndexOutOfDomain : Error {
    using Error::Error;
};
struct ArithmeticOverflow : Error {
    using Error::Error;
};
struct LengthMismatch : Error {
    using Error::Error;
};
struct EmptyInput : Error {
    using Error::Error;
};
// aggregate() and min_distance() reject empty inputs the same way
using EmptyList = EmptyInput;
using EmptySet = EmptyInput;

struct PoolTooSmall : Error {
    using Error::Error;
};
// Sampling could not find enough capacity-feasible candidates within the
// attempt budget. The CLI maps this to exit code 3.
struct SamplingExhausted : Error {
    using Error::Error;
};
struct InfeasibleMapping : Error {
    using Error::Error;
};
struct ZeroWorkload : Error {
    using Error::Error;
};
struct UnknownTechNode : Error {
    using Error::Error;
};
struct SpaceTooLarge : Error {
    using Error::Error;
};
struct NotInLandscape : Error {
    using Error::Error;
};

} // namespace imcdse
