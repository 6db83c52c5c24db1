#pragma once

#include <stdexcept>
#include <string>

namespace mpifs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the operation's domain (bad alpha, dimension mismatch, ...).
struct DomainError : Error {
    using Error::Error;
};

/// A DensityMap or FuzzyMap invariant is violated (empty support, max != 0 / != 1, ...).
struct InvalidMeasureError : Error {
    using Error::Error;
};

/// System-level invariant violated (weight normalization, inadmissible grey maps, ...).
struct InvalidSystemError : Error {
    using Error::Error;
};

/// A fixed grid cannot reach the requested resolution.
struct InfeasibleResolutionError : Error {
    using Error::Error;
};

/// Hard resource guard tripped (support cap, tuple cap).
struct ResourceLimitError : Error {
    using Error::Error;
};

/// Config text rejected; message names section, key and the violated rule.
struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace mpifs
