// errors.hpp: exception types raised by the jcm library

#pragma once

#include <stdexcept>
#include <string>

namespace jcm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid argument outside an operation's mathematical domain.
struct DomainError : Error {
    using Error::Error;
};

/// The thermal series would need more terms than SeriesConfig::max_terms allows.
struct TruncationOverflow : Error {
    using Error::Error;
};

/// Formula requested that only holds for g = omega = 1.
struct NormalizationError : Error {
    using Error::Error;
};

/// Working precision cannot certify the requested error bound.
struct PrecisionError : Error {
    using Error::Error;
};

/// Sampling step resonates with 2*pi for some harmonic m.
struct DegenerateStep : Error {
    using Error::Error;
};

/// Scale factor s lies outside the admissible window.
struct BoundsViolation : Error {
    using Error::Error;
};

/// Fock truncation keeps too little thermal weight for the oracle tolerance.
struct TruncationTooSmall : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace jcm
