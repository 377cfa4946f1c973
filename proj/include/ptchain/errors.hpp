#pragma once

#include <stdexcept>
#include <string>

namespace ptchain {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidSpec : Error {
    using Error::Error;
};

/// Two mode frequencies coincide within tolerance (exceptional point); the
/// requested decomposition does not exist or would be defective.
struct DegenerateModes : Error {
    using Error::Error;
};

struct RootSolveFailure : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct CombinatorialOverflow : Error {
    using Error::Error;
};

struct GridTooLarge : Error {
    using Error::Error;
};

struct DimensionCap : Error {
    using Error::Error;
};

struct EigensolveFailure : Error {
    using Error::Error;
};

struct MatchingAmbiguous : Error {
    using Error::Error;
};

struct StepTooLarge : Error {
    using Error::Error;
};

struct InsufficientData : Error {
    using Error::Error;
};

struct NoCrossings : Error {
    using Error::Error;
};

struct UndersampledRecord : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace ptchain
