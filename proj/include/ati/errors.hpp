#pragma once

#include <stdexcept>
#include <string>

namespace ati {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Order or argument outside the supported range of a special function.
struct RangeError : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual(residual) {}
    double residual;
};

struct BelowThresholdError : Error {
    using Error::Error;
};

// Too many open channels for the configured cap.
struct ChannelExplosionError : Error {
    using Error::Error;
};

struct DegenerateSaddleError : Error {
    using Error::Error;
};

struct AsymptoticsInvalidError : Error {
    using Error::Error;
};

struct RegimeError : Error {
    using Error::Error;
};

}  // namespace ati
