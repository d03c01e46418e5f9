#pragma once

#include <stdexcept>
#include <string>

namespace qengine {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad parameters or arguments (CLI maps these to exit code 2).
struct InvalidArgument : Error {
    using Error::Error;
};

struct SingularMatrix : Error {
    SingularMatrix() : Error("singular matrix") {}
    using Error::Error;
};

struct NoConvergence : Error {
    NoConvergence() : Error("Newton iteration did not converge") {}
    using Error::Error;
};

struct NotAnEngine : Error {
    NotAnEngine() : Error("not an engine: beta_h*omega_h >= beta_c*omega_c") {}
    using Error::Error;
};

struct DegenerateSteadyState : Error {
    DegenerateSteadyState() : Error("steady state is not unique") {}
    using Error::Error;
};

struct NumericalInstability : Error {
    using Error::Error;
};

struct ZeroMean : Error {
    ZeroMean() : Error("mean current is zero (alpha = 0)") {}
    using Error::Error;
};

struct ZeroDenominator : Error {
    ZeroDenominator() : Error("closed form denominator vanishes") {}
    using Error::Error;
};

} // namespace qengine
