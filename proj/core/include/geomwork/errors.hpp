// errors.hpp — exception types raised by the geomwork numerics

#pragma once

#include <stdexcept>
#include <string>

namespace geomwork {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct InvalidParameters : Error {
    using Error::Error;
};

// A matrix failed the density-matrix checks (Hermitian, unit trace, PSD).
struct InvalidState : Error {
    using Error::Error;
};

// The Liouvillian null space has dimension > 1.
struct DegenerateSteadyState : Error {
    using Error::Error;
};

// The Liouvillian has no (numerical) null vector.
struct NoSteadyState : Error {
    using Error::Error;
};

struct StepTooLarge : Error {
    using Error::Error;
};

struct IntegrationFailure : Error {
    using Error::Error;
};

} // namespace geomwork
