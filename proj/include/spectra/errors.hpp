// errors.hpp — exception hierarchy shared by the spectra library and CLI

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace spectra {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failures (CLI exit code 3).
struct NumericalError : Error {
    using Error::Error;
};

struct NonConvergence : NumericalError {
    using NumericalError::NumericalError;
};

struct DegenerateLeadingCoefficient : NumericalError {
    using NumericalError::NumericalError;
};

struct DegenerateRoots : NumericalError {
    using NumericalError::NumericalError;
};

struct StepErrorExceeded : NumericalError {
    using NumericalError::NumericalError;
};

struct TailNotDecayed : NumericalError {
    using NumericalError::NumericalError;
};

/// A characteristic root outside the strip 0 < Im x < (Γ₂+Γ₄)/2.
struct PoleBoundViolation : Error {
    PoleBoundViolation(const std::string& what, std::complex<double> offending)
        : Error(what), root(offending) {}
    std::complex<double> root;
};

/// Violated parameter invariant (normalization, widths, ranges).
struct ValidationError : Error {
    using Error::Error;
};

struct ZeroInitialAmplitude : ValidationError {
    using ValidationError::ValidationError;
};

}  // namespace spectra
