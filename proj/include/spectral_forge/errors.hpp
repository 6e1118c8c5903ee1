#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace spectral_forge {

/// Input outside the mathematical domain of an operation (poles, vanishing
/// factors, wrong parity, non-primitive characters, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Argument outside a declared supported band (e.g. K-Bessel order).
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A quadrature did not reach the requested tolerance. Carries the best
/// estimate so callers can report it, but it is never returned silently.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, std::complex<double> estimate, double error)
        : std::runtime_error(what), estimate_(estimate), error_(error) {}

    std::complex<double> estimate() const noexcept { return estimate_; }
    double error() const noexcept { return error_; }

private:
    std::complex<double> estimate_;
    double error_;
};

/// The spectral parameter hit (or sits numerically on) the spectrum.
class SpectralPointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Truncation too short for the requested accuracy.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spectral_forge
