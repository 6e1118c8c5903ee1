#pragma once

// Complex Gamma-family functions, the K-Bessel function of complex order,
// and the Bessel moment  int_0^inf e^{-y} K_{s_phi - 1/2}(y) y^{s - 1/2} dy.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "spectral_forge/errors.hpp"
#include "spectral_forge/quadrature.hpp"
#include "spectral_forge/summation.hpp"

namespace spectral_forge::special {

using cplx = std::complex<double>;
using quad::Interval;
using quad::QuadratureResult;
using quad::QuadratureSpec;
using quad::Scheme;
using quad::integrate;

namespace detail {

// B_{2k} for k = 1..11.
inline constexpr std::array<double, 11> bernoulli_even = {
    1.0 / 6.0,          -1.0 / 30.0,    1.0 / 42.0,       -1.0 / 30.0,
    5.0 / 66.0,         -691.0 / 2730.0, 7.0 / 6.0,        -3617.0 / 510.0,
    43867.0 / 798.0,    -174611.0 / 330.0, 854513.0 / 138.0};

inline void reject_pole(cplx z, const char* who) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw DomainError(std::string(who) + ": pole at nonpositive integer");
}

// Stirling series for log Gamma, valid for Re w >= 10.
inline cplx stirling_log_gamma(cplx w) {
    const double half_log_2pi = 0.91893853320467274178032973640562;
    const cplx inv = 1.0 / w, inv2 = inv * inv;
    cplx corr = 0.0, p = inv;
    for (std::size_t k = 0; k < bernoulli_even.size(); ++k) {
        const double n = 2.0 * static_cast<double>(k + 1);
        corr += bernoulli_even[k] / (n * (n - 1.0)) * p;
        p *= inv2;
    }
    return (w - 0.5) * std::log(w) - w + half_log_2pi + corr;
}

inline cplx stirling_digamma(cplx w) {
    const cplx inv = 1.0 / w, inv2 = inv * inv;
    cplx corr = 0.0, p = inv2;
    for (std::size_t k = 0; k < bernoulli_even.size(); ++k) {
        const double n = 2.0 * static_cast<double>(k + 1);
        corr += bernoulli_even[k] / n * p;
        p *= inv2;
    }
    return std::log(w) - 0.5 * inv - corr;
}

}  // namespace detail

/// Principal branch of log Gamma (continuous from the positive real axis).
inline cplx log_gamma(cplx z) {
    detail::reject_pole(z, "log_gamma");
    if (z.imag() == 0.0 && z.real() > 0.0) return std::lgamma(z.real());
    cplx w = z;
    ComplexCompensatedSum logs;
    while (w.real() < 10.0) {
        logs += std::log(w);
        w += 1.0;
    }
    return detail::stirling_log_gamma(w) - logs.value();
}

inline cplx gamma(cplx z) {
    detail::reject_pole(z, "gamma");
    if (z.imag() == 0.0) return std::tgamma(z.real());
    return std::exp(log_gamma(z));
}

/// Gamma'/Gamma.
inline cplx digamma(cplx z) {
    detail::reject_pole(z, "digamma");
    cplx w = z;
    ComplexCompensatedSum shifts;
    while (w.real() < 10.0) {
        shifts += 1.0 / w;
        w += 1.0;
    }
    return detail::stirling_digamma(w) - shifts.value();
}

inline constexpr double bessel_order_band = 50.0;

/// K_nu(y) for complex nu with |Im nu| <= 50 and y > 0. Trapezoid rule on
/// K_nu(y) = 1/2 int_R exp(-y cosh w + nu w) dw along Im w = theta, where
/// theta sits at the saddle of the oscillating factor.
inline cplx bessel_k(cplx nu, double y) {
    if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("bessel_k: y must be positive and finite");
    if (!std::isfinite(nu.real()) || !std::isfinite(nu.imag())) throw DomainError("bessel_k: order not finite");
    if (std::abs(nu.imag()) > bessel_order_band) throw RangeError("bessel_k: |Im nu| exceeds the supported band 50");
    if (nu.imag() < 0.0 || (nu.imag() == 0.0 && nu.real() < 0.0)) nu = -nu;
    // K_nu(y) ~ sqrt(pi/2y) e^{-y} once y >> |nu|^2: below the double range.
    if (y > 760.0 + 2.0 * std::norm(nu)) return 0.0;
    const double a = nu.real(), b = nu.imag();
    const double delta = std::min(0.3, b > 0.0 ? 1.0 / b : 0.3);
    const double theta = std::min(std::asin(std::min(b / y, 1.0)), std::numbers::pi / 2.0 - delta);
    const double h = std::min(2.0 * std::numbers::pi * (std::numbers::pi / 2.0 - theta) / 40.0,
                              0.6 / std::sqrt(std::max(y, 1.0)));
    const double ct = std::cos(theta), st = std::sin(theta);
    const cplx i_theta(0.0, theta);

    // Exponent relative to its value -y cos(theta) at u = 0.
    auto term = [&](double u) {
        const cplx ch(std::cosh(u) * ct, std::sinh(u) * st);
        return std::exp(-y * (ch - ct) + nu * (cplx(u, 0.0) + i_theta));
    };

    ComplexCompensatedSum acc;
    CompensatedSum mag;
    const cplx t0 = term(0.0);
    acc += t0;
    mag += std::abs(t0);
    for (int dir : {1, -1}) {
        for (long k = 1; k < 2000000; ++k) {
            const double u = dir * k * h;
            const cplx t = term(u);
            acc += t;
            const double m = std::abs(t);
            mag += m;
            if (m < 1e-18 * mag.value() && y * std::sinh(std::abs(u)) * ct > std::abs(a)) break;
        }
    }
    return 0.5 * h * acc.value() * std::exp(-y * ct);
}

/// sqrt(pi)/2^{s+1/2} Gamma(s+s_phi) Gamma(s-s_phi+1) / Gamma(s+1).
inline cplx bessel_moment(cplx s, cplx s_phi) {
    const cplx lg = log_gamma(s + s_phi) + log_gamma(s - s_phi + 1.0) - log_gamma(s + 1.0);
    return std::sqrt(std::numbers::pi) * std::exp(lg - (s + 0.5) * std::numbers::ln2);
}

/// The same moment by direct quadrature of the Bessel integrand; the
/// K-Bessel order is s_phi - 1/2.
inline QuadratureResult bessel_moment_quadrature(cplx s, cplx s_phi, const QuadratureSpec& spec = {}) {
    const cplx nu = s_phi - 0.5;
    if (!(s.real() - 0.5 - std::abs(nu.real()) > -1.0))
        throw DomainError("bessel_moment_quadrature: integrand not integrable at 0");
    // Near y = 0 the integrand is bounded by y^{Re s - 1/2} times the small-y
    // growth of K_{Re nu}; points where that envelope is below 1e-40 are
    // skipped rather than paying for a Bessel evaluation at y ~ 1e-100.
    const double a = std::abs(nu.real());
    const double lg_a = a > 0.05 ? std::lgamma(a) : 0.0;
    auto f = [&](double y) -> cplx {
        if (y > 400.0 + 2.0 * std::norm(nu)) return 0.0;
        if (y < 1e-12) {
            const double log_k = a > 0.05 ? lg_a + a * std::log(2.0 / y) : std::log(std::log(2.0 / y) + 2.0);
            if ((s.real() - 0.5) * std::log(y) + log_k + std::log(1e3) < std::log(1e-40)) return 0.0;
        }
        return std::exp(-y) * bessel_k(nu, y) * std::pow(y, s - 0.5);
    };
    return integrate(f, Interval::half_line(0.0), spec);
}

/// |Gamma(z)Gamma(z+1/2) - 2^{1-2z} sqrt(pi) Gamma(2z)| / |Gamma(2z)|.
inline double legendre_duplication_residual(cplx z) {
    const cplx ratio = std::exp(log_gamma(z) + log_gamma(z + 0.5) - log_gamma(2.0 * z));
    const cplx rhs = std::sqrt(std::numbers::pi) * std::exp((1.0 - 2.0 * z) * std::numbers::ln2);
    return std::abs(ratio - rhs);
}

}  // namespace spectral_forge::special
