#pragma once

// Geometric side of the Selberg trace formula with a character, for
// user-supplied class data, evaluated on Gaussian test functions; Laplace
// transforms, Riesz (fractional) integrals and Bromwich inversion; smoothed
// eigenvalue counting.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "spectral_forge/errors.hpp"
#include "spectral_forge/quadrature.hpp"
#include "spectral_forge/special.hpp"
#include "spectral_forge/summation.hpp"

namespace spectral_forge::spectral {

using cplx = std::complex<double>;
using quad::integrate;
using quad::Interval;
using quad::QuadratureResult;
using quad::QuadratureSpec;
using quad::Scheme;

inline constexpr double pi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Test functions

/// h(r) = exp(-z r^2), g(x) = (4 pi z)^{-1/2} exp(-x^2/(4z)), with
/// g(x) = (1/2pi) int h(r) e^{-irx} dr.
struct GaussianTestFunction {
    cplx z;

    explicit GaussianTestFunction(cplx z_) : z(z_) {
        if (!(z.real() > 0.0)) throw DomainError("GaussianTestFunction: Re z must be positive");
    }
    cplx h(cplx r) const { return std::exp(-z * r * r); }
    cplx g(double x) const { return std::exp(-x * x / (4.0 * z)) / std::sqrt(4.0 * pi * z); }
    /// max over |x| >= x0 of |g|; g decays since Re(1/z) > 0.
    double g_envelope(double x0) const {
        return std::exp(-x0 * x0 * (1.0 / (4.0 * z)).real()) / std::sqrt(std::abs(4.0 * pi * z));
    }
};

/// Finite linear combination sum_k c_k exp(-z_k r^2).
struct TestFunction {
    struct Term {
        cplx coefficient;
        GaussianTestFunction gaussian;
    };
    std::vector<Term> terms;

    TestFunction() = default;
    TestFunction(const GaussianTestFunction& g) : terms{{1.0, g}} {}  // NOLINT: implicit by design
    static TestFunction gaussian(cplx z) { return TestFunction(GaussianTestFunction(z)); }

    cplx h(cplx r) const {
        cplx s = 0.0;
        for (const auto& t : terms) s += t.coefficient * t.gaussian.h(r);
        return s;
    }
    cplx g(double x) const {
        cplx s = 0.0;
        for (const auto& t : terms) s += t.coefficient * t.gaussian.g(x);
        return s;
    }
    double g_envelope(double x0) const {
        double s = 0.0;
        for (const auto& t : terms) s += std::abs(t.coefficient) * t.gaussian.g_envelope(x0);
        return s;
    }
    /// Decay rate for |h(r)| on the real line: min Re z_k.
    double min_re_z() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& t : terms) m = std::min(m, t.gaussian.z.real());
        return m;
    }
};

inline TestFunction combine(cplx a, const TestFunction& f1, cplx b, const TestFunction& f2) {
    TestFunction out;
    for (const auto& t : f1.terms) out.terms.push_back({a * t.coefficient, t.gaussian});
    for (const auto& t : f2.terms) out.terms.push_back({b * t.coefficient, t.gaussian});
    return out;
}

// ---------------------------------------------------------------------------
// Class data

struct HyperbolicClass {
    double norm = 0.0;
    /// chi(gamma^k) for k = 1..size; beyond the list chi(gamma^k) = chi(gamma)^k.
    std::vector<cplx> chi_powers{1.0};

    cplx chi_power(int k) const {
        if (k >= 1 && static_cast<std::size_t>(k) <= chi_powers.size()) return chi_powers[static_cast<std::size_t>(k) - 1];
        return std::pow(chi_powers.front(), k);
    }
};

struct EllipticClass {
    int order = 2;
    /// chi(R^nu) for nu = 1..order-1.
    std::vector<cplx> chi_values;
};

struct CuspData {
    int open = 0;
    int closed = 0;
    /// chi(gamma_a) at the closed cusps.
    std::vector<cplx> chi_values;
    double k1 = 0.0;
    /// tr(I - Phi(1/2, chi)).
    double phi_trace = 0.0;
};

struct GeodesicClassData {
    double area = 0.0;
    std::vector<HyperbolicClass> hyperbolic;
    std::vector<EllipticClass> elliptic;
    CuspData cusps;

    void validate() const {
        if (!(area > 0.0)) throw DomainError("class data: area must be positive");
        for (const auto& h : hyperbolic) {
            if (!(h.norm > 1.0)) throw DomainError("class data: hyperbolic norms must exceed 1");
            if (h.chi_powers.empty()) throw DomainError("class data: missing character values");
            for (cplx c : h.chi_powers)
                if (std::abs(std::abs(c) - 1.0) > 1e-12) throw DomainError("class data: |chi| must be 1");
        }
        for (const auto& e : elliptic) {
            if (e.order < 2) throw DomainError("class data: elliptic orders must be >= 2");
            if (e.chi_values.size() != static_cast<std::size_t>(e.order - 1))
                throw DomainError("class data: need chi(R^nu) for 1 <= nu < order");
            for (cplx c : e.chi_values)
                if (std::abs(std::abs(c) - 1.0) > 1e-12) throw DomainError("class data: |chi| must be 1");
        }
        if (!std::isfinite(cusps.phi_trace)) throw DomainError("class data: phi trace must be finite");
        for (cplx c : cusps.chi_values)
            if (std::abs(std::abs(c) - 1.0) > 1e-12) throw DomainError("class data: |chi| must be 1");
    }
};

/// Value with the estimated absolute error of its quadratures or truncation.
struct Term {
    cplx value;
    double error = 0.0;
};

// ---------------------------------------------------------------------------
// Geometric terms

/// area/(2 pi) int_R r tanh(pi r) h(r) dr, folded to area/pi int_0^inf.
inline Term identity_term(double area, const TestFunction& tf, const QuadratureSpec& spec = {}) {
    if (!(area > 0.0)) throw DomainError("identity_term: area must be positive");
    auto f = [&](double r) { return r * std::tanh(pi * r) * tf.h(r); };
    const auto q = integrate(f, Interval::half_line(0.0), spec);
    return {area / pi * q.value, area / pi * q.error};
}

/// sum_gamma sum_{k <= k_max} chi(gamma^k) 2 log N / (N^{k/2} - N^{-k/2}) g(k log N),
/// skipping terms whose g-envelope is below 1e-16 (g decreases in |x|).
inline Term hyperbolic_term(const std::vector<HyperbolicClass>& classes, const TestFunction& tf, int k_max) {
    if (k_max < 1) throw DomainError("hyperbolic_term: k_max must be >= 1");
    ComplexCompensatedSum acc;
    double dropped = 0.0;
    for (const auto& c : classes) {
        if (!(c.norm > 1.0)) throw DomainError("hyperbolic_term: norm must exceed 1");
        const double l = std::log(c.norm);
        for (int k = 1; k <= k_max; ++k) {
            const double x = k * l;
            const double pref = 2.0 * l / (2.0 * std::sinh(x / 2.0));
            if (tf.g_envelope(x) < 1e-16) {
                // Remaining k: each |term| <= pref * envelope, geometric in k.
                dropped += pref * tf.g_envelope(x) / (1.0 - std::exp(-l / 2.0));
                break;
            }
            acc += c.chi_power(k) * pref * tf.g(x);
        }
    }
    return {acc.value(), dropped};
}

enum class EllipticKernel {
    /// e^{-pi nu r / m}
    half_angle,
    /// e^{-2 pi nu r / m}
    classical,
};

/// e^{-a r}/(1 + e^{-2 pi r}) without overflow.
inline double elliptic_weight(double a, double r) {
    if (r >= 0.0) return std::exp(-a * r) / (1.0 + std::exp(-2.0 * pi * r));
    return std::exp((2.0 * pi - a) * r) / (1.0 + std::exp(2.0 * pi * r));
}

/// sum_R sum_{1 <= nu < m} 2 chi(R^nu)/(m sin(pi nu/m)) int_R h(r) K_nu(r)/(1 + e^{-2 pi r}) dr.
inline Term elliptic_term(const std::vector<EllipticClass>& classes, const TestFunction& tf,
                          EllipticKernel kernel = EllipticKernel::half_angle, const QuadratureSpec& spec = {}) {
    ComplexCompensatedSum acc;
    double err = 0.0;
    for (const auto& c : classes) {
        if (c.order < 2) throw DomainError("elliptic_term: order must be >= 2");
        if (c.chi_values.size() != static_cast<std::size_t>(c.order - 1))
            throw DomainError("elliptic_term: need chi(R^nu) for 1 <= nu < order");
        const double m = c.order;
        for (int nu = 1; nu < c.order; ++nu) {
            const double a = (kernel == EllipticKernel::half_angle ? pi : 2.0 * pi) * nu / m;
            auto f = [&](double r) { return tf.h(r) * elliptic_weight(a, r); };
            const auto q = integrate(f, Interval::real_line(), spec);
            const cplx pref = 2.0 * c.chi_values[static_cast<std::size_t>(nu - 1)] / (m * std::sin(pi * nu / m));
            acc += pref * q.value;
            err += std::abs(pref) * q.error;
        }
    }
    return {acc.value(), err};
}

/// int_R h(r) psi(1 + i r) dr = 2 int_0^inf h(r) Re psi(1 + i r) dr (h even).
inline QuadratureResult digamma_integral(const TestFunction& tf, const QuadratureSpec& spec = {}) {
    auto f = [&](double r) { return 2.0 * tf.h(r) * special::digamma(cplx(1.0, r)).real(); };
    return integrate(f, Interval::half_line(0.0), spec);
}

/// -2 (open log 2 + sum_closed log|1 - chi(gamma_a)|) g(0) + 1/2 tr(I - Phi) h(0)
///   - (k1/pi) int h(r) psi(1 + ir) dr.
inline Term parabolic_terms(const CuspData& cusps, const TestFunction& tf, const QuadratureSpec& spec = {}) {
    if (!std::isfinite(cusps.phi_trace)) throw DomainError("parabolic_terms: phi trace must be finite");
    CompensatedSum logs;
    for (int i = 0; i < cusps.open; ++i) logs += std::numbers::ln2;
    for (cplx c : cusps.chi_values) {
        const double d = std::abs(1.0 - c);
        if (d == 0.0) throw DomainError("parabolic_terms: closed cusp with chi = 1");
        logs += std::log(d);
    }
    cplx v = -2.0 * logs.value() * tf.g(0.0) + 0.5 * cusps.phi_trace * tf.h(0.0);
    double err = 0.0;
    if (cusps.k1 != 0.0) {
        const auto q = digamma_integral(tf, spec);
        v -= cusps.k1 / pi * q.value;
        err = std::abs(cusps.k1) / pi * q.error;
    }
    return {v, err};
}

struct GeometricSide {
    Term identity, hyperbolic, elliptic, parabolic;
    cplx total;
    double error = 0.0;
};

inline GeometricSide geometric_side(const GeodesicClassData& data, const TestFunction& tf, int k_max,
                                   EllipticKernel kernel = EllipticKernel::half_angle,
                                   const QuadratureSpec& spec = {}) {
    data.validate();
    GeometricSide s;
    s.identity = identity_term(data.area, tf, spec);
    s.hyperbolic = hyperbolic_term(data.hyperbolic, tf, k_max);
    s.elliptic = elliptic_term(data.elliptic, tf, kernel, spec);
    s.parabolic = parabolic_terms(data.cusps, tf, spec);
    s.total = s.identity.value + s.hyperbolic.value + s.elliptic.value + s.parabolic.value;
    s.error = s.identity.error + s.hyperbolic.error + s.elliptic.error + s.parabolic.error;
    return s;
}

// ---------------------------------------------------------------------------
// Spectral side (comparison only)

struct ScatteringSample {
    double r;
    double value;  ///< -phi'/phi (1/2 + i r)
};

/// Ascending eigenvalue list, lambda = 1/4 + r^2.
struct SpectrumList {
    std::vector<double> eigenvalues;

    void validate() const {
        for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
            if (!(eigenvalues[i] >= 0.0)) throw DomainError("spectrum: eigenvalues must be >= 0");
            if (i > 0 && eigenvalues[i] < eigenvalues[i - 1]) throw DomainError("spectrum: must be ascending");
        }
    }
};

/// 2 sum h(r_j) + (1/2pi) int h(r) (-phi'/phi) dr, the integral by the
/// trapezoid rule over the tabulated samples.
inline cplx spectral_side(const SpectrumList& spec, const TestFunction& tf,
                          const std::vector<ScatteringSample>& samples = {}) {
    spec.validate();
    ComplexCompensatedSum acc;
    for (double lam : spec.eigenvalues) {
        const cplx r = std::sqrt(cplx(lam - 0.25, 0.0));
        acc += 2.0 * tf.h(r);
    }
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const auto& a = samples[i - 1];
        const auto& b = samples[i];
        acc += (b.r - a.r) / (4.0 * pi) * (tf.h(a.r) * a.value + tf.h(b.r) * b.value);
    }
    return acc.value();
}

// ---------------------------------------------------------------------------
// Laplace machinery

/// |f(t)| <= M e^{c t} for t >= 0.
struct TailModel {
    double M = 1.0;
    double c = 0.0;
};

struct TransformResult {
    cplx value;
    double error = 0.0;       ///< quadrature estimate
    double tail_bound = 0.0;  ///< rigorous bound for the truncated range under the model
};

/// Lf(z) = int_0^inf f(u) e^{-zu} du on [0, U], U chosen so the model tail
/// M e^{(c - Re z) U}/(Re z - c) is below 1e-17 (relative to max(1, M)).
inline TransformResult laplace(const std::function<cplx(double)>& f, cplx z, const TailModel& model,
                               const QuadratureSpec& spec = {}) {
    const double gap = z.real() - model.c;
    if (!(gap > 0.0)) throw DomainError("laplace: need Re z > c");
    const double target = 1e-17;
    const double U = std::max(1.0, std::log(std::max(model.M, 1e-300) / (gap * target)) / gap);
    auto g = [&](double u) { return f(u) * std::exp(-z * u); };
    const auto q = integrate(g, Interval{0.0, U}, spec);
    return {q.value, q.error, model.M * std::exp(-gap * U) / gap};
}

/// f_rho(t) = int_0^t (t - u)^{rho-1}/Gamma(rho) f(u) du.
inline TransformResult convolve_frac(const std::function<cplx(double)>& f, double rho, double t,
                                     const QuadratureSpec& spec = {}) {
    if (!(rho > 0.0)) throw DomainError("convolve_frac: rho must be positive");
    if (t <= 0.0) return {0.0, 0.0, 0.0};
    // v = (t - u)^rho removes the endpoint singularity for rho < 1.
    const double c = std::exp(-std::lgamma(rho + 1.0));
    auto g = [&](double v) { return c * f(std::max(0.0, t - std::pow(v, 1.0 / rho))); };
    const auto q = integrate(g, Interval{0.0, std::pow(t, rho)}, spec);
    return {q.value, q.error, 0.0};
}

namespace detail {

/// Wynn's epsilon algorithm on a sequence of partial sums; returns the
/// last even-column entry of the table.
inline cplx wynn_epsilon(const std::vector<cplx>& s) {
    const std::size_t n = s.size();
    if (n < 3) return s.empty() ? cplx{} : s.back();
    std::vector<cplx> prev(n + 1, 0.0), cur(s.begin(), s.end());
    cplx best = s.back();
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<cplx> next(cur.size() - 1);
        bool ok = true;
        for (std::size_t j = 0; j + 1 < cur.size(); ++j) {
            const cplx d = cur[j + 1] - cur[j];
            if (d == cplx{}) {
                ok = false;
                break;
            }
            next[j] = prev[j + 1] + 1.0 / d;
        }
        if (!ok || next.empty()) break;
        prev.assign(cur.begin(), cur.end());
        cur = std::move(next);
        if (k % 2 == 0) best = cur.back();
    }
    return best;
}

}  // namespace detail

struct BromwichOptions {
    /// Number of half-period panels per side fed to the epsilon algorithm.
    int panels = 40;
    QuadratureSpec spec = {1e-15, 1e-13, 4000, Scheme::gauss_kronrod};
};

struct BromwichResult {
    cplx value;
    /// Difference between the last two accelerated estimates.
    double error = 0.0;
};

/// (1/2 pi i) int_{a - i inf}^{a + i inf} e^{zu} F(z) / z^rho dz, which is
/// f_rho(u) for u >= 0 and 0 for u < 0 when F = Lf and a lies in the
/// convergence half-plane. Each half-line is cut into panels of length
/// pi/|u| (or doubling panels for u = 0) and the partial sums accelerated.
inline BromwichResult bromwich_smoothed(const std::function<cplx(cplx)>& F, double rho, double u, double a,
                                        const BromwichOptions& opt = {}) {
    if (rho < 1.0) throw DomainError("bromwich_smoothed: rho >= 1 required for absolute convergence");
    if (!(a > 0.0)) throw DomainError("bromwich_smoothed: need a > 0");
    auto integrand = [&](double y) {
        const cplx z(a, y);
        return std::exp(z * u - rho * std::log(z)) * F(z) / (2.0 * pi);
    };
    auto half = [&](double sign) {
        std::vector<cplx> partial, accel;
        ComplexCompensatedSum acc;
        double lo = 0.0;
        const double width = u != 0.0 ? pi / std::abs(u) : 1.0;
        for (int k = 0; k < opt.panels; ++k) {
            const double hi = u != 0.0 ? lo + width : (k == 0 ? 1.0 : 2.0 * lo);
            auto f = [&](double y) { return integrand(sign * y); };
            acc += integrate(f, Interval{lo, hi}, opt.spec).value;
            partial.push_back(acc.value());
            lo = hi;
        }
        return partial;
    };
    const auto pos = half(1.0), neg = half(-1.0);
    std::vector<cplx> sums(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) sums[i] = pos[i] + neg[i];
    const cplx v1 = detail::wynn_epsilon(sums);
    const cplx v0 = detail::wynn_epsilon(std::vector<cplx>(sums.begin(), sums.end() - 2));
    return {v1, std::abs(v1 - v0)};
}

/// F(z) = exp(-z/4 - x^2/(4z)) / sqrt(4 pi z) * Lf(z) e^{zT} / z. The kernel
/// is meant for T < 1/4; this is not enforced (pure transform).
inline std::function<cplx(cplx)> vt_kernel(std::function<cplx(cplx)> lf, double x, double T) {
    return [lf = std::move(lf), x, T](cplx z) {
        return std::exp(-z / 4.0 - x * x / (4.0 * z) + z * T) / std::sqrt(4.0 * pi * z) * lf(z) / z;
    };
}

// ---------------------------------------------------------------------------
// Smoothed counting

/// N_w(T) = sum_{lambda_i <= T} (T - lambda_i)^w.
inline double smoothed_counting(const SpectrumList& spec, double T, double w) {
    if (!(w >= 0.0)) throw DomainError("smoothed_counting: w must be >= 0");
    CompensatedSum acc;
    for (double lam : spec.eigenvalues)
        if (lam <= T) acc += w == 0.0 ? 1.0 : std::pow(T - lam, w);
    return acc.value();
}

struct SandwichCheck {
    bool left = false;    ///< N_0(T) <= (N_1(T + delta) - N_1(T))/delta
    bool right = false;   ///< (N_1(T + delta) - N_1(T))/delta <= N_0(T + delta)
    bool right_strict = false;
    double n0_T = 0.0, quotient = 0.0, n0_T_delta = 0.0;
};

/// Mean-value sandwich evaluated in exact rational arithmetic (every double
/// converts exactly).
inline SandwichCheck sandwich_check(const SpectrumList& spec, double T, double delta) {
    if (!(delta > 0.0)) throw DomainError("sandwich_check: delta must be positive");
    using boost::multiprecision::cpp_rational;
    const cpp_rational t(T), d(delta), td = t + d;
    cpp_rational n0(0), n0d(0), n1(0), n1d(0);
    for (double x : spec.eigenvalues) {
        const cpp_rational l(x);
        if (l <= t) {
            n0 += 1;
            n1 += t - l;
        }
        if (l <= td) {
            n0d += 1;
            n1d += td - l;
        }
    }
    const cpp_rational q = (n1d - n1) / d;
    SandwichCheck c;
    c.left = n0 <= q;
    c.right = q <= n0d;
    c.right_strict = q < n0d;
    c.n0_T = static_cast<double>(n0);
    c.quotient = static_cast<double>(q);
    c.n0_T_delta = static_cast<double>(n0d);
    return c;
}

}  // namespace spectral_forge::spectral
