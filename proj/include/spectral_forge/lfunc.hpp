#pragma once

// Dirichlet series, Euler products and completed L-functions of synthetic
// Hecke eigensystems, restricted to half-planes of absolute convergence.
// Every truncated evaluation carries a rigorous tail bound under the growth
// model |lambda(n)| <= d(n) n^theta, theta = max(0, Re s_phi - 1/2).

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "spectral_forge/arith.hpp"
#include "spectral_forge/errors.hpp"
#include "spectral_forge/hecke.hpp"
#include "spectral_forge/special.hpp"
#include "spectral_forge/summation.hpp"

namespace spectral_forge::lfunc {

using arith::cplx;
using arith::DirichletCharacter;
using arith::i64;
using arith::u64;
using hecke::HeckeEigenSystem;

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct SeriesEvaluation {
    cplx value;
    u64 terms_used = 0;
    /// |value - limit| <= tail_bound under `model`; infinite when no bound applies.
    double tail_bound = infinity;
    std::string model;
};

namespace bounds {

/// Upper bound for a * int_N^inf x^{-a} (1 + log x)^k dx, k in {1, 2}, a > 1.
/// With D(x) = sum_{n<=x} d(n) <= x (1 + log x) and partial summation this
/// bounds sum_{n>N} d(n) (1 + log n)^{k-1} n^{-a}.
inline double divisor_tail(double N, double a, int k) {
    if (!(a > 1.0) || N < 1.0) return infinity;
    const double b = a - 1.0, L = std::log(N), base = std::pow(N, -b);
    const double i0 = base / b;
    const double i1 = base * (L / b + 1.0 / (b * b));
    const double i2 = base * (L * L / b + 2.0 * L / (b * b) + 2.0 / (b * b * b));
    if (k == 1) return a * (i0 + i1);
    return a * (i0 + 2.0 * i1 + i2);
}

/// sum_{n>N} n^{-a} <= N^{1-a}/(a-1).
inline double zeta_tail(double N, double a) {
    if (!(a > 1.0) || N < 1.0) return infinity;
    return std::pow(N, 1.0 - a) / (a - 1.0);
}

}  // namespace bounds

/// n^{-s} for n = 0..N (entry 0 is 0). Real exponents use std::pow.
inline std::vector<cplx> inverse_powers(u64 N, cplx s) {
    std::vector<cplx> w(N + 1);
    if (s.imag() == 0.0) {
        for (u64 n = 1; n <= N; ++n) w[n] = std::pow(static_cast<double>(n), -s.real());
    } else {
        for (u64 n = 1; n <= N; ++n) w[n] = std::exp(-s * std::log(static_cast<double>(n)));
    }
    return w;
}

/// sum_{n=1}^{N} a_n n^{-s}, ascending and compensated.
inline cplx dirichlet_sum(const std::vector<cplx>& a, u64 N, cplx s) {
    ComplexCompensatedSum acc;
    if (s.imag() == 0.0) {
        for (u64 n = 1; n <= N; ++n) acc += a[n] * std::pow(static_cast<double>(n), -s.real());
    } else {
        for (u64 n = 1; n <= N; ++n) acc += cmul(a[n], std::exp(-s * std::log(static_cast<double>(n))));
    }
    return acc.value();
}

inline std::string growth_model(const HeckeEigenSystem& sys) {
    const double th = sys.growth_exponent();
    return th == 0.0 ? "tempered |lambda(n)| <= d(n)" : "|lambda(n)| <= d(n) n^" + std::to_string(th);
}

/// L(s, phi) = sum_{n <= N} lambda(n) n^{-s}.
inline SeriesEvaluation l_series(const HeckeEigenSystem& sys, cplx s, u64 N) {
    SeriesEvaluation r;
    const auto t = sys.coefficient_table(N);
    r.value = dirichlet_sum(*t, N, s);
    r.terms_used = N;
    r.tail_bound = bounds::divisor_tail(static_cast<double>(N), s.real() - sys.growth_exponent(), 1);
    r.model = growth_model(sys);
    return r;
}

/// (1 - lambda(p) p^{-s} + chi(p) p^{-2s})^{-1} for one prime, from raw data.
inline cplx local_factor_inverse(cplx lambda_p, cplx chi_p, u64 p, cplx s) {
    const cplx x = std::exp(-s * std::log(static_cast<double>(p)));
    return 1.0 - lambda_p * x + chi_p * x * x;
}

/// prod_{p <= P} (1 - lambda(p) p^{-s} + chi(p) p^{-2s})^{-1}. Factors are
/// multiplied in blocks of 32 and the block logs summed; the branch of each
/// log is irrelevant after exponentiation.
inline SeriesEvaluation euler_product(const HeckeEigenSystem& sys, cplx s, u64 P) {
    SeriesEvaluation r;
    r.model = growth_model(sys);
    ComplexCompensatedSum logs;
    u64 count = 0;
    cplx block = 1.0;
    int in_block = 0;
    const bool real_s = s.imag() == 0.0;
    const auto& chi = sys.nebentypus();
    const auto table = sys.cached_table();
    const u64 tsize = table ? table->size() : 0;
    for (u64 p : arith::primes_upto(P)) {
        const double dp = static_cast<double>(p);
        const cplx x = real_s ? cplx(std::pow(dp, -s.real())) : std::exp(-s * std::log(dp));
        const cplx lp = p < tsize ? (*table)[p] : sys.seed(p);
        const cplx f = 1.0 - cmul(lp, x) + cmul(chi(static_cast<i64>(p)), cmul(x, x));
        if (f == cplx{} || !std::isfinite(f.real()) || !std::isfinite(f.imag()))
            throw DomainError("euler_product: vanishing local factor at p = " + std::to_string(p));
        block = cmul(block, f);
        if (++in_block == 32) {
            logs += -std::log(block);
            block = 1.0;
            in_block = 0;
        }
        ++count;
    }
    if (in_block > 0) logs += -std::log(block);
    r.value = std::exp(logs.value());
    r.terms_used = count;
    // |log of the omitted factors| <= sum_{p>P} sum_k 2 p^{-ka}/k
    //                              <= 2/(1 - P^{-a}) * sum_{n>P} n^{-a}.
    const double a = s.real() - sys.growth_exponent();
    if (P >= 1 && a > 1.0) {
        const double lt = 2.0 / (1.0 - std::pow(static_cast<double>(P), -a)) * bounds::zeta_tail(static_cast<double>(P), a);
        r.tail_bound = std::abs(r.value) * std::expm1(lt);
    }
    return r;
}

/// Gamma factor and conductor part of the completed L-function:
/// (sqrt(q)/pi)^s Gamma((s + s_phi - 1/2)/2 + (1-eps)/4) Gamma((s - s_phi + 1/2)/2 + (1-eps)/4).
inline cplx gamma_factor(const HeckeEigenSystem& sys, cplx s) {
    const double shift = (1.0 - sys.parity()) / 4.0;
    const cplx nu = sys.s_phi() - 0.5;
    const cplx lg = special::log_gamma((s + nu) / 2.0 + shift) + special::log_gamma((s - nu) / 2.0 + shift);
    const double log_pref = std::log(std::sqrt(static_cast<double>(sys.level())) / std::numbers::pi);
    return std::exp(lg + s * log_pref);
}

/// Lambda(s, phi) from the truncated Dirichlet series.
inline cplx completed_l(const HeckeEigenSystem& sys, cplx s, u64 N) {
    return gamma_factor(sys, s) * l_series(sys, s, N).value;
}

/// Lambda(s, phi) from the truncated Euler product.
inline cplx completed_l_euler(const HeckeEigenSystem& sys, cplx s, u64 P) {
    return gamma_factor(sys, s) * euler_product(sys, s, P).value;
}

/// L(s, chi) = sum_{n <= N} chi(n) n^{-s} for even chi.
inline SeriesEvaluation dirichlet_l(const DirichletCharacter& chi, cplx s, u64 N) {
    if (!chi.is_even()) throw DomainError("dirichlet_l: character must be even");
    SeriesEvaluation r;
    const u64 q = chi.modulus();
    ComplexCompensatedSum acc;
    for (u64 n = 1; n <= N; ++n) {
        const cplx c = chi(static_cast<i64>(n % q));
        if (c == cplx{}) continue;
        acc += c * (s.imag() == 0.0 ? cplx(std::pow(static_cast<double>(n), -s.real()))
                                    : std::exp(-s * std::log(static_cast<double>(n))));
    }
    r.value = acc.value();
    r.terms_used = N;
    r.model = "|chi(n)| <= 1";
    const double sigma = s.real();
    r.tail_bound = bounds::zeta_tail(static_cast<double>(N), sigma);
    if (!chi.is_principal() && sigma > 0.0 && N >= 1) {
        // Partial summation with max_x |sum_{N<n<=x} chi(n)| <= 2 max_y |sum_{n<=y} chi(n)|.
        double amax = 0.0;
        ComplexCompensatedSum part;
        for (u64 n = 1; n <= q; ++n) {
            part += chi(static_cast<i64>(n));
            amax = std::max(amax, std::abs(part.value()));
        }
        const double alt = 2.0 * amax * std::pow(static_cast<double>(N), -sigma) * (1.0 + std::abs(s) / sigma);
        r.tail_bound = std::min(r.tail_bound, alt);
    }
    return r;
}

/// Lambda(s, chi) = (q/pi)^{s/2} Gamma(s/2) L(s, chi), q the ambient modulus
/// (no primitivization).
inline cplx completed_dirichlet_l(const DirichletCharacter& chi, cplx s, u64 N) {
    if (!chi.is_even()) throw DomainError("completed_dirichlet_l: character must be even");
    const double q = static_cast<double>(chi.modulus());
    const cplx pref = std::exp(s / 2.0 * std::log(q / std::numbers::pi) + special::log_gamma(s / 2.0));
    return pref * dirichlet_l(chi, s, N).value;
}

/// sum_{n <= N} sigma_1(n) lambda(n) n^{-s}.
inline SeriesEvaluation rankin_sigma_series(const HeckeEigenSystem& sys, cplx s, u64 N) {
    SeriesEvaluation r;
    const auto t = sys.coefficient_table(N);
    const auto sig = arith::sigma1_table(N);
    ComplexCompensatedSum acc;
    const bool real_s = s.imag() == 0.0;
    for (u64 n = 1; n <= N; ++n) {
        const double dn = static_cast<double>(n);
        const cplx w = real_s ? cplx(std::pow(dn, -s.real())) : std::exp(-s * std::log(dn));
        acc += cmul((*t)[n] * static_cast<double>(sig[n]), w);
    }
    r.value = acc.value();
    r.terms_used = N;
    // |sigma_1(n) lambda(n)| <= n (1 + log n) d(n) n^theta.
    r.tail_bound = bounds::divisor_tail(static_cast<double>(N), s.real() - 1.0 - sys.growth_exponent(), 2);
    r.model = growth_model(sys) + ", sigma_1(n) <= n(1 + log n)";
    return r;
}

/// (1 - chi(p) p^{-(2s-1)}) / ((1 - lambda(p) p^{-(s-1)} + chi(p) p^{-2(s-1)})(1 - lambda(p) p^{-s} + chi(p) p^{-2s})).
inline cplx rankin_local_factor(cplx lambda_p, cplx chi_p, u64 p, cplx s) {
    const cplx d1 = local_factor_inverse(lambda_p, chi_p, p, s - 1.0);
    const cplx d2 = local_factor_inverse(lambda_p, chi_p, p, s);
    if (std::abs(d1) == 0.0 || std::abs(d2) == 0.0)
        throw DomainError("rankin_local_factor: vanishing denominator at p = " + std::to_string(p));
    const cplx num = 1.0 - chi_p * std::exp(-(2.0 * s - 1.0) * std::log(static_cast<double>(p)));
    return num / (d1 * d2);
}

inline cplx rankin_local_factor(const HeckeEigenSystem& sys, u64 p, cplx s) {
    return rankin_local_factor(sys.seed(p), sys.nebentypus()(static_cast<i64>(p)), p, s);
}

/// sum_{k=0}^{K} sigma_1(p^k) lambda(p^k) p^{-ks} with lambda(p^k) from the
/// Hecke recursion on the raw data (lambda(p)^k when chi(p) = 0).
inline cplx rankin_local_series(cplx lambda_p, cplx chi_p, u64 p, cplx s, int K) {
    const double dp = static_cast<double>(p);
    const cplx x = std::exp(-s * std::log(dp));
    ComplexCompensatedSum acc;
    cplx prev = 0.0, cur = 1.0, xk = 1.0;
    double sigma = 1.0, pk = 1.0;
    for (int k = 0; k <= K; ++k) {
        acc += sigma * cur * xk;
        const cplx next = lambda_p * cur - (k == 0 ? cplx(0.0) : chi_p * prev);
        prev = cur;
        cur = next;
        xk *= x;
        pk *= dp;
        sigma += pk;
    }
    return acc.value();
}

struct RankinClosedForm {
    cplx value;
    cplx l_shifted;  ///< L(s-1, phi)
    cplx l_at_s;     ///< L(s, phi)
    cplx l_chi;      ///< L(2s-1, chi)
    /// First-order propagated bound from the three pieces' tail bounds.
    double error_bound = infinity;
    /// The denominator's own tail bound is at least half its size.
    bool ill_conditioned = false;
};

/// L(s-1, phi) L(s, phi) / L(2s-1, chi): phi-factors from Euler products
/// over p <= P, the chi-factor from its Dirichlet series to N.
inline RankinClosedForm rankin_closed_form(const HeckeEigenSystem& sys, cplx s, u64 N, u64 P) {
    RankinClosedForm r;
    const auto a = euler_product(sys, s - 1.0, P);
    const auto b = euler_product(sys, s, P);
    const auto c = dirichlet_l(sys.nebentypus(), 2.0 * s - 1.0, N);
    r.l_shifted = a.value;
    r.l_at_s = b.value;
    r.l_chi = c.value;
    r.ill_conditioned = !(c.tail_bound < 0.5 * std::abs(c.value));
    if (std::abs(c.value) == 0.0) throw DomainError("rankin_closed_form: L(2s-1, chi) vanished numerically");
    r.value = a.value * b.value / c.value;
    r.error_bound = std::abs(r.value) * (a.tail_bound / std::abs(a.value) + b.tail_bound / std::abs(b.value) +
                                         c.tail_bound / std::abs(c.value));
    if (r.ill_conditioned) r.error_bound = infinity;
    return r;
}

struct TwistScanEntry {
    DirichletCharacter psi;
    u64 conductor = 1;
    cplx value;
    double tail_bound = infinity;
};

/// Even primitive psi with conductor <= r_max coprime to M for which the
/// truncated |L(s, phi x psi)| exceeds threshold + tail bound.
inline std::vector<TwistScanEntry> twist_nonvanishing_scan(const HeckeEigenSystem& sys, cplx s, u64 M, u64 r_max,
                                                           double threshold, u64 N) {
    std::vector<TwistScanEntry> out;
    if (!(threshold < infinity)) return out;
    for (u64 r = 1; r <= r_max; ++r) {
        if (std::gcd(r, M) != 1) continue;
        for (const auto& psi : arith::primitive_characters(r)) {
            if (!psi.is_even()) continue;
            const auto tw = hecke::twist(sys, psi);
            const auto ev = l_series(tw, s, N);
            if (std::abs(ev.value) > threshold + ev.tail_bound) out.push_back({psi, r, ev.value, ev.tail_bound});
        }
    }
    return out;
}

}  // namespace spectral_forge::lfunc
