#pragma once

// Weight-2 Eisenstein q-expansions (E_2, G_q, G_{q1,q2}) and evaluation of
// Maass forms from Fourier data.

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <numbers>
#include <vector>

#include "spectral_forge/arith.hpp"
#include "spectral_forge/errors.hpp"
#include "spectral_forge/hecke.hpp"
#include "spectral_forge/special.hpp"
#include "spectral_forge/summation.hpp"

namespace spectral_forge::forms {

using arith::cplx;
using arith::DirichletCharacter;
using arith::i64;
using arith::SL2Matrix;
using arith::u64;

inline constexpr double min_imaginary_part = 0.2;

/// f(z) = sum_{n=0}^{N} b_n e^{2 pi i n z}.
struct HolomorphicQExpansion {
    std::shared_ptr<const std::vector<cplx>> coefficients;
    u64 level = 1;
    int weight = 2;
    /// f = sum_d t_d E_2(d z) when f was built from E_2; empty otherwise.
    std::map<u64, double> eisenstein_combination;

    u64 truncation() const { return coefficients->size() - 1; }
    cplx operator[](u64 n) const { return (*coefficients)[n]; }
    bool cuspidal_at_infinity() const { return (*coefficients)[0] == cplx{}; }
};

/// Expansion of sum_d t_d E_2(d z) to N terms: b_n = -24 sum_{d | n} t_d sigma_1(n/d).
inline HolomorphicQExpansion eisenstein_combination(const std::map<u64, double>& t, u64 level, u64 N) {
    auto sig = arith::sigma1_table(std::max<u64>(N, 1));
    std::vector<cplx> b(N + 1);
    for (const auto& [d, td] : t) {
        if (d == 0) throw DomainError("eisenstein_combination: d must be positive");
        b[0] += td;
        for (u64 m = 1; m * d <= N; ++m) b[m * d] += -24.0 * td * static_cast<double>(sig[m]);
    }
    HolomorphicQExpansion f;
    f.coefficients = std::make_shared<const std::vector<cplx>>(std::move(b));
    f.level = level;
    f.eisenstein_combination = t;
    return f;
}

/// E_2(z) = 1 - 24 sum sigma_1(n) q^n.
inline HolomorphicQExpansion e2_coefficients(u64 N) { return eisenstein_combination({{1, 1.0}}, 1, N); }

/// G_q(z) = E_2(z) - q E_2(qz).
inline HolomorphicQExpansion g_q(u64 q, u64 N) {
    if (q < 2) throw DomainError("g_q: q must be at least 2");
    return eisenstein_combination({{1, 1.0}, {q, -static_cast<double>(q)}}, q, N);
}

/// G_{q1,q2}(z) = G_{q1}(z) - G_{q1}(q2 z).
inline HolomorphicQExpansion g_q1q2(u64 q1, u64 q2, u64 N) {
    if (q1 < 2 || q2 < 2) throw DomainError("g_q1q2: q1, q2 must be at least 2");
    std::map<u64, double> t;
    const double a = static_cast<double>(q1);
    t[1] += 1.0;
    t[q1] += -a;
    t[q2] += -1.0;
    t[q1 * q2] += a;
    return eisenstein_combination(t, q1 * q2, N);
}

/// Smallest N with sum_{n>N} 24 C n (1 + log n) e^{-2 pi n y} below tol.
inline u64 q_truncation_for(double y, double coefficient_scale, double tol = 1e-15) {
    if (!(y >= min_imaginary_part)) throw TruncationError("q-expansion: Im z below the supported minimum 0.2");
    const double r = std::exp(-2.0 * std::numbers::pi * y);
    for (u64 N = 1;; ++N) {
        // Geometric majorant of the tail from N+1 on.
        const double n1 = static_cast<double>(N + 1);
        const double lead = 24.0 * coefficient_scale * n1 * (1.0 + std::log(n1)) * std::pow(r, n1);
        if (lead / (1.0 - r) / (1.0 - r) < tol) return N;
    }
}

/// Truncated evaluation; N is raised to the truncation that Im z demands.
inline cplx eval_q_expansion(const HolomorphicQExpansion& f, cplx z, double tol = 1e-15) {
    double scale = 1.0;
    for (const auto& [d, td] : f.eisenstein_combination) scale = std::max(scale, std::abs(td));
    if (f.eisenstein_combination.empty()) {
        for (u64 n = 1; n <= f.truncation(); ++n) {
            const double dn = static_cast<double>(n);
            scale = std::max(scale, std::abs(f[n]) / (24.0 * dn * (1.0 + std::log(dn))));
        }
    } else {
        scale *= static_cast<double>(f.eisenstein_combination.size());
    }
    const u64 need = q_truncation_for(z.imag(), scale, tol);
    if (need > f.truncation())
        throw TruncationError("q-expansion: " + std::to_string(f.truncation()) + " terms, Im z needs " +
                              std::to_string(need));
    const cplx q = std::exp(cplx(0.0, 2.0 * std::numbers::pi) * z);
    ComplexCompensatedSum acc;
    acc += f[0];
    cplx qn = 1.0;
    for (u64 n = 1; n <= need; ++n) {
        qn *= q;
        acc += f[n] * qn;
    }
    return acc.value();
}

inline cplx mobius(const SL2Matrix& g, cplx z) {
    return (static_cast<double>(g.a) * z + static_cast<double>(g.b)) /
           (static_cast<double>(g.c) * z + static_cast<double>(g.d));
}

/// |E_2(gz) - (cz+d)^2 E_2(z) + (6i/pi) c (cz+d)|; N grows with the
/// smaller of Im z and Im gz.
inline double quasimodular_residual(const SL2Matrix& g, cplx z, u64 N) {
    if (g.det() != 1) throw DomainError("quasimodular_residual: determinant must be 1");
    const cplx gz = mobius(g, z);
    const double y = std::min(z.imag(), gz.imag());
    const u64 need = std::max(N, q_truncation_for(y, 1.0));
    const auto e2 = e2_coefficients(need);
    const cplx j = static_cast<double>(g.c) * z + static_cast<double>(g.d);
    const cplx anomaly = cplx(0.0, 6.0 / std::numbers::pi) * static_cast<double>(g.c) * j;
    return std::abs(eval_q_expansion(e2, gz) - j * j * eval_q_expansion(e2, z) + anomaly);
}

/// |f(gz) - (cz+d)^2 f(z)| for a weight-2 expansion.
inline double modular_residual(const HolomorphicQExpansion& f, const SL2Matrix& g, cplx z) {
    if (g.det() != 1) throw DomainError("modular_residual: determinant must be 1");
    const cplx gz = mobius(g, z);
    const cplx j = static_cast<double>(g.c) * z + static_cast<double>(g.d);
    return std::abs(eval_q_expansion(f, gz) - j * j * eval_q_expansion(f, z));
}

// ---------------------------------------------------------------------------
// Maass forms

/// rho(n) for 0 < |n| <= N with rho(-n) = parity * rho(n).
struct MaassFourierData {
    std::vector<cplx> positive;  ///< rho(1..N) at index n (index 0 unused)
    cplx s_phi;
    int parity = 1;

    u64 truncation() const { return positive.empty() ? 0 : positive.size() - 1; }
    cplx rho(i64 n) const {
        if (n == 0 || static_cast<u64>(std::abs(n)) > truncation()) throw DomainError("rho: index out of range");
        return n > 0 ? positive[static_cast<std::size_t>(n)]
                     : static_cast<double>(parity) * positive[static_cast<std::size_t>(-n)];
    }
};

inline MaassFourierData maass_data_from_system(const hecke::HeckeEigenSystem& sys, u64 N) {
    MaassFourierData d;
    d.positive.assign(N + 1, 0.0);
    for (u64 n = 1; n <= N; ++n) d.positive[n] = sys.coefficient(static_cast<i64>(n));
    d.s_phi = sys.s_phi();
    d.parity = sys.parity();
    return d;
}

/// Data with general (not parity-tied) coefficients on both sides.
struct TwoSidedFourierData {
    std::map<i64, cplx> rho;
    cplx s_phi;
};

struct MaassValue {
    cplx value;
    /// Bound for the omitted |n| > N terms, from K_nu(x) <= K_{Re nu}(x)
    /// and the trivial bound |rho(n)| <= C sqrt(n).
    double tail_bound = 0.0;
};

namespace detail {

inline MaassValue maass_sum(const std::map<i64, cplx>& rho, cplx s_phi, cplx z, u64 N, double coeff_scale) {
    const double y = z.imag(), x = z.real();
    if (!(y > 0.0)) throw DomainError("maass_eval: Im z must be positive");
    const cplx nu = s_phi - 0.5;
    std::map<u64, cplx> kcache;
    ComplexCompensatedSum acc;
    for (const auto& [n, c] : rho) {
        const u64 an = static_cast<u64>(std::abs(n));
        if (an > N || c == cplx{}) continue;
        auto it = kcache.find(an);
        if (it == kcache.end())
            it = kcache.emplace(an, special::bessel_k(nu, 2.0 * std::numbers::pi * static_cast<double>(an) * y)).first;
        acc += c * std::sqrt(y) * it->second * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(n) * x);
    }
    MaassValue out;
    out.value = acc.value();
    // K_a(t) <= sqrt(2 pi/t) e^{-t + a^2/(2t)} (from cosh u >= 1 + u^2/2), summed geometrically.
    const double a = std::abs(nu.real());
    const double t1 = 2.0 * std::numbers::pi * static_cast<double>(N + 1) * y;
    const double r = std::exp(-2.0 * std::numbers::pi * y);
    const double lead = coeff_scale * std::sqrt(static_cast<double>(N + 1)) * std::sqrt(y) *
                        std::sqrt(2.0 * std::numbers::pi / t1) * std::exp(-t1 + a * a / (2.0 * t1));
    out.tail_bound = 2.0 * lead / (1.0 - r) / (1.0 - r);
    return out;
}

inline double trivial_bound_constant(const std::map<i64, cplx>& rho) {
    double c = 1.0;
    for (const auto& [n, v] : rho) c = std::max(c, std::abs(v) / std::sqrt(static_cast<double>(std::abs(n))));
    return c;
}

}  // namespace detail

/// sum_{0<|n|<=N} rho(n) sqrt(y) K_{s_phi - 1/2}(2 pi |n| y) e^{2 pi i n x}.
inline MaassValue maass_eval(const MaassFourierData& data, cplx z, u64 N) {
    std::map<i64, cplx> rho;
    const u64 M = std::min(N, data.truncation());
    for (u64 n = 1; n <= M; ++n) {
        rho[static_cast<i64>(n)] = data.positive[n];
        rho[-static_cast<i64>(n)] = static_cast<double>(data.parity) * data.positive[n];
    }
    return detail::maass_sum(rho, data.s_phi, z, M, detail::trivial_bound_constant(rho));
}

inline MaassValue maass_eval(const TwoSidedFourierData& data, cplx z, u64 N) {
    return detail::maass_sum(data.rho, data.s_phi, z, N, detail::trivial_bound_constant(data.rho));
}

/// Coefficientwise twist psi(n) rho(n), both signs of n.
inline TwoSidedFourierData twist_coefficients(const MaassFourierData& data, const DirichletCharacter& psi, u64 N) {
    TwoSidedFourierData out;
    out.s_phi = data.s_phi;
    const u64 M = std::min(N, data.truncation());
    for (u64 n = 1; n <= M; ++n) {
        const i64 k = static_cast<i64>(n);
        out.rho[k] = psi(k) * data.rho(k);
        out.rho[-k] = psi(-k) * data.rho(-k);
    }
    return out;
}

/// |tau(psibar)^{-1} sum_{a mod r} psibar(a) phi(z + a/r) - (phi x psi)(z)|,
/// with phi x psi evaluated from the coefficients psi(n) rho(n).
inline double twist_average_residual(const MaassFourierData& data, const DirichletCharacter& psi, cplx z, u64 N) {
    if (!psi.is_primitive()) throw DomainError("twist_average_residual: character must be primitive");
    const u64 r = psi.modulus();
    const auto bar = psi.conjugate();
    const cplx tau = arith::gauss_sum(bar);
    ComplexCompensatedSum avg;
    for (u64 a = 0; a < r; ++a) {
        const cplx w = bar(static_cast<i64>(a));
        if (w == cplx{}) continue;
        avg += w * maass_eval(data, z + static_cast<double>(a) / static_cast<double>(r), N).value;
    }
    const cplx lhs = avg.value() / tau;
    const cplx rhs = maass_eval(twist_coefficients(data, psi, N), z, N).value;
    return std::abs(lhs - rhs);
}

}  // namespace spectral_forge::forms
