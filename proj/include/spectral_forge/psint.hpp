#pragma once

// The unfolded Phillips-Sarnak pairing I(s) of an odd Maass form with a
// weight-2 holomorphic form, computed three independent ways:
//   series     : Gamma-factor prefactor times the Rankin-Selberg series,
//   quadrature : direct Bessel-moment quadrature times the unfolded sum,
//   closed     : Euler-factor prefactor times a quotient of completed L-functions.

#include <cmath>
#include <complex>
#include <list>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include "spectral_forge/arith.hpp"
#include "spectral_forge/errors.hpp"
#include "spectral_forge/forms.hpp"
#include "spectral_forge/hecke.hpp"
#include "spectral_forge/lfunc.hpp"
#include "spectral_forge/special.hpp"
#include "spectral_forge/summation.hpp"

namespace spectral_forge::psint {

using arith::cplx;
using arith::i64;
using arith::u64;
using forms::HolomorphicQExpansion;
using hecke::HeckeEigenSystem;

enum class Mode { closed, series, quadrature };

inline const char* to_string(Mode m) {
    switch (m) {
        case Mode::closed: return "closed";
        case Mode::series: return "series";
        case Mode::quadrature: return "quadrature";
    }
    return "?";
}

struct ToleranceReport {
    /// Absolute bound on the truncation error under `model`; infinite if the
    /// truncated series is not absolutely convergent.
    double truncation_bound = lfunc::infinity;
    /// Estimated error of the Bessel-moment quadrature (quadrature mode only).
    double quadrature_error = 0.0;
    /// Distance of the Gamma arguments s + s_phi and s - s_phi + 1 to the poles.
    double pole_distance = lfunc::infinity;
    bool ill_conditioned = false;
    std::string model;
};

struct PSResult {
    cplx value;
    Mode mode = Mode::series;
    cplx s;
    int parity = -1;
    u64 terms = 0;
    ToleranceReport tolerance;
};

struct PSOptions {
    /// Every rho(n) is multiplied by this constant (I(s) is linear in phi).
    cplx rho_scale = 1.0;
    special::QuadratureSpec quadrature = {1e-13, 1e-12, 4000, special::Scheme::double_exponential};
};

namespace detail {

/// Weights b_n n^{-(s+1/2)} for n = 1..N, cached per (expansion, s, N).
class WeightCache {
public:
    std::shared_ptr<const std::vector<cplx>> get(const HolomorphicQExpansion& f, cplx s, u64 N) {
        const Key key{s.real(), s.imag(), N};
        {
            std::lock_guard lock(mutex_);
            for (auto it = entries_.begin(); it != entries_.end(); ++it)
                if (it->key == key && same_owner(it->source, f.coefficients)) {
                    entries_.splice(entries_.begin(), entries_, it);
                    return it->weights;
                }
        }
        auto w = std::make_shared<std::vector<cplx>>(N + 1);
        const cplx e = s + 0.5;
        const bool real_e = e.imag() == 0.0;
        for (u64 n = 1; n <= N; ++n) {
            const cplx b = f[n];
            if (b == cplx{}) continue;
            const double dn = static_cast<double>(n);
            (*w)[n] = real_e ? b * std::pow(dn, -e.real()) : cmul(b, std::exp(-e * std::log(dn)));
        }
        std::lock_guard lock(mutex_);
        entries_.push_front({f.coefficients, key, w});
        while (entries_.size() > capacity) entries_.pop_back();
        return w;
    }

    void clear() {
        std::lock_guard lock(mutex_);
        entries_.clear();
    }

    static constexpr std::size_t capacity = 4;

private:
    using Key = std::tuple<double, double, u64>;
    struct Entry {
        std::weak_ptr<const std::vector<cplx>> source;
        Key key;
        std::shared_ptr<const std::vector<cplx>> weights;
    };
    // Identity by control block, so a recycled address never matches.
    static bool same_owner(const std::weak_ptr<const std::vector<cplx>>& a,
                           const std::shared_ptr<const std::vector<cplx>>& b) {
        return !a.expired() && !a.owner_before(b) && !b.owner_before(a);
    }
    std::mutex mutex_;
    std::list<Entry> entries_;
};

inline WeightCache& weight_cache() {
    static WeightCache cache;
    return cache;
}

/// Scale C with |b_n| <= 24 C n (1 + log n).
inline double coefficient_scale(const HolomorphicQExpansion& f) {
    if (!f.eisenstein_combination.empty()) {
        double c = 0.0;
        for (const auto& [d, t] : f.eisenstein_combination) c += std::abs(t) / static_cast<double>(d);
        return c;
    }
    double c = 0.0;
    for (u64 n = 1; n <= f.truncation(); ++n) {
        const double dn = static_cast<double>(n);
        c = std::max(c, std::abs(f[n]) / (24.0 * dn * (1.0 + std::log(dn))));
    }
    return c;
}

struct UnfoldedSum {
    cplx value;
    double tail_bound;
    std::string model;
};

/// sum_{n <= N} b_n c_n n^{-(s+1/2)}, c_n = rho(n) (difference = false) or
/// rho(n) - rho(-n) (difference = true), rho(n) = lambda(n).
inline UnfoldedSum unfolded_sum(const HeckeEigenSystem& sys, const HolomorphicQExpansion& f, cplx s, u64 N,
                                bool difference) {
    if (N > f.truncation()) throw TruncationError("psint: q-expansion shorter than the requested truncation");
    const auto w = weight_cache().get(f, s, N);
    const auto t = sys.coefficient_table(N);
    const double eps = static_cast<double>(sys.parity());
    ComplexCompensatedSum acc;
    for (u64 n = 1; n <= N; ++n) {
        const cplx c = difference ? (*t)[n] - eps * (*t)[n] : (*t)[n];
        acc += cmul((*w)[n], c);
    }
    const double a = s.real() + 0.5 - 1.0 - sys.growth_exponent();
    const double scale = (difference ? 2.0 : 1.0) * 24.0 * coefficient_scale(f);
    return {acc.value(), scale * lfunc::bounds::divisor_tail(static_cast<double>(N), a, 2),
            lfunc::growth_model(sys) + ", |b_n| <= 24 C n(1 + log n)"};
}

inline void fill_conditioning(ToleranceReport& tol, const HeckeEigenSystem& sys, cplx s) {
    const cplx a = s + sys.s_phi(), b = s - sys.s_phi() + 1.0;
    auto dist = [](cplx z) {
        const double k = std::min(0.0, std::round(z.real()));
        return std::abs(z - k);
    };
    tol.pole_distance = std::min(dist(a), dist(b));
    tol.ill_conditioned = !(tol.truncation_bound < lfunc::infinity) || tol.pole_distance < 0.25;
}

inline PSResult parity_zero(const HeckeEigenSystem& sys, cplx s, Mode m) {
    PSResult r;
    r.value = 0.0;
    r.mode = m;
    r.s = s;
    r.parity = sys.parity();
    r.tolerance.truncation_bound = 0.0;
    r.tolerance.model = "even parity: exact zero";
    return r;
}

}  // namespace detail

/// I(s) = 2/(2^{2s} pi^{s-1}) Gamma(s+s_phi) Gamma(s-s_phi+1)/Gamma(s) sum b_n rho(n) n^{-(s+1/2)}.
inline PSResult ps_series(const HeckeEigenSystem& sys, const HolomorphicQExpansion& f, cplx s, u64 N,
                          const PSOptions& opt = {}) {
    if (sys.is_even()) return detail::parity_zero(sys, s, Mode::series);
    PSResult r;
    r.mode = Mode::series;
    r.s = s;
    r.parity = sys.parity();
    r.terms = N;
    const cplx lg = special::log_gamma(s + sys.s_phi()) + special::log_gamma(s - sys.s_phi() + 1.0) -
                    special::log_gamma(s);
    const cplx pref = 2.0 * std::exp(lg - 2.0 * s * std::numbers::ln2 - (s - 1.0) * std::log(std::numbers::pi));
    const auto sum = detail::unfolded_sum(sys, f, s, N, false);
    r.value = pref * sum.value * opt.rho_scale;
    r.tolerance.truncation_bound = std::abs(pref * opt.rho_scale) * sum.tail_bound;
    r.tolerance.model = sum.model;
    detail::fill_conditioning(r.tolerance, sys, s);
    return r;
}

/// I(s) = s/(2 pi)^{s-1/2} M(s) sum b_n (rho(n) - rho(-n)) n^{-(s+1/2)}, with
/// M(s) = int_0^inf e^{-y} K_{s_phi-1/2}(y) y^{s-1/2} dy by quadrature.
inline PSResult ps_quadrature(const HeckeEigenSystem& sys, const HolomorphicQExpansion& f, cplx s, u64 N,
                              const PSOptions& opt = {}) {
    if (sys.is_even()) return detail::parity_zero(sys, s, Mode::quadrature);
    PSResult r;
    r.mode = Mode::quadrature;
    r.s = s;
    r.parity = sys.parity();
    r.terms = N;
    const auto m = special::bessel_moment_quadrature(s, sys.s_phi(), opt.quadrature);
    const cplx pref = s * std::exp(-(s - 0.5) * std::log(2.0 * std::numbers::pi));
    const auto sum = detail::unfolded_sum(sys, f, s, N, true);
    r.value = pref * m.value * sum.value * opt.rho_scale;
    const double ap = std::abs(pref * opt.rho_scale);
    r.tolerance.truncation_bound = ap * std::abs(m.value) * sum.tail_bound;
    r.tolerance.quadrature_error = ap * m.error * std::abs(sum.value);
    r.tolerance.model = sum.model;
    detail::fill_conditioning(r.tolerance, sys, s);
    return r;
}

/// I(s) = -24 (1 - lambda(q1) q1^{1/2-s}) (1 - lambda(q2) q2^{-s-1/2})
///        Lambda(s-1/2, phi) Lambda(s+1/2, phi) / Lambda(2s, chi)
/// for f = G_{q1,q2}; phi-factors by Euler products over p <= P, the
/// chi-factor by its Dirichlet series to N.
inline PSResult ps_closed(const HeckeEigenSystem& sys, u64 q1, u64 q2, cplx s, u64 N, u64 P,
                          const PSOptions& opt = {}) {
    if (q1 < 2 || q2 < 2 || q1 * q2 != sys.level())
        throw DomainError("ps_closed: need q1, q2 >= 2 with q1 q2 = level");
    if (sys.is_even()) return detail::parity_zero(sys, s, Mode::closed);
    if (sys.nebentypus().modulus() != sys.level())
        throw DomainError("ps_closed: nebentypus must be given modulo the level");
    PSResult r;
    r.mode = Mode::closed;
    r.s = s;
    r.parity = sys.parity();
    r.terms = P;
    const double d1 = static_cast<double>(q1), d2 = static_cast<double>(q2);
    const cplx e1 = 1.0 - sys.coefficient(static_cast<i64>(q1)) * std::exp((0.5 - s) * std::log(d1));
    const cplx e2 = 1.0 - sys.coefficient(static_cast<i64>(q2)) * std::exp((-s - 0.5) * std::log(d2));
    const auto a = lfunc::euler_product(sys, s - 0.5, P);
    const auto b = lfunc::euler_product(sys, s + 0.5, P);
    const auto c = lfunc::dirichlet_l(sys.nebentypus(), 2.0 * s, N);
    if (c.value == cplx{}) throw DomainError("ps_closed: L(2s, chi) vanished numerically");
    const double q = static_cast<double>(sys.level());
    const cplx gchi = std::exp(s * std::log(q / std::numbers::pi) + special::log_gamma(s));
    const cplx lam = lfunc::gamma_factor(sys, s - 0.5) * a.value * lfunc::gamma_factor(sys, s + 0.5) * b.value /
                     (gchi * c.value);
    r.value = -24.0 * e1 * e2 * lam * opt.rho_scale;
    const double rel = a.tail_bound / std::abs(a.value) + b.tail_bound / std::abs(b.value) +
                       c.tail_bound / std::abs(c.value);
    r.tolerance.truncation_bound = std::abs(r.value) * rel;
    r.tolerance.model = a.model + "; Euler products to P, L(2s, chi) series to N";
    detail::fill_conditioning(r.tolerance, sys, s);
    if (!(c.tail_bound < 0.5 * std::abs(c.value))) r.tolerance.ill_conditioned = true;
    return r;
}

}  // namespace spectral_forge::psint
