#pragma once

// Verification suites shared by the command-line driver and the acceptance
// runner. Each suite returns a list of named checks (measured error against
// a tolerance) in a fixed order, independent of how work is scheduled.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spectral_forge/arith.hpp"
#include "spectral_forge/forms.hpp"
#include "spectral_forge/hecke.hpp"
#include "spectral_forge/kato.hpp"
#include "spectral_forge/lfunc.hpp"
#include "spectral_forge/parallel.hpp"
#include "spectral_forge/psint.hpp"
#include "spectral_forge/special.hpp"
#include "spectral_forge/spectral.hpp"

namespace spectral_forge::suites {

using arith::cplx;
using arith::DirichletCharacter;
using arith::i64;
using arith::u64;

struct Value {
    std::string name;
    cplx value;
    bool is_complex = false;
};

inline Value real_value(std::string name, double v) { return {std::move(name), v, false}; }
inline Value complex_value(std::string name, cplx v) { return {std::move(name), v, true}; }

struct Check {
    std::string name;
    std::vector<Value> values;
    /// Measured discrepancy; compared against `tolerance` unless `pass` was
    /// decided otherwise (exact or boolean checks set tolerance to 0).
    double error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct SuiteReport {
    std::string suite;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<Check> checks;
    double wall_seconds = 0.0;

    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
    std::size_t failures() const {
        return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.pass; }));
    }
    double worst_ratio() const {
        double w = 0.0;
        for (const auto& c : checks)
            if (c.tolerance > 0.0) w = std::max(w, c.error / c.tolerance);
        return w;
    }
};

inline Check tolerance_check(std::string name, double error, double tol, std::vector<Value> values = {}) {
    return {std::move(name), std::move(values), error, tol, error <= tol};
}

inline Check exact_check(std::string name, bool ok, std::vector<Value> values = {}) {
    return {std::move(name), std::move(values), ok ? 0.0 : 1.0, 0.0, ok};
}

inline double rel_error(cplx a, cplx b) {
    const double d = std::abs(a - b);
    if (d == 0.0) return 0.0;
    return d / std::max(std::abs(a), std::abs(b));
}

/// Shortest round-trip decimal form.
inline std::string fmt(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline std::string fmt(cplx v) {
    if (v.imag() == 0.0) return fmt(v.real());
    return fmt(v.real()) + (v.imag() < 0.0 ? "" : "+") + fmt(v.imag()) + "i";
}

namespace detail {

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline std::vector<DirichletCharacter> even_characters(u64 q) {
    auto all = arith::enumerate_characters(q);
    std::erase_if(all, [](const DirichletCharacter& c) { return !c.is_even(); });
    return all;
}

/// Per-item generator so parallel work draws the same numbers as serial work.
inline std::mt19937_64 item_rng(u64 seed, u64 stream, u64 item) {
    return std::mt19937_64(hecke::splitmix64(hecke::splitmix64(seed ^ (stream << 32)) + item));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline arith::SL2Matrix random_sl2(std::mt19937_64& rng, i64 bound) {
    std::uniform_int_distribution<i64> u(-bound, bound);
    for (;;) {
        const i64 a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        if (a * d - b * c == 1) return {a, b, c, d};
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// lfunc: sum sigma_1(n) lambda(n) n^{-s} = L(s-1) L(s) / L(2s-1, chi)

struct RankinOptions {
    u64 seed = 1;
    cplx s = 3.5;
    int systems = 100;
    u64 N = 100'000;
    u64 P = 100'000;
};

inline SuiteReport rankin_suite(const RankinOptions& o) {
    detail::Stopwatch sw;
    SuiteReport rep{"rankin", {{"seed", std::to_string(o.seed)}, {"s", fmt(o.s)}, {"systems", std::to_string(o.systems)},
                               {"N", std::to_string(o.N)}, {"P", std::to_string(o.P)}}, {}, 0.0};
    static constexpr u64 levels[] = {1, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13};
    rep.checks = parallel_map(static_cast<std::size_t>(o.systems), [&](std::size_t i) {
        auto rng = detail::item_rng(o.seed, 1, i);
        const u64 q = levels[rng() % std::size(levels)];
        const auto chars = detail::even_characters(q);
        const auto& chi = chars[rng() % chars.size()];
        const cplx sp(0.5, detail::uniform(rng, 0.0, 10.0));
        const int parity = rng() % 2 ? 1 : -1;
        auto sys = hecke::random_system(rng(), q, chi, sp, parity);
        const auto ser = lfunc::rankin_sigma_series(sys, o.s, o.N);
        const auto closed = lfunc::rankin_closed_form(sys, o.s, o.N, o.P);
        return tolerance_check("system " + std::to_string(i), rel_error(ser.value, closed.value), 1e-6,
                               {real_value("level", static_cast<double>(q)), complex_value("s_phi", sp),
                                complex_value("series", ser.value), complex_value("closed", closed.value)});
    });
    rep.wall_seconds = sw.seconds();
    return rep;
}

/// 40-term local series against the closed local factor.
struct LocalFactorOptions {
    u64 seed = 1;
    cplx s = 3.5;
    u64 p_max = 100;
    int draws = 10;
    int terms = 40;
};

inline SuiteReport local_factor_suite(const LocalFactorOptions& o) {
    detail::Stopwatch sw;
    SuiteReport rep{"local-factor", {{"seed", std::to_string(o.seed)}, {"s", fmt(o.s)}, {"p_max", std::to_string(o.p_max)},
                                     {"draws", std::to_string(o.draws)}}, {}, 0.0};
    for (u64 p : arith::primes_upto(o.p_max)) {
        auto rng = detail::item_rng(o.seed, 2, p);
        double worst = 0.0;
        for (int k = 0; k < o.draws; ++k) {
            // chi(p) on the unit circle, lambda(p) = 2 cos t sqrt(chi(p)).
            const cplx chi_p = std::polar(1.0, detail::uniform(rng, -std::numbers::pi, std::numbers::pi));
            const cplx lam = 2.0 * std::cos(detail::uniform(rng, 0.0, std::numbers::pi)) * std::sqrt(chi_p);
            worst = std::max(worst, rel_error(lfunc::rankin_local_series(lam, chi_p, p, o.s, o.terms),
                                              lfunc::rankin_local_factor(lam, chi_p, p, o.s)));
        }
        rep.checks.push_back(tolerance_check("p = " + std::to_string(p), worst, 1e-12));
    }
    rep.wall_seconds = sw.seconds();
    return rep;
}

// ---------------------------------------------------------------------------
// psint

/// Truncations for one evaluation point. s = 2 sits closest to the edge of
/// absolute convergence and gets the longest sums.
struct PSTruncation {
    u64 N = 1'000'000;          ///< series / quadrature terms
    u64 P = 1'000'000;          ///< Euler-product primes
    u64 N_dirichlet = 100'000;  ///< L(2s, chi) terms
};

inline PSTruncation default_ps_truncation(cplx s) {
    if (s.real() <= 2.0) return {10'000'000, 10'000'000, 100'000};
    return {};
}

struct PSOptions {
    u64 level = 6, q1 = 2, q2 = 3;
    cplx s = 2.5;
    u64 seed = 7;
    /// "all", "series", "quadrature" or "closed".
    std::string mode = "all";
    std::optional<PSTruncation> truncation;
};

inline SuiteReport ps_suite(const PSOptions& o) {
    detail::Stopwatch sw;
    const PSTruncation t = o.truncation.value_or(default_ps_truncation(o.s));
    SuiteReport rep{"ps", {{"level", std::to_string(o.level)}, {"q1", std::to_string(o.q1)}, {"q2", std::to_string(o.q2)},
                           {"s", fmt(o.s)}, {"seed", std::to_string(o.seed)}, {"mode", o.mode},
                           {"N", std::to_string(t.N)}, {"P", std::to_string(t.P)}}, {}, 0.0};
    if (o.mode != "all" && o.mode != "series" && o.mode != "quadrature" && o.mode != "closed")
        throw DomainError("ps: mode must be all, series, quadrature or closed");
    if (o.q1 * o.q2 != o.level) throw DomainError("ps: q1 q2 must equal the level");
    auto rng = detail::item_rng(o.seed, 3, 0);
    const auto chars = detail::even_characters(o.level);
    const auto chi = chars[rng() % chars.size()];
    const cplx sp(0.5, detail::uniform(rng, 0.5, 5.0));
    const u64 sys_seed = rng();
    auto odd = hecke::random_system(sys_seed, o.level, chi, sp, -1);
    auto even = hecke::random_system(sys_seed, o.level, chi, sp, 1);
    const bool want_closed = o.mode == "all" || o.mode == "closed";
    const bool want_unfolded = o.mode != "closed";
    std::optional<forms::HolomorphicQExpansion> f;
    if (want_unfolded) f = forms::g_q1q2(o.q1, o.q2, t.N);

    auto value_check = [&](const psint::PSResult& r) {
        return exact_check(std::string("value ") + psint::to_string(r.mode), std::isfinite(std::abs(r.value)),
                           {complex_value("value", r.value), real_value("truncation_bound", r.tolerance.truncation_bound),
                            real_value("quadrature_error", r.tolerance.quadrature_error),
                            real_value("ill_conditioned", r.tolerance.ill_conditioned ? 1.0 : 0.0)});
    };
    std::optional<psint::PSResult> ser, qua, clo;
    if (o.mode == "all" || o.mode == "series") ser = psint::ps_series(odd, *f, o.s, t.N);
    if (o.mode == "all" || o.mode == "quadrature") qua = psint::ps_quadrature(odd, *f, o.s, t.N);
    if (want_closed) clo = psint::ps_closed(odd, o.q1, o.q2, o.s, t.N_dirichlet, t.P);
    for (const auto* r : {&ser, &qua, &clo})
        if (*r) rep.checks.push_back(value_check(**r));
    if (ser && qua) rep.checks.push_back(tolerance_check("series vs quadrature", rel_error(ser->value, qua->value), 1e-7));
    if (ser && clo) rep.checks.push_back(tolerance_check("series vs closed", rel_error(ser->value, clo->value), 1e-6));

    bool zero = true;
    if (want_unfolded) {
        zero = zero && psint::ps_series(even, *f, o.s, t.N).value == cplx{};
        zero = zero && psint::ps_quadrature(even, *f, o.s, t.N).value == cplx{};
    }
    if (want_closed) zero = zero && psint::ps_closed(even, o.q1, o.q2, o.s, t.N_dirichlet, t.P).value == cplx{};
    rep.checks.push_back(exact_check("even system vanishes", zero));
    odd.release_table();
    rep.wall_seconds = sw.seconds();
    return rep;
}

/// Many odd systems over several levels and evaluation points.
struct PSBatchOptions {
    u64 seed = 1;
    int systems = 100;
    std::vector<u64> levels = {4, 6, 9, 10, 12};
    std::vector<cplx> points = {2.0, 2.5, 3.0, {2.5, 1.0}};
    /// Imaginary parts of s_phi are drawn from [lo, hi].
    double im_lo = 0.5, im_hi = 5.0;
};

inline std::pair<u64, u64> default_split(u64 level) {
    for (u64 q1 = 2; q1 * q1 <= level; ++q1)
        if (level % q1 == 0 && level / q1 >= 2) return {q1, level / q1};
    throw DomainError("ps: level has no factorization q1 q2 with q1, q2 >= 2");
}

inline SuiteReport ps_batch_suite(const PSBatchOptions& o) {
    detail::Stopwatch sw;
    SuiteReport rep{"ps-batch", {{"seed", std::to_string(o.seed)}, {"systems", std::to_string(o.systems)}}, {}, 0.0};
    u64 n_max = 0;
    for (cplx s : o.points) n_max = std::max(n_max, default_ps_truncation(s).N);
    const std::size_t L = o.levels.size();
    for (std::size_t li = 0; li < L; ++li) {
        const u64 level = o.levels[li];
        const auto [q1, q2] = default_split(level);
        const auto f = forms::g_q1q2(q1, q2, n_max);
        const auto chars = detail::even_characters(level);
        const int count = o.systems / static_cast<int>(L) + (static_cast<int>(li) < o.systems % static_cast<int>(L) ? 1 : 0);
        for (int i = 0; i < count; ++i) {
            auto rng = detail::item_rng(o.seed, 4, level * 100000 + static_cast<u64>(i));
            const auto& chi = chars[rng() % chars.size()];
            const cplx sp(0.5, detail::uniform(rng, o.im_lo, o.im_hi));
            const u64 sys_seed = rng();
            auto sys = hecke::random_system(sys_seed, level, chi, sp, -1);
            const std::string tag = "level " + std::to_string(level) + " #" + std::to_string(i);
            for (cplx s : o.points) {
                const auto t = default_ps_truncation(s);
                const auto a = psint::ps_series(sys, f, s, t.N);
                const auto b = psint::ps_quadrature(sys, f, s, t.N);
                const auto c = psint::ps_closed(sys, q1, q2, s, t.N_dirichlet, t.P);
                const std::vector<Value> vals{complex_value("s_phi", sp), complex_value("s", s),
                                              complex_value("series", a.value), complex_value("quadrature", b.value),
                                              complex_value("closed", c.value)};
                rep.checks.push_back(
                    tolerance_check(tag + " s=" + fmt(s) + " series vs quadrature", rel_error(a.value, b.value), 1e-7, vals));
                rep.checks.push_back(
                    tolerance_check(tag + " s=" + fmt(s) + " series vs closed", rel_error(a.value, c.value), 1e-6, vals));
            }
            sys.release_table();
        }
        // Even partner of the first system at this level: exact zero everywhere.
        auto rng = detail::item_rng(o.seed, 5, level);
        auto even = hecke::random_system(rng(), level, chars[rng() % chars.size()], {0.5, 2.0}, 1);
        bool zero = true;
        for (cplx s : o.points) {
            const u64 N = 1000;
            zero = zero && psint::ps_series(even, f, s, N).value == cplx{};
            zero = zero && psint::ps_quadrature(even, f, s, N).value == cplx{};
            zero = zero && psint::ps_closed(even, q1, q2, s, N, N).value == cplx{};
        }
        rep.checks.push_back(exact_check("level " + std::to_string(level) + " even system vanishes", zero));
    }
    rep.wall_seconds = sw.seconds();
    return rep;
}

// ---------------------------------------------------------------------------
// special

struct BesselOptions {
    u64 seed = 1;
    int samples = 100;
};

/// Closed-form moment against quadrature of e^{-y} K_{s_phi-1/2}(y) y^{s-1/2}
/// for 0.55 <= Re s <= 3, |Im s| <= 2, s_phi = 1/2 + it with |t| <= 5.
inline SuiteReport bessel_suite(const BesselOptions& o) {
    detail::Stopwatch sw;
    SuiteReport rep{"bessel", {{"seed", std::to_string(o.seed)}, {"samples", std::to_string(o.samples)}}, {}, 0.0};
    rep.checks = parallel_map(static_cast<std::size_t>(o.samples), [&](std::size_t i) {
        auto rng = detail::item_rng(o.seed, 6, i);
        const cplx s(detail::uniform(rng, 0.55, 3.0), detail::uniform(rng, -2.0, 2.0));
        const cplx sp(0.5, detail::uniform(rng, -5.0, 5.0));
        const cplx closed = special::bessel_moment(s, sp);
        const auto q = special::bessel_moment_quadrature(s, sp);
        return tolerance_check("sample " + std::to_string(i), rel_error(q.value, closed), 1e-8,
                               {complex_value("s", s), complex_value("s_phi", sp), complex_value("closed", closed),
                                complex_value("quadrature", q.value)});
    });
    rep.wall_seconds = sw.seconds();
    return rep;
}

// ---------------------------------------------------------------------------
// arith

struct GaussOptions {
    u64 r_max = 100;
    i64 n_max = 200;
};

/// |tau(psi)| = sqrt(r) and psi(n) tau(conj psi) = sum_a conj psi(a) e(na/r)
/// for every primitive psi of conductor r <= r_max.
inline SuiteReport gauss_suite(const GaussOptions& o) {
    detail::Stopwatch sw;
    SuiteReport rep{"gauss", {{"r_max", std::to_string(o.r_max)}, {"n_max", std::to_string(o.n_max)}}, {}, 0.0};
    for (u64 r = 1; r <= o.r_max; ++r) {
        double mod_err = 0.0, twist_err = 0.0;
        const auto prims = arith::primitive_characters(r);
        const i64 ri = static_cast<i64>(r);
        std::vector<cplx> roots(r), bar_values(r);
        for (i64 k = 0; k < ri; ++k) roots[static_cast<std::size_t>(k)] = arith::unit_root(k, ri);
        for (const auto& psi : prims) {
            mod_err = std::max(mod_err, std::abs(std::abs(arith::gauss_sum(psi)) - std::sqrt(static_cast<double>(r))));
            const auto bar = psi.conjugate();
            const cplx tau_bar = arith::gauss_sum(bar);
            for (i64 a = 0; a < ri; ++a) bar_values[static_cast<std::size_t>(a)] = bar(a);
            for (i64 n = 1; n <= o.n_max; ++n) {
                ComplexCompensatedSum acc;
                for (i64 a = 0; a < ri; ++a)
                    acc += bar_values[static_cast<std::size_t>(a)] * roots[static_cast<std::size_t>(n * a % ri)];
                twist_err = std::max(twist_err, std::abs(acc.value() - psi(n) * tau_bar));
            }
        }
        if (prims.empty()) continue;
        rep.checks.push_back(tolerance_check("r = " + std::to_string(r) + " modulus", mod_err, 1e-10,
                                             {real_value("primitive", static_cast<double>(prims.size()))}));
        rep.checks.push_back(tolerance_check("r = " + std::to_string(r) + " twist identity", twist_err, 1e-10));
    }
    rep.wall_seconds = sw.seconds();
    return rep;
}

// ---------------------------------------------------------------------------
// hecke

struct HeckeOptions {
    u64 seed = 1;
    int systems = 1000;
    u64 M = 200;
};

inline SuiteReport hecke_suite(const HeckeOptions& o) {
    detail::Stopwatch sw;
    SuiteReport rep{"hecke", {{"seed", std::to_string(o.seed)}, {"systems", std::to_string(o.systems)},
                              {"M", std::to_string(o.M)}}, {}, 0.0};
    static constexpr u64 levels[] = {1, 4, 5, 6, 8, 9, 10, 12, 13, 18, 20, 25, 27};
    const auto results = parallel_map(static_cast<std::size_t>(o.systems), [&](std::size_t i) {
        auto rng = detail::item_rng(o.seed, 7, i);
        const u64 q = levels[rng() % std::size(levels)];
        const auto chars = detail::even_characters(q);
        const auto& chi = chars[rng() % chars.size()];
        const cplx sp(0.5, detail::uniform(rng, 0.0, 10.0));
        auto sys = hecke::random_system(rng(), q, chi, sp, rng() % 2 ? 1 : -1);
        const double rel = hecke::max_hecke_residual(sys, o.M);
        // Ramified magnitudes |lambda(p)| for p | q.
        double ram = 0.0;
        for (const auto& [p, e] : arith::factorize(q))
            ram = std::max(ram, std::abs(std::abs(sys.seed(p)) - hecke::ramified_magnitude(p, q, chi.conductor())));
        return std::pair{rel, ram};
    });
    double worst_rel = 0.0, worst_ram = 0.0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        worst_rel = std::max(worst_rel, results[i].first);
        worst_ram = std::max(worst_ram, results[i].second);
    }
    rep.checks.push_back(tolerance_check("hecke relation m, n <= " + std::to_string(o.M), worst_rel, 1e-12));
    rep.checks.push_back(tolerance_check("ramified magnitude law", worst_ram, 1e-12));
    rep.wall_seconds = sw.seconds();
    return rep;
}

// ---------------------------------------------------------------------------
// forms

struct EisensteinOptions {
    u64 seed = 1;
    int samples = 50;
};

inline SuiteReport eisenstein_suite(const EisensteinOptions& o) {
    detail::Stopwatch sw;
    SuiteReport rep{"eisenstein", {{"seed", std::to_string(o.seed)}, {"samples", std::to_string(o.samples)}}, {}, 0.0};
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull}) {
        const auto g = forms::g_q(q, 10);
        rep.checks.push_back(exact_check("g_" + std::to_string(q) + " b_0 = 1 - q",
                                         g[0] == cplx(1.0 - static_cast<double>(q)), {complex_value("b0", g[0])}));
    }
    for (auto [q1, q2] : {std::pair<u64, u64>{2, 3}, {2, 5}, {3, 4}, {2, 2}, {3, 3}}) {
        const auto g = forms::g_q1q2(q1, q2, 10);
        rep.checks.push_back(exact_check("g_" + std::to_string(q1) + "," + std::to_string(q2) + " b_0 = 0, b_1 = -24",
                                         g[0] == cplx(0.0) && g[1] == cplx(-24.0),
                                         {complex_value("b0", g[0]), complex_value("b1", g[1])}));
    }
    auto rng = detail::item_rng(o.seed, 8, 0);
    double worst = 0.0;
    int done = 0;
    while (done < o.samples) {
        const auto g = detail::random_sl2(rng, 5);
        const cplx z(detail::uniform(rng, -0.5, 0.5), detail::uniform(rng, 0.5, 1.5));
        if (forms::mobius(g, z).imag() < forms::min_imaginary_part) continue;
        worst = std::max(worst, forms::quasimodular_residual(g, z, 200));
        ++done;
    }
    rep.checks.push_back(tolerance_check("E2 quasi-modularity", worst, 1e-8,
                                         {real_value("samples", static_cast<double>(o.samples))}));
    rep.wall_seconds = sw.seconds();
    return rep;
}

// ---------------------------------------------------------------------------
// kato

struct KatoOptions {
    u64 seed = 1;
    int families = 50;
    /// Dimension; 0 draws one per family from [3, 12].
    int dim = 0;
    std::vector<double> eps_grid = {1e-1, 5.62341325190349e-2, 3.16227766016838e-2, 1.77827941003892e-2, 1e-2,
                                    5.62341325190349e-3, 3.16227766016838e-3, 1.77827941003892e-3, 1e-3};
};

inline SuiteReport kato_suite(const KatoOptions& o) {
    detail::Stopwatch sw;
    std::string grid;
    for (double e : o.eps_grid) grid += (grid.empty() ? "" : ",") + fmt(e);
    SuiteReport rep{"kato", {{"seed", std::to_string(o.seed)}, {"families", std::to_string(o.families)},
                             {"dim", std::to_string(o.dim)}, {"eps_grid", grid}}, {}, 0.0};
    const auto per = parallel_map(static_cast<std::size_t>(o.families), [&](std::size_t i) {
        auto rng = detail::item_rng(o.seed, 9, i);
        const int d = o.dim > 0 ? o.dim : 3 + static_cast<int>(rng() % 10);
        const auto fam = kato::random_family(rng, d);
        const kato::SpectralWindow w{0.0, 0.5, 64};
        const auto r = kato::expansion_check(fam, w, o.eps_grid);
        double proj = 0.0;
        for (double eps : o.eps_grid) {
            const auto p = kato::contour_projection(fam, eps, w);
            proj = std::max(proj, (p.P - kato::spectral_projector(fam.member(eps), w)).cwiseAbs().maxCoeff());
        }
        const std::string tag = "family " + std::to_string(i);
        std::vector<Check> out;
        out.push_back({tag + " eigenvalue slope", {real_value("slope", r.slope), real_value("dim", d)},
                       std::max(0.0, 1.9 - r.slope), 0.0, r.slope >= 1.9});
        out.push_back(tolerance_check(tag + " contour vs diagonalization", proj, 1e-8));
        const bool first_order = r.projection_slope >= 0.9 && r.projection_residual_richardson <= 1e-8;
        out.push_back({tag + " projection identity",
                       {real_value("projection_slope", r.projection_slope),
                        real_value("richardson_residual", r.projection_residual_richardson)},
                       r.projection_residual_richardson, 1e-8, first_order});
        return out;
    });
    for (const auto& v : per) rep.checks.insert(rep.checks.end(), v.begin(), v.end());
    rep.wall_seconds = sw.seconds();
    return rep;
}

// ---------------------------------------------------------------------------
// spectral: Laplace machinery

struct LaplaceOptions {
    u64 seed = 1;
    int spectra = 100;
};

inline SuiteReport laplace_suite(const LaplaceOptions& o) {
    detail::Stopwatch sw;
    SuiteReport rep{"laplace", {{"seed", std::to_string(o.seed)}, {"spectra", std::to_string(o.spectra)}}, {}, 0.0};
    for (double w : {1.0, 2.0, 3.5})
        for (double rho : {1.0, 2.0}) {
            // L[t^{w-1}] = Gamma(w)/z^w; the smoothed inverse is Gamma(w) u^{w+rho-1}/Gamma(w+rho).
            const double gw = std::tgamma(w);
            auto F = [w, gw](cplx z) { return gw * std::exp(-w * std::log(z)); };
            for (double u : {0.5, 1.0, 2.0}) {
                const auto r = spectral::bromwich_smoothed(F, rho, u, 1.0);
                const double want = gw * std::pow(u, w + rho - 1.0) / std::tgamma(w + rho);
                rep.checks.push_back(tolerance_check(
                    "bromwich w=" + fmt(w) + " rho=" + fmt(rho) + " u=" + fmt(u), std::abs(r.value - want), 1e-6,
                    {complex_value("value", r.value), real_value("closed", want)}));
            }
            for (double u : {-0.5, -1.0, -2.0}) {
                const auto r = spectral::bromwich_smoothed(F, rho, u, 1.0);
                rep.checks.push_back(tolerance_check("bromwich w=" + fmt(w) + " rho=" + fmt(rho) + " u=" + fmt(u),
                                                     std::abs(r.value), 1e-6, {complex_value("value", r.value)}));
            }
        }
    {
        const cplx z(1.0, 1.0);
        const auto r = spectral::laplace([](double t) { return cplx(std::pow(t, 1.5)); }, z, {1.0, 0.5});
        const cplx want = std::tgamma(2.5) * std::exp(-2.5 * std::log(z));
        rep.checks.push_back(tolerance_check("laplace t^{1.5} at 1+i", rel_error(r.value, want), 1e-10));
    }
    bool all = true;
    int strict = 0;
    for (int k = 0; k < o.spectra; ++k) {
        auto rng = detail::item_rng(o.seed, 10, static_cast<u64>(k));
        spectral::SpectrumList s;
        const int n = 1 + static_cast<int>(rng() % 60);
        for (int i = 0; i < n; ++i) s.eigenvalues.push_back(detail::uniform(rng, 0.0, 20.0));
        std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
        const auto c = spectral::sandwich_check(s, detail::uniform(rng, 0.0, 20.0), detail::uniform(rng, 1e-3, 2.0));
        all = all && c.left && c.right;
        strict += c.right_strict ? 1 : 0;
    }
    rep.checks.push_back(exact_check("sandwich inequalities", all,
                                     {real_value("spectra", o.spectra), real_value("right_strict", strict)}));
    rep.wall_seconds = sw.seconds();
    return rep;
}

// ---------------------------------------------------------------------------
// spectral: geometric side

inline spectral::GeodesicClassData demo_class_data() {
    spectral::GeodesicClassData d;
    d.area = std::numbers::pi / 3.0;
    const cplx w3 = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    d.hyperbolic = {{std::exp(2.0), {1.0}}, {6.854101966249685, {-1.0}}, {13.928203230275509, {w3}},
                    {33.970562748477140, {std::conj(w3)}}};
    d.elliptic = {{2, {1.0}}, {3, {w3, std::conj(w3)}}};
    d.cusps.open = 1;
    d.cusps.closed = 1;
    d.cusps.chi_values = {-1.0};
    d.cusps.k1 = 1.0;
    d.cusps.phi_trace = 0.0;
    return d;
}

struct TraceOptions {
    spectral::GeodesicClassData data = demo_class_data();
    std::vector<cplx> z = {0.5, 1.0, {1.0, 0.5}, 2.0};
    int k_max = 8;
    std::optional<spectral::SpectrumList> spectrum;
};

inline SuiteReport trace_suite(const TraceOptions& o) {
    using namespace spectral;
    detail::Stopwatch sw;
    std::string zs;
    for (cplx z : o.z) zs += (zs.empty() ? "" : ",") + fmt(z);
    SuiteReport rep{"trace", {{"z", zs}, {"k_max", std::to_string(o.k_max)}}, {}, 0.0};
    o.data.validate();
    QuadratureSpec gk, de;
    gk.scheme = Scheme::gauss_kronrod;
    de.scheme = Scheme::double_exponential;
    auto agree = [&](const std::string& name, cplx a, cplx b, std::vector<Value> v = {}) {
        rep.checks.push_back(tolerance_check(name, rel_error(a, b), 1e-10, std::move(v)));
    };
    for (cplx z : o.z) {
        const auto tf = TestFunction::gaussian(z);
        const std::string tag = "z=" + fmt(z) + " ";
        const auto a = geometric_side(o.data, tf, o.k_max, EllipticKernel::half_angle, gk);
        const auto b = geometric_side(o.data, tf, o.k_max, EllipticKernel::half_angle, de);
        agree(tag + "identity two schemes", a.identity.value, b.identity.value, {complex_value("value", b.identity.value)});
        agree(tag + "elliptic two schemes", a.elliptic.value, b.elliptic.value, {complex_value("value", b.elliptic.value)});
        agree(tag + "parabolic two schemes", a.parabolic.value, b.parabolic.value,
              {complex_value("value", b.parabolic.value)});
        rep.checks.push_back(exact_check(tag + "hyperbolic (no quadrature)", a.hyperbolic.value == b.hyperbolic.value,
                                         {complex_value("value", b.hyperbolic.value),
                                          real_value("truncation_bound", b.hyperbolic.error)}));
        const cplx sum = b.identity.value + b.hyperbolic.value + b.elliptic.value + b.parabolic.value;
        rep.checks.push_back(exact_check(tag + "assembly equals component sum", sum == b.total,
                                         {complex_value("total", b.total)}));
        if (o.spectrum) {
            const cplx spec = spectral_side(*o.spectrum, tf);
            rep.checks.push_back({tag + "spectral side (reported only)",
                                  {complex_value("spectral", spec), complex_value("geometric", b.total)},
                                  std::abs(spec - b.total), 0.0, true});
        }
    }
    // Linearity in h over consecutive pairs of z.
    const cplx alpha(2.0, -1.0), beta(-0.5, 0.25);
    for (std::size_t i = 0; i + 1 < o.z.size(); ++i) {
        const auto f1 = TestFunction::gaussian(o.z[i]), f2 = TestFunction::gaussian(o.z[i + 1]);
        const auto mix = combine(alpha, f1, beta, f2);
        const auto a = geometric_side(o.data, f1, o.k_max), b = geometric_side(o.data, f2, o.k_max),
                   c = geometric_side(o.data, mix, o.k_max);
        const std::string tag = "linearity z=" + fmt(o.z[i]) + "," + fmt(o.z[i + 1]) + " ";
        agree(tag + "identity", c.identity.value, alpha * a.identity.value + beta * b.identity.value);
        agree(tag + "hyperbolic", c.hyperbolic.value, alpha * a.hyperbolic.value + beta * b.hyperbolic.value);
        agree(tag + "elliptic", c.elliptic.value, alpha * a.elliptic.value + beta * b.elliptic.value);
        agree(tag + "parabolic", c.parabolic.value, alpha * a.parabolic.value + beta * b.parabolic.value);
    }
    rep.wall_seconds = sw.seconds();
    return rep;
}

// ---------------------------------------------------------------------------
// Small drivers

struct SmoothOptions {
    spectral::SpectrumList spectrum;
    double T = 0.0;
    double w = 1.0;
    std::optional<double> delta;
};

inline SuiteReport smooth_suite(const SmoothOptions& o) {
    detail::Stopwatch sw;
    o.spectrum.validate();
    SuiteReport rep{"smooth", {{"T", fmt(o.T)}, {"w", fmt(o.w)}}, {}, 0.0};
    const double v = spectral::smoothed_counting(o.spectrum, o.T, o.w);
    rep.checks.push_back(exact_check("smoothed counting", std::isfinite(v), {real_value("value", v)}));
    if (o.delta) {
        rep.parameters.emplace_back("delta", fmt(*o.delta));
        const auto c = spectral::sandwich_check(o.spectrum, o.T, *o.delta);
        rep.checks.push_back(exact_check("sandwich", c.left && c.right,
                                         {real_value("N0(T)", c.n0_T), real_value("quotient", c.quotient),
                                          real_value("N0(T+delta)", c.n0_T_delta),
                                          real_value("right_strict", c.right_strict ? 1.0 : 0.0)}));
    }
    rep.wall_seconds = sw.seconds();
    return rep;
}

struct TwistScanOptions {
    u64 seed = 1;
    u64 level = 1;
    cplx s = 2.0;
    u64 M = 1;
    u64 r_max = 30;
    double threshold = 0.05;
    u64 N = 20'000;
};

inline SuiteReport twist_scan_suite(const TwistScanOptions& o) {
    detail::Stopwatch sw;
    SuiteReport rep{"twist-scan", {{"seed", std::to_string(o.seed)}, {"level", std::to_string(o.level)}, {"s", fmt(o.s)},
                                   {"M", std::to_string(o.M)}, {"rmax", std::to_string(o.r_max)},
                                   {"threshold", fmt(o.threshold)}, {"N", std::to_string(o.N)}}, {}, 0.0};
    auto rng = detail::item_rng(o.seed, 11, 0);
    const auto chars = detail::even_characters(o.level);
    auto sys = hecke::random_system(rng(), o.level, chars[rng() % chars.size()],
                                    {0.5, detail::uniform(rng, 0.0, 10.0)}, rng() % 2 ? 1 : -1);
    const auto hits = lfunc::twist_nonvanishing_scan(sys, o.s, o.M, o.r_max, o.threshold, o.N);
    for (const auto& h : hits) {
        // Re-certify with twice the terms.
        const auto again = lfunc::l_series(hecke::twist(sys, h.psi), o.s, 2 * o.N);
        const bool ok = std::abs(again.value) > o.threshold + again.tail_bound && std::gcd(h.conductor, o.M) == 1 &&
                        h.psi.is_even() && h.psi.is_primitive();
        rep.checks.push_back(exact_check("conductor " + std::to_string(h.conductor),
                                         ok, {complex_value("value", h.value), real_value("tail_bound", h.tail_bound),
                                              complex_value("recheck", again.value)}));
    }
    rep.parameters.emplace_back("hits", std::to_string(hits.size()));
    rep.wall_seconds = sw.seconds();
    return rep;
}

struct CharacterDump {
    DirichletCharacter chi;
    cplx gauss;
};

inline SuiteReport characters_suite(u64 q, std::vector<CharacterDump>* dump = nullptr) {
    detail::Stopwatch sw;
    SuiteReport rep{"characters", {{"q", std::to_string(q)}}, {}, 0.0};
    const auto all = arith::enumerate_characters(q);
    rep.checks.push_back(exact_check("count = phi(q)", all.size() == arith::euler_phi(q),
                                     {real_value("count", static_cast<double>(all.size()))}));
    double orth = 0.0;
    for (const auto& c : all) {
        ComplexCompensatedSum s;
        for (u64 n = 0; n < q; ++n) s += c(static_cast<i64>(n));
        const double want = c.is_principal() ? static_cast<double>(arith::euler_phi(q)) : 0.0;
        orth = std::max(orth, std::abs(s.value() - want));
        if (dump) dump->push_back({c, arith::gauss_sum(c)});
    }
    rep.checks.push_back(tolerance_check("orthogonality", orth, 1e-10));
    rep.wall_seconds = sw.seconds();
    return rep;
}

}  // namespace spectral_forge::suites
