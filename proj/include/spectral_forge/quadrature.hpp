#pragma once

// Adaptive Gauss-Kronrod and double-exponential quadrature for
// real-to-complex integrands on finite, half-infinite and infinite intervals.
// Both schemes accept every interval type, so any integral can be computed
// two independent ways.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "spectral_forge/errors.hpp"
#include "spectral_forge/summation.hpp"

namespace spectral_forge::quad {

using cplx = std::complex<double>;

enum class Scheme { gauss_kronrod, double_exponential };

struct QuadratureSpec {
    double abs_tol = 1e-14;
    double rel_tol = 1e-12;
    int max_subdivisions = 4000;
    Scheme scheme = Scheme::double_exponential;
};

/// Integration domain; either end may be infinite.
struct Interval {
    double lo;
    double hi;

    static Interval half_line(double a = 0.0) { return {a, std::numeric_limits<double>::infinity()}; }
    static Interval real_line() {
        return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    }
};

struct QuadratureResult {
    cplx value;
    double error = 0.0;
    std::size_t evaluations = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    cplx value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class G>
Segment gk15(G& g, double a, double b) {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    const cplx fc = g(c);
    cplx k = fc * kronrod_w[7];
    cplx ga = fc * gauss_w[3];
    for (int j = 0; j < 7; ++j) {
        const cplx f1 = g(c - r * kronrod_x[j]);
        const cplx f2 = g(c + r * kronrod_x[j]);
        k += (f1 + f2) * kronrod_w[j];
        if (j % 2 == 1) ga += (f1 + f2) * gauss_w[j / 2];
    }
    return {a, b, k * r, std::abs((k - ga) * r)};
}

/// Globally adaptive bisection on a finite interval of the mapped variable.
template <class G>
QuadratureResult adaptive_gk(G& g, double a, double b, const QuadratureSpec& spec) {
    std::priority_queue<Segment> heap;
    heap.push(gk15(g, a, b));
    std::size_t evals = 15;
    cplx total = heap.top().value;
    double err = heap.top().error;
    int segments = 1;
    while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (segments >= spec.max_subdivisions) {
            throw QuadratureError("gauss-kronrod: subdivision limit reached", total, err);
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw QuadratureError("gauss-kronrod: interval can no longer be bisected", total, err);
        }
        Segment left = gk15(g, worst.a, mid);
        Segment right = gk15(g, mid, worst.b);
        evals += 30;
        heap.push(left);
        heap.push(right);
        ++segments;
        // Recompute totals from scratch to keep rounding from drifting.
        ComplexCompensatedSum tv;
        CompensatedSum te;
        auto copy = heap;
        while (!copy.empty()) {
            tv += copy.top().value;
            te += copy.top().error;
            copy.pop();
        }
        total = tv.value();
        err = te.value();
    }
    return {total, err, evals};
}

/// Double-exponential rule on the t-line. `node(t, x, w)` fills the abscissa
/// and weight and returns false once the abscissa leaves representable range.
template <class F, class Node>
QuadratureResult de_rule(F& f, Node node, const QuadratureSpec& spec, int max_level) {
    std::size_t evals = 0;
    CompensatedSum magnitude;

    auto sweep = [&](double h, bool odd_only) {
        ComplexCompensatedSum acc;
        auto eval_at = [&](double t) -> std::pair<cplx, bool> {
            double x = 0.0, w = 0.0;
            if (!node(t, x, w)) return {cplx{}, false};
            const cplx fx = f(x);
            ++evals;
            if (!std::isfinite(fx.real()) || !std::isfinite(fx.imag())) {
                if (w < 1e-200) return {cplx{}, false};
                throw QuadratureError("double-exponential: integrand not finite at x=" + std::to_string(x),
                                      acc.value(), std::numeric_limits<double>::infinity());
            }
            return {fx * w, true};
        };
        if (!odd_only) {
            auto [c, ok] = eval_at(0.0);
            if (ok) {
                acc += c;
                magnitude += std::abs(c);
            }
        }
        for (int dir : {1, -1}) {
            int small = 0;
            for (long k = odd_only ? 1 : 1;; k += odd_only ? 2 : 1) {
                const double t = dir * k * h;
                auto [c, ok] = eval_at(t);
                if (!ok) break;
                acc += c;
                const double m = std::abs(c);
                magnitude += m;
                if (std::abs(t) > 1.5 && m <= 1e-19 * magnitude.value()) {
                    if (++small >= 4) break;
                } else {
                    small = 0;
                }
                if (std::abs(t) > 12.0) break;
            }
        }
        return acc.value();
    };

    double h = 1.0;
    cplx sum = sweep(h, false);
    cplx estimate = sum * h;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        sum += sweep(h, true);
        const cplx next = sum * h;
        const double diff = std::abs(next - estimate);
        estimate = next;
        if (level >= 3 && diff <= std::max(spec.abs_tol, spec.rel_tol * std::abs(estimate))) {
            return {estimate, diff, evals};
        }
        if (level == max_level) {
            throw QuadratureError("double-exponential: level limit reached", estimate, diff);
        }
    }
    return {estimate, 0.0, evals};
}

}  // namespace detail

/// Integrate f over the interval within the requested tolerances or throw
/// QuadratureError. f maps double to double or std::complex<double>.
template <class F>
QuadratureResult integrate(F&& f, Interval dom, const QuadratureSpec& spec = {}) {
    using std::numbers::pi;
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_subdivisions < 1)
        throw DomainError("integrate: tolerances must be positive and max_subdivisions >= 1");
    if (std::isnan(dom.lo) || std::isnan(dom.hi)) throw DomainError("integrate: NaN bound");
    if (dom.lo == dom.hi) return {cplx{}, 0.0, 0};
    if (dom.lo > dom.hi) {
        auto r = integrate(f, Interval{dom.hi, dom.lo}, spec);
        r.value = -r.value;
        return r;
    }
    auto fc = [&](double x) -> cplx { return cplx(f(x)); };
    const bool lo_inf = std::isinf(dom.lo), hi_inf = std::isinf(dom.hi);

    if (spec.scheme == Scheme::gauss_kronrod) {
        if (!lo_inf && !hi_inf) return detail::adaptive_gk(fc, dom.lo, dom.hi, spec);
        if (!lo_inf) {
            const double a = dom.lo;
            auto g = [&](double t) { return fc(a + t / (1.0 - t)) / ((1.0 - t) * (1.0 - t)); };
            return detail::adaptive_gk(g, 0.0, 1.0, spec);
        }
        if (!hi_inf) {
            const double b = dom.hi;
            auto g = [&](double t) { return fc(b - t / (1.0 - t)) / ((1.0 - t) * (1.0 - t)); };
            return detail::adaptive_gk(g, 0.0, 1.0, spec);
        }
        auto g = [&](double t) {
            const double d = 1.0 - t * t;
            return fc(t / d) * ((1.0 + t * t) / (d * d));
        };
        return detail::adaptive_gk(g, -1.0, 1.0, spec);
    }

    const int max_level = std::clamp(static_cast<int>(std::log2(std::max(spec.max_subdivisions, 16))) + 2, 6, 14);
    constexpr double half_pi = pi / 2.0;
    if (!lo_inf && !hi_inf) {
        // tanh-sinh; abscissae are formed from the distance to the nearer end.
        const double a = dom.lo, b = dom.hi, r = 0.5 * (b - a);
        auto node = [=](double t, double& x, double& w) {
            const double s = half_pi * std::sinh(t);
            const double e = std::exp(-2.0 * std::abs(s));
            const double dist = r * 2.0 * e / (1.0 + e);
            x = t >= 0.0 ? b - dist : a + dist;
            if (!(x > a && x < b)) return false;
            const double sech = 2.0 * std::exp(-std::abs(s)) / (1.0 + e);
            w = r * half_pi * std::cosh(t) * sech * sech;
            return std::isfinite(w);
        };
        return detail::de_rule(fc, node, spec, max_level);
    }
    if (!lo_inf || !hi_inf) {
        // exp-sinh on [a, inf), or mirrored for (-inf, b].
        const double a = lo_inf ? dom.hi : dom.lo;
        const double sign = lo_inf ? -1.0 : 1.0;
        auto node = [=](double t, double& x, double& w) {
            const double s = half_pi * std::sinh(t);
            if (s > 700.0) return false;
            const double es = std::exp(s);
            x = a + sign * es;
            if (x == a || !std::isfinite(x)) return false;
            w = half_pi * std::cosh(t) * es;
            return std::isfinite(w) && w > 0.0;
        };
        return detail::de_rule(fc, node, spec, max_level);
    }
    auto node = [=](double t, double& x, double& w) {
        const double s = half_pi * std::sinh(t);
        if (std::abs(s) > 700.0) return false;
        x = std::sinh(s);
        w = half_pi * std::cosh(t) * std::cosh(s);
        return std::isfinite(x) && std::isfinite(w);
    };
    return detail::de_rule(fc, node, spec, max_level);
}

}  // namespace spectral_forge::quad
