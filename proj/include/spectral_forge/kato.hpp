#pragma once

// Finite-dimensional perturbation theory for T(eps) = T + eps T1 + eps^2 T2:
// resolvents, contour (Riesz) projections, reduced resolvents and checks of
// the first- and second-order expansions of stable eigenvalues.
//
// For matrices the region of boundedness and the region of strong
// convergence both reduce to the resolvent set, so contours only need to
// avoid the spectrum.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "spectral_forge/errors.hpp"

namespace spectral_forge::kato {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline double operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

inline bool is_self_adjoint(const Matrix& m, double tol = 1e-14) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

inline bool is_normal(const Matrix& m, double tol = 1e-12) {
    const Matrix c = m * m.adjoint() - m.adjoint() * m;
    return c.cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs2().maxCoeff());
}

struct OperatorFamily {
    Matrix T, T1, T2;

    OperatorFamily() = default;
    OperatorFamily(Matrix t, Matrix t1, Matrix t2) : T(std::move(t)), T1(std::move(t1)), T2(std::move(t2)) {
        if (T.rows() != T.cols() || T1.rows() != T.rows() || T1.cols() != T.cols() || T2.rows() != T.rows() ||
            T2.cols() != T.cols())
            throw DomainError("OperatorFamily: matrices must be square of one dimension");
        if (!is_self_adjoint(T) || !is_self_adjoint(T1) || !is_self_adjoint(T2))
            throw DomainError("OperatorFamily: T, T1, T2 must be self-adjoint");
    }

    Eigen::Index dimension() const { return T.rows(); }
    Matrix member(double eps) const { return T + eps * T1 + (eps * eps) * T2; }
};

struct SpectralWindow {
    double center = 0.0;
    double radius = 0.1;
    int points = 64;
};

/// (M - zeta)^{-1}. Throws SpectralPointError when zeta is numerically in
/// the spectrum.
inline Matrix resolvent(const Matrix& m, cplx zeta) {
    const Eigen::Index d = m.rows();
    const Matrix a = m - zeta * Matrix::Identity(d, d);
    Eigen::PartialPivLU<Matrix> lu(a);
    const auto piv = lu.matrixLU().diagonal().cwiseAbs();
    const double rc = piv.minCoeff() > 0.0 ? lu.rcond() : 0.0;
    if (!(rc > 1e-14)) throw SpectralPointError("resolvent: zeta lies on the spectrum");
    return lu.inverse();
}

/// ||R(zeta)|| dist(zeta, spec M); equals 1 for normal M.
inline double resolvent_norm_ratio(const Matrix& m, cplx zeta) {
    Eigen::ComplexEigenSolver<Matrix> es(m, false);
    double dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) dist = std::min(dist, std::abs(es.eigenvalues()(i) - zeta));
    return operator_norm(resolvent(m, zeta)) * dist;
}

/// Number of singular values above threshold.
inline int numerical_rank(const Matrix& m, double threshold = 1e-6) {
    Eigen::JacobiSVD<Matrix> svd(m);
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) r += svd.singularValues()(i) > threshold;
    return r;
}

struct ContourProjection {
    Matrix P;
    double idempotency_residual = 0.0;  ///< max |(P^2 - P)_ij|
    int points = 0;
    int rank = 0;
    double trace = 0.0;
};

namespace detail {

inline Matrix trapezoid_projection(const Matrix& m, const SpectralWindow& w, int n) {
    const Eigen::Index d = m.rows();
    Matrix acc = Matrix::Zero(d, d);
    for (int k = 0; k < n; ++k) {
        const cplx e = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
        acc += resolvent(m, w.center + w.radius * e) * e;
    }
    // -(1/2 pi i) oint R dzeta with dzeta = i delta e^{i t} dt.
    return acc * (-w.radius / n);
}

}  // namespace detail

/// P = -(1/2 pi i) oint_{|zeta - center| = radius} R(zeta) dzeta, trapezoid
/// rule on the circle. The point count is doubled from window.points until
/// the idempotency residual stops improving.
inline ContourProjection contour_projection(const Matrix& m, const SpectralWindow& w) {
    if (!(w.radius > 0.0) || w.points < 4) throw DomainError("contour_projection: invalid window");
    ContourProjection best;
    best.idempotency_residual = std::numeric_limits<double>::infinity();
    for (int n = w.points; n <= 64 * w.points; n *= 2) {
        Matrix p = detail::trapezoid_projection(m, w, n);
        const double res = (p * p - p).cwiseAbs().maxCoeff();
        const bool improved = res < 0.5 * best.idempotency_residual;
        if (res < best.idempotency_residual) {
            best.P = std::move(p);
            best.idempotency_residual = res;
            best.points = n;
        }
        if (res <= 1e-13 || !improved) break;
    }
    if (!(best.idempotency_residual <= 1e-8))
        throw SpectralPointError("contour_projection: contour does not separate the spectrum (P^2 != P)");
    best.rank = numerical_rank(best.P);
    best.trace = best.P.trace().real();
    return best;
}

inline ContourProjection contour_projection(const OperatorFamily& fam, double eps, const SpectralWindow& w) {
    return contour_projection(fam.member(eps), w);
}

struct Eigensplit {
    Eigen::VectorXd values;          ///< all eigenvalues, ascending
    Matrix vectors;                  ///< orthonormal eigenvectors (columns)
    std::vector<Eigen::Index> inside;  ///< indices with |mu - center| < radius
    double gap = 0.0;                ///< distance from center to eigenvalues outside
};

inline Eigensplit eigensplit(const Matrix& t, const SpectralWindow& w) {
    if (!is_self_adjoint(t, 1e-12)) throw DomainError("eigensplit: matrix must be self-adjoint");
    Eigen::SelfAdjointEigenSolver<Matrix> es(t);
    Eigensplit s;
    s.values = es.eigenvalues();
    s.vectors = es.eigenvectors();
    s.gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
        if (std::abs(s.values(i) - w.center) < w.radius)
            s.inside.push_back(i);
        else
            s.gap = std::min(s.gap, std::abs(s.values(i) - w.center));
    }
    return s;
}

/// Reduced resolvent S = sum over eigenvalues mu outside the window of
/// v v^* / (mu - lambda): (T - lambda) S = 1 - P and S P = 0.
inline Matrix reduced_resolvent(const Matrix& t, double lambda, const SpectralWindow& w) {
    const auto s = eigensplit(t, w);
    if (s.inside.empty()) throw DomainError("reduced_resolvent: no eigenvalue inside the window");
    const double scale = std::max(1.0, std::abs(lambda));
    for (auto i : s.inside)
        if (std::abs(s.values(i) - lambda) > 1e-9 * scale)
            throw DomainError("reduced_resolvent: lambda is not isolated in the window");
    const Eigen::Index d = t.rows();
    Matrix out = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        if (std::find(s.inside.begin(), s.inside.end(), i) != s.inside.end()) continue;
        out += s.vectors.col(i) * s.vectors.col(i).adjoint() / (s.values(i) - lambda);
    }
    return out;
}

/// Orthogonal projection onto the eigenvectors inside the window.
inline Matrix spectral_projector(const Matrix& t, const SpectralWindow& w) {
    const auto s = eigensplit(t, w);
    const Eigen::Index d = t.rows();
    Matrix p = Matrix::Zero(d, d);
    for (auto i : s.inside) p += s.vectors.col(i) * s.vectors.col(i).adjoint();
    return p;
}

struct ExpansionReport {
    double lambda = 0.0;
    int multiplicity = 0;
    double gap = 0.0;
    std::vector<double> first_order;    ///< eigenvalues of P T1 P on range(P), ascending
    std::vector<double> eps_grid;
    std::vector<double> residuals;      ///< max_j |mu_j(eps) - lambda - eps mu_j^(1)|
    double slope = 0.0;                 ///< log-log fit; +inf when residuals sit at rounding level
    std::vector<double> projection_residuals;  ///< forward-difference identity residual per eps
    double projection_slope = 0.0;
    double projection_residual_richardson = 0.0;
    std::vector<int> ranks;             ///< rank P_eps per eps
    int rank0 = 0;
};

namespace detail {

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

/// Checks mu(eps) = lambda + eps mu^(1) + O(eps^2) with mu^(1) the eigenvalues
/// of P T1 P, and the first-order projection identity
/// (T - lambda) P' = -(1 - P)(T1 - mu^(1)) P.
inline ExpansionReport expansion_check(const OperatorFamily& fam, const SpectralWindow& w,
                                       std::vector<double> eps_grid) {
    if (eps_grid.size() < 2) throw DomainError("expansion_check: need at least two eps values");
    std::sort(eps_grid.begin(), eps_grid.end());
    const auto split = eigensplit(fam.T, w);
    if (split.inside.empty()) throw DomainError("expansion_check: no eigenvalue inside the window");
    ExpansionReport rep;
    rep.lambda = split.values(split.inside.front());
    for (auto i : split.inside)
        if (std::abs(split.values(i) - rep.lambda) > 1e-9 * std::max(1.0, std::abs(rep.lambda)))
            throw DomainError("expansion_check: window encloses a cluster, not one eigenvalue");
    rep.multiplicity = static_cast<int>(split.inside.size());
    rep.gap = split.gap;
    const double t1n = operator_norm(fam.T1);
    const double eps_max = t1n > 0.0 ? rep.gap / (4.0 * t1n) : std::numeric_limits<double>::infinity();
    if (!(eps_grid.front() > 0.0) || eps_grid.back() > eps_max)
        throw DomainError("expansion_check: eps grid violates the gap condition eps <= gap/(4||T1||)");
    if (!(w.radius < rep.gap)) throw DomainError("expansion_check: window radius must be below the gap");

    const Eigen::Index d = fam.dimension();
    Matrix V(d, rep.multiplicity);
    for (int j = 0; j < rep.multiplicity; ++j) V.col(j) = split.vectors.col(split.inside[j]);
    Eigen::SelfAdjointEigenSolver<Matrix> reduced(V.adjoint() * fam.T1 * V);
    for (int j = 0; j < rep.multiplicity; ++j) rep.first_order.push_back(reduced.eigenvalues()(j));
    const Matrix P = V * V.adjoint();
    rep.rank0 = rep.multiplicity;

    const Matrix I = Matrix::Identity(d, d);
    const Matrix shifted = fam.T - rep.lambda * I;
    const Matrix rhs = -(I - P) * fam.T1 * P;
    const double scale = std::max({1.0, std::abs(rep.lambda), operator_norm(fam.T)});
    bool all_tiny = true;
    rep.eps_grid = eps_grid;
    for (double eps : eps_grid) {
        const auto s = eigensplit(fam.member(eps), w);
        if (static_cast<int>(s.inside.size()) != rep.multiplicity)
            throw DomainError("expansion_check: perturbed eigenvalues left the window");
        double r = 0.0;
        for (int j = 0; j < rep.multiplicity; ++j)
            r = std::max(r, std::abs(s.values(s.inside[j]) - rep.lambda - eps * rep.first_order[j]));
        rep.residuals.push_back(r);
        all_tiny = all_tiny && r <= 64.0 * std::numeric_limits<double>::epsilon() * scale;

        const auto pe = contour_projection(fam, eps, w);
        rep.ranks.push_back(pe.rank);
        const Matrix fwd = (pe.P - P) / eps;
        rep.projection_residuals.push_back((shifted * fwd - rhs).cwiseAbs().maxCoeff());
    }
    rep.slope = all_tiny ? std::numeric_limits<double>::infinity() : detail::loglog_slope(eps_grid, rep.residuals);
    bool proj_tiny = true;
    for (double r : rep.projection_residuals) proj_tiny = proj_tiny && r <= 1e-9;
    rep.projection_slope = proj_tiny ? std::numeric_limits<double>::infinity()
                                     : detail::loglog_slope(eps_grid, rep.projection_residuals);

    // Central differences at h and h/2, one Richardson step.
    const double h = eps_grid.front();
    auto central = [&](double hh) {
        return Matrix((contour_projection(fam, hh, w).P - contour_projection(fam, -hh, w).P) / (2.0 * hh));
    };
    const Matrix dp = (4.0 * central(h / 2.0) - central(h)) / 3.0;
    rep.projection_residual_richardson = (shifted * dp - rhs).cwiseAbs().maxCoeff();
    return rep;
}

struct ConvergenceProbe {
    std::vector<double> eps_grid;     ///< descending
    std::vector<double> differences;  ///< ||R_eps(zeta) - R_0(zeta)||
    bool monotone = false;
};

/// ||R_eps(zeta) - R_0(zeta)|| along a grid shrinking to 0.
inline ConvergenceProbe resolvent_convergence(const OperatorFamily& fam, cplx zeta, std::vector<double> eps_grid) {
    std::sort(eps_grid.begin(), eps_grid.end(), std::greater<>());
    ConvergenceProbe pr;
    pr.eps_grid = eps_grid;
    const Matrix r0 = resolvent(fam.T, zeta);
    for (double e : eps_grid) pr.differences.push_back(operator_norm(resolvent(fam.member(e), zeta) - r0));
    pr.monotone = true;
    for (std::size_t i = 1; i < pr.differences.size(); ++i)
        pr.monotone = pr.monotone && pr.differences[i] <= pr.differences[i - 1];
    return pr;
}

/// Hermitian d x d matrix with i.i.d. standard normal entries (GUE-like).
inline Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index d) {
    std::normal_distribution<double> n01;
    Matrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) a(i, j) = cplx(n01(rng), n01(rng));
    return (a + a.adjoint()) / 2.0;
}

/// Random family whose T has an eigenvalue 0 of the given multiplicity, the
/// rest of the spectrum at distance >= 1; T1 and T2 have operator norm 1.
inline OperatorFamily random_family(std::mt19937_64& rng, Eigen::Index d, int multiplicity = 1) {
    if (d < 2 || multiplicity < 1 || multiplicity >= d) throw DomainError("random_family: bad dimension");
    std::uniform_real_distribution<double> u(1.0, 3.0);
    std::bernoulli_distribution sign;
    Eigen::VectorXd lam(d);
    for (Eigen::Index i = 0; i < d; ++i) lam(i) = i < multiplicity ? 0.0 : (sign(rng) ? 1.0 : -1.0) * u(rng);
    Eigen::HouseholderQR<Matrix> qr(random_hermitian(rng, d) + Matrix::Identity(d, d) * cplx(0.0, 1.0));
    const Matrix Q = qr.householderQ();
    Matrix T = Q * lam.cast<cplx>().asDiagonal() * Q.adjoint();
    T = (T + T.adjoint()) / 2.0;
    Matrix T1 = random_hermitian(rng, d), T2 = random_hermitian(rng, d);
    T1 /= operator_norm(T1);
    T2 /= operator_norm(T2);
    return OperatorFamily(T, T1, T2);
}

}  // namespace spectral_forge::kato
