#include <gtest/gtest.h>

#include "spectral_forge/kato.hpp"

using namespace spectral_forge;
using namespace spectral_forge::kato;

namespace {

Matrix diag(std::initializer_list<double> v) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) m(i, i) = x, ++i;
    return m;
}

Matrix swap2() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

std::vector<double> log_grid(double hi, double lo, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(hi * std::pow(lo / hi, static_cast<double>(i) / (n - 1)));
    return g;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Resolvent, Diagonal) {
    const Matrix r = resolvent(diag({0, 1}), 0.5);
    EXPECT_LE(max_abs(r - diag({-2, 2})), 1e-15);
}

TEST(Resolvent, EigenvalueRejected) {
    EXPECT_THROW(resolvent(diag({0, 1}), 1.0), SpectralPointError);
}

TEST(Resolvent, NormIdentityForNormal) {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 10; ++k) {
        const Matrix h = random_hermitian(rng, 6);
        ASSERT_TRUE(is_normal(h));
        for (cplx z : {cplx(0.3, 0.7), cplx(-2.0, 0.1), cplx(5.0, -1.0)})
            EXPECT_NEAR(resolvent_norm_ratio(h, z), 1.0, 1e-10);
    }
}

TEST(ContourProjection, DiagonalExample) {
    OperatorFamily fam(diag({0, 1}), Matrix::Zero(2, 2), Matrix::Zero(2, 2));
    const auto p = contour_projection(fam, 0.0, {0.0, 0.3, 64});
    EXPECT_LE(max_abs(p.P - diag({1, 0})), 1e-12);
    EXPECT_EQ(p.rank, 1);
}

TEST(ContourProjection, MatchesDiagonalization) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 20; ++k) {
        auto fam = random_family(rng, 6);
        const SpectralWindow w{0.0, 0.5, 64};
        for (double eps : {0.0, 0.02, 0.1}) {
            const auto p = contour_projection(fam, eps, w);
            EXPECT_LE(max_abs(p.P - spectral_projector(fam.member(eps), w)), 1e-8);
            EXPECT_LE(p.idempotency_residual, 1e-10);
            EXPECT_LE(max_abs(p.P - p.P.adjoint()), 1e-10);
            EXPECT_NEAR(p.trace, std::round(p.trace), 1e-8);
            EXPECT_EQ(p.rank, 1);
        }
    }
}

TEST(ContourProjection, RankStableUnderPerturbation) {
    std::mt19937_64 rng(12);
    for (int k = 0; k < 10; ++k) {
        auto fam = random_family(rng, 8, 2);
        const SpectralWindow w{0.0, 0.5, 64};
        const int r0 = contour_projection(fam, 0.0, w).rank;
        EXPECT_EQ(r0, 2);
        for (double eps : {1e-3, 1e-2, 5e-2}) EXPECT_LE(contour_projection(fam, eps, w).rank, r0);
    }
}

TEST(ContourProjection, ContourThroughSpectrumRejected) {
    // The circle |zeta| = 1 passes through the eigenvalue 1.
    EXPECT_THROW(contour_projection(diag({0, 1}), {0.0, 1.0, 64}), SpectralPointError);
    // Nearly through it: the trapezoid rule cannot resolve the pole.
    EXPECT_THROW(contour_projection(diag({0, 1 + 1e-9}), {0.0, 1.0, 16}), SpectralPointError);
}

TEST(ReducedResolvent, Diagonal) {
    const Matrix s = reduced_resolvent(diag({0, 1}), 0.0, {0.0, 0.3, 64});
    EXPECT_LE(max_abs(s - diag({0, 1})), 1e-15);
}

TEST(ReducedResolvent, Identities) {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 10; ++k) {
        auto fam = random_family(rng, 8);
        const SpectralWindow w{0.0, 0.5, 64};
        const Matrix s = reduced_resolvent(fam.T, 0.0, w);
        const Matrix p = spectral_projector(fam.T, w);
        const Matrix I = Matrix::Identity(8, 8);
        EXPECT_LE(max_abs(fam.T * s - (I - p)), 1e-12);
        EXPECT_LE(max_abs(s * p), 1e-12);
        Eigen::SelfAdjointEigenSolver<Matrix> es(fam.T);
        Eigen::Index i0 = 0;
        es.eigenvalues().cwiseAbs().minCoeff(&i0);
        EXPECT_LE((s * es.eigenvectors().col(i0)).norm(), 1e-12);
    }
}

TEST(ReducedResolvent, ClusterRejected) {
    EXPECT_THROW(reduced_resolvent(diag({0, 0.1, 2}), 0.0, {0.0, 0.5, 64}), DomainError);
    EXPECT_THROW(reduced_resolvent(diag({0, 2}), 1.0, {1.0, 0.5, 64}), DomainError);
}

TEST(Expansion, TwoByTwoClosedForm) {
    OperatorFamily fam(diag({0, 1}), swap2(), Matrix::Zero(2, 2));
    const auto rep = expansion_check(fam, {0.0, 0.3, 64}, log_grid(1e-1, 1e-3, 9));
    ASSERT_EQ(rep.first_order.size(), 1u);
    EXPECT_NEAR(rep.first_order[0], 0.0, 1e-15);
    EXPECT_NEAR(rep.slope, 2.0, 0.02);
    for (std::size_t i = 0; i < rep.eps_grid.size(); ++i) {
        const double e = rep.eps_grid[i];
        EXPECT_NEAR(rep.residuals[i], std::abs((1.0 - std::sqrt(1.0 + 4.0 * e * e)) / 2.0), 1e-14);
    }
    // (T - lambda) dP/deps at 0 equals [[0,0],[-1,0]].
    EXPECT_LE(rep.projection_residual_richardson, 1e-8);
    EXPECT_GT(rep.projection_slope, 0.9);
}

TEST(Expansion, RandomFamiliesSlope) {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 20; ++k) {
        auto fam = random_family(rng, 3 + k % 10);
        const auto rep = expansion_check(fam, {0.0, 0.5, 64}, log_grid(1e-1, 1e-3, 9));
        EXPECT_GE(rep.slope, 1.9);
        EXPECT_LE(rep.projection_residual_richardson, 1e-8);
        EXPECT_GE(rep.projection_slope, 0.9);
        EXPECT_LE(rep.projection_slope, 1.1);
    }
}

TEST(Expansion, DegenerateSplitting) {
    std::mt19937_64 rng(41);
    auto fam = random_family(rng, 7, 2);
    const SpectralWindow w{0.0, 0.5, 64};
    const auto rep = expansion_check(fam, w, log_grid(1e-2, 1e-4, 5));
    ASSERT_EQ(rep.first_order.size(), 2u);
    EXPECT_GT(rep.first_order[1] - rep.first_order[0], 1e-3);
    // Direct diagonalization: (mu_j(eps) - lambda)/eps -> mu_j^(1).
    const double eps = 1e-7;
    Eigen::SelfAdjointEigenSolver<Matrix> es(fam.member(eps));
    std::vector<double> near;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()(i)) < 0.5) near.push_back(es.eigenvalues()(i) / eps);
    ASSERT_EQ(near.size(), 2u);
    EXPECT_NEAR(near[0], rep.first_order[0], 1e-6);
    EXPECT_NEAR(near[1], rep.first_order[1], 1e-6);
    EXPECT_GE(rep.slope, 1.9);
}

TEST(Expansion, GapViolationRejected) {
    OperatorFamily fam(diag({0, 1}), swap2(), Matrix::Zero(2, 2));
    EXPECT_THROW(expansion_check(fam, {0.0, 0.3, 64}, {0.5, 0.1}), DomainError);
    EXPECT_THROW(expansion_check(fam, {0.0, 0.3, 64}, {0.0, 0.1}), DomainError);
}

TEST(Expansion, NonSelfAdjointRejected) {
    Matrix a(2, 2);
    a << 0, 1, 0, 0;
    EXPECT_THROW(OperatorFamily(a, a, a), DomainError);
}

TEST(StrongConvergence, ResolventDifferenceShrinks) {
    std::mt19937_64 rng(51);
    for (int k = 0; k < 5; ++k) {
        auto fam = random_family(rng, 6);
        const auto pr = resolvent_convergence(fam, cplx(0.5, 0.5), log_grid(1e-1, 1e-4, 7));
        EXPECT_TRUE(pr.monotone);
        EXPECT_LT(pr.differences.back(), 1e-3);
    }
}
