#include <gtest/gtest.h>

#include "spectral_forge/psint.hpp"

using namespace spectral_forge;
using namespace spectral_forge::psint;
using arith::DirichletCharacter;

namespace {

constexpr u64 kN = 1'000'000;

const HolomorphicQExpansion& g23() {
    static const auto f = forms::g_q1q2(2, 3, kN);
    return f;
}

HeckeEigenSystem odd6(u64 seed, double r = 2.0) {
    return hecke::random_system(seed, 6, DirichletCharacter::principal(6), {0.5, r}, -1);
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(PSInt, EvenParityIsExactZeroInEveryMode) {
    auto sys = hecke::random_system(1, 6, DirichletCharacter::principal(6), {0.5, 2.0}, 1);
    for (cplx s : {cplx(2.5), cplx(2.5, 1.0)}) {
        EXPECT_EQ(ps_series(sys, g23(), s, kN).value, cplx(0.0));
        EXPECT_EQ(ps_quadrature(sys, g23(), s, kN).value, cplx(0.0));
        EXPECT_EQ(ps_closed(sys, 2, 3, s, 1000, 1000).value, cplx(0.0));
    }
    EXPECT_EQ(ps_series(sys, g23(), 2.5, kN).tolerance.truncation_bound, 0.0);
}

TEST(PSInt, ZeroCoefficientsGiveZero) {
    HolomorphicQExpansion zero;
    zero.coefficients = std::make_shared<const std::vector<cplx>>(101, cplx{});
    auto sys = odd6(2);
    EXPECT_EQ(ps_series(sys, zero, 2.5, 100).value, cplx(0.0));
    EXPECT_EQ(ps_quadrature(sys, zero, 2.5, 100).value, cplx(0.0));
}

TEST(PSInt, ThreeModesAgreeLevel6) {
    for (u64 seed = 0; seed < 4; ++seed) {
        auto sys = odd6(seed, 0.7 + seed);
        for (cplx s : {cplx(2.5), cplx(3.0), cplx(2.5, 1.0)}) {
            const auto a = ps_series(sys, g23(), s, kN);
            const auto b = ps_quadrature(sys, g23(), s, kN);
            const auto c = ps_closed(sys, 2, 3, s, 100000, kN);
            EXPECT_LE(rel(b.value, a.value), 1e-7) << s;
            EXPECT_LE(rel(c.value, a.value), 1e-6) << s;
            EXPECT_LE(std::abs(a.value - c.value), a.tolerance.truncation_bound + c.tolerance.truncation_bound);
            EXPECT_FALSE(a.tolerance.ill_conditioned);
            EXPECT_EQ(a.mode, Mode::series);
            EXPECT_EQ(b.mode, Mode::quadrature);
            EXPECT_EQ(c.mode, Mode::closed);
        }
    }
}

TEST(PSInt, ClosedFormRamifiedZero) {
    // Level 4 with principal nebentypus: lambda(2) = 0, so both Euler
    // prefactors are 1 and the value is -24 times the Lambda quotient.
    auto sys = hecke::random_system(3, 4, DirichletCharacter::principal(4), {0.5, 1.5}, -1);
    ASSERT_EQ(sys.seed(2), cplx(0.0));
    const cplx s = 2.5;
    const auto c = ps_closed(sys, 2, 2, s, 100000, kN);
    const cplx lam = lfunc::completed_l_euler(sys, s - 0.5, kN) * lfunc::completed_l_euler(sys, s + 0.5, kN) /
                     lfunc::completed_dirichlet_l(sys.nebentypus(), 2.0 * s, 100000);
    EXPECT_LE(rel(c.value, -24.0 * lam), 1e-13);
    const auto f = forms::g_q1q2(2, 2, kN);
    EXPECT_LE(rel(ps_series(sys, f, s, kN).value, c.value), 1e-6);
}

TEST(PSInt, OtherLevelsAndCharacters) {
    DirichletCharacter chi12 = DirichletCharacter::principal(12);
    for (const auto& c : arith::enumerate_characters(12))
        if (c.is_even() && !c.is_principal()) chi12 = c;
    ASSERT_FALSE(chi12.is_principal());
    auto sys = hecke::random_system(8, 12, chi12, {0.5, 3.3}, -1);
    const auto f = forms::g_q1q2(3, 4, kN);
    const auto a = ps_series(sys, f, 3.0, kN);
    EXPECT_LE(rel(ps_closed(sys, 3, 4, 3.0, 100000, kN).value, a.value), 1e-6);
    EXPECT_LE(rel(ps_quadrature(sys, f, 3.0, kN).value, a.value), 1e-7);
}

TEST(PSInt, HomogeneityIsExact) {
    auto sys = odd6(5);
    PSOptions scaled;
    scaled.rho_scale = cplx(-1.7, 0.3);
    const cplx s(2.5, 1.0);
    EXPECT_EQ(ps_series(sys, g23(), s, kN, scaled).value, ps_series(sys, g23(), s, kN).value * scaled.rho_scale);
    EXPECT_EQ(ps_quadrature(sys, g23(), s, kN, scaled).value,
              ps_quadrature(sys, g23(), s, kN).value * scaled.rho_scale);
    EXPECT_EQ(ps_closed(sys, 2, 3, s, 100000, 10000, scaled).value,
              ps_closed(sys, 2, 3, s, 100000, 10000).value * scaled.rho_scale);
}

TEST(PSInt, UntemperedRealSpectralParameter) {
    // |lambda(n)| up to d(n) n^{s_phi - 1/2}: convergence at s = 2.5 slows
    // to about N^{s_phi - 2}, so a longer truncation is used.
    const u64 N = 4'000'000;
    const auto f = forms::g_q1q2(2, 3, N);
    for (double sp : {0.6, 0.75, 0.9}) {
        auto sys = hecke::random_system(11, 6, DirichletCharacter::principal(6), sp, -1);
        ASSERT_GT(sys.growth_exponent(), 0.0);
        const auto a = ps_series(sys, f, 2.5, N);
        EXPECT_LE(rel(ps_quadrature(sys, f, 2.5, N).value, a.value), 1e-7) << sp;
        EXPECT_LE(rel(ps_closed(sys, 2, 3, 2.5, 100000, N).value, a.value), 1e-5) << sp;
    }
}

TEST(PSInt, ConditioningReportedOutsideConvergence) {
    auto sys = odd6(4, 1.5);
    const cplx s = sys.s_phi() + 0.9;
    const auto a = ps_series(sys, g23(), s, 100000);
    const auto b = ps_quadrature(sys, g23(), s, 100000);
    EXPECT_TRUE(a.tolerance.ill_conditioned);
    EXPECT_TRUE(b.tolerance.ill_conditioned);
    EXPECT_LE(rel(b.value, a.value), 1e-7);
}

TEST(PSInt, GuardsAndTruncation) {
    auto sys = odd6(1);
    EXPECT_THROW(ps_closed(sys, 2, 2, 2.5, 10, 10), DomainError);
    EXPECT_THROW(ps_closed(sys, 1, 6, 2.5, 10, 10), DomainError);
    EXPECT_THROW(ps_series(sys, forms::g_q1q2(2, 3, 10), 2.5, 100), TruncationError);
}
