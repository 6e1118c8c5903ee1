#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spectral_forge/lfunc.hpp"

using namespace spectral_forge;
using namespace spectral_forge::lfunc;
using hecke::random_system;

namespace {

// mpmath references at 30 digits.
constexpr double zeta2 = 1.64493406684822643647;
constexpr double l_quad5_at_1_2 = 0.498280152368434660334;  // Hurwitz decomposition
constexpr double zeta6_over_zeta3 = 0.846335193708694902995;

HeckeEigenSystem zero_seeds(u64 level = 1) {
    return HeckeEigenSystem(level, DirichletCharacter::principal(level), {0.5, 1.0}, 1, 1.0, std::map<u64, cplx>{});
}

HeckeEigenSystem tempered(u64 seed, u64 level = 1) {
    return random_system(seed, level, DirichletCharacter::principal(level), {0.5, 1.0 + seed % 7}, -1);
}

}  // namespace

TEST(LSeries, ZeroSeedsShortTruncation) {
    auto ev = l_series(zero_seeds(), 2.0, 3);
    EXPECT_EQ(ev.value, cplx(1.0));
    EXPECT_EQ(ev.terms_used, 3u);
}

TEST(LSeries, TailBoundSelfConsistent) {
    for (u64 seed = 0; seed < 5; ++seed) {
        auto sys = tempered(seed, 6);
        auto a = l_series(sys, 3.0, 100000), b = l_series(sys, 3.0, 200000);
        EXPECT_LE(std::abs(a.value - b.value), a.tail_bound);
        EXPECT_LT(a.tail_bound, 1e-7);
    }
    EXPECT_EQ(l_series(tempered(1), 1.0, 100).tail_bound, infinity);
}

TEST(EulerProduct, EmptyProduct) {
    auto ev = euler_product(tempered(3), 2.0, 0);
    EXPECT_EQ(ev.value, cplx(1.0));
    EXPECT_EQ(ev.terms_used, 0u);
}

TEST(EulerProduct, ZeroSeedsMatchSeriesAndZetaQuotient) {
    auto sys = zero_seeds();
    auto prod = euler_product(sys, 1.5, 10000);
    auto ser = l_series(sys, 1.5, 4000000);
    EXPECT_LE(std::abs(prod.value - ser.value), 1e-6);
    EXPECT_LE(std::abs(prod.value - zeta6_over_zeta3), 1e-8);
    EXPECT_LE(std::abs(prod.value - zeta6_over_zeta3), prod.tail_bound);
}

TEST(EulerProduct, RandomTemperedAgainstSeries) {
    for (u64 seed = 0; seed < 4; ++seed) {
        auto sys = tempered(seed, 10);
        for (cplx s : {cplx(3.0), cplx(2.0, 5.0)}) {
            auto prod = euler_product(sys, s, 100000);
            auto ser = l_series(sys, s, 1000000);
            EXPECT_LE(std::abs(prod.value - ser.value), prod.tail_bound + ser.tail_bound) << s;
            EXPECT_GT(std::abs(prod.value), 0.0);
        }
    }
}

TEST(EulerProduct, VanishingFactorIsDomainError) {
    // 1 - lambda 2^{-s} + 2^{-2s} = 0 at s = 1 when lambda(2) = 2.5 (untempered).
    hecke::SystemOptions opts;
    opts.enforce_tempered = false;
    HeckeEigenSystem sys(1, DirichletCharacter(), 0.75, 1, 1.0, std::map<u64, cplx>{{2, 2.5}}, opts);
    EXPECT_THROW(euler_product(sys, 1.0, 10), DomainError);
}

TEST(CompletedL, GammaShiftByParity) {
    auto even = random_system(1, 36, DirichletCharacter::principal(36), {0.5, 2.0}, 1);
    auto odd = random_system(1, 36, DirichletCharacter::principal(36), {0.5, 2.0}, -1);
    const u64 N = 20000;
    const cplx le = l_series(even, 3.0, N).value, lo = l_series(odd, 3.0, N).value;
    // (6/pi)^3 |Gamma(3/2 + i)|^2 and (6/pi)^3 |Gamma(2 + i)|^2.
    const double pref = 6.96633143757108966384;
    EXPECT_LE(std::abs(completed_l(even, 3.0, N) - pref * 0.338768689249272934858 * le), 1e-12 * std::abs(le) * 3);
    EXPECT_LE(std::abs(completed_l(odd, 3.0, N) - pref * 0.544058109964266325900 * lo), 1e-12 * std::abs(lo) * 5);
}

TEST(DirichletL, ZetaTwo) {
    auto ev = dirichlet_l(DirichletCharacter(), 2.0, 1000000);
    EXPECT_LE(std::abs(ev.value - zeta2), ev.tail_bound);
    EXPECT_LE(std::abs(ev.value - zeta2), 1.1e-6);
}

TEST(DirichletL, QuadraticMod5AtOnePointTwo) {
    DirichletCharacter leg5(5, 2, {-1, 0, 1, 1, 0});
    auto ev = dirichlet_l(leg5, 1.2, 10000000);
    EXPECT_LE(std::abs(ev.value - l_quad5_at_1_2), 1e-8);
    EXPECT_LE(std::abs(ev.value - l_quad5_at_1_2), ev.tail_bound);
}

TEST(DirichletL, OddRejected) {
    auto odd5 = arith::enumerate_characters(5)[1];
    ASSERT_FALSE(odd5.is_even());
    EXPECT_THROW(dirichlet_l(odd5, 2.0, 10), DomainError);
    EXPECT_THROW(completed_dirichlet_l(odd5, 2.0, 10), DomainError);
}

TEST(DirichletL, CompletedUsesAmbientModulus) {
    auto chi = DirichletCharacter::principal(6);
    const cplx s = 4.0;
    const cplx l = dirichlet_l(chi, s, 1000).value;
    const cplx expect = std::pow(6.0 / std::numbers::pi, 2.0) * special::gamma(2.0) * l;
    EXPECT_LE(std::abs(completed_dirichlet_l(chi, s, 1000) - expect), 1e-14);
}

TEST(Rankin, SeriesTrivialCases) {
    EXPECT_EQ(rankin_sigma_series(tempered(2), 3.5, 1).value, cplx(1.0));
    EXPECT_EQ(rankin_sigma_series(zero_seeds(), 3.0, 3).value, cplx(1.0));
}

TEST(Rankin, LocalFactorTrivial) { EXPECT_EQ(rankin_local_factor(0.0, 0.0, 7, 3.5), cplx(1.0)); }

TEST(Rankin, LocalBruteForce) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, std::numbers::pi);
    for (u64 p : arith::primes_upto(100)) {
        for (int i = 0; i < 3; ++i) {
            const cplx chi_p = std::polar(1.0, 2.0 * u(rng));
            const cplx lam = 2.0 * std::cos(u(rng)) * std::sqrt(chi_p);
            const cplx closed = rankin_local_factor(lam, chi_p, p, 3.5);
            const cplx brute = rankin_local_series(lam, chi_p, p, 3.5, 40);
            ASSERT_LE(std::abs(closed - brute), 1e-12 * std::abs(closed)) << p;
        }
    }
}

TEST(Rankin, LocalDegenerateDoublePole) {
    const cplx closed = rankin_local_factor(2.0, 1.0, 2, 3.5);
    const cplx brute = rankin_local_series(2.0, 1.0, 2, 3.5, 80);
    EXPECT_LE(std::abs(closed - brute), 1e-12 * std::abs(closed));
    EXPECT_THROW(rankin_local_factor(2.0, 1.0, 2, 1.0), DomainError);
}

TEST(Rankin, ZeroSeedsFactorization) {
    auto sys = zero_seeds();
    auto ser = rankin_sigma_series(sys, 3.5, 100000);
    auto closed = rankin_closed_form(sys, 3.5, 100000, 100000);
    EXPECT_LE(std::abs(ser.value - closed.value), 1e-6 * std::abs(closed.value));
}

TEST(Rankin, ThreeWayFactorization) {
    for (u64 seed = 0; seed < 5; ++seed) {
        auto sys = random_system(seed, 12, arith::enumerate_characters(12)[seed % 4].is_even()
                                               ? arith::enumerate_characters(12)[seed % 4]
                                               : DirichletCharacter::principal(12),
                                 {0.5, 1.5}, -1);
        const cplx s = 3.5;
        auto ser = rankin_sigma_series(sys, s, 100000);
        auto closed = rankin_closed_form(sys, s, 100000, 100000);
        ComplexCompensatedSum logs;
        for (u64 p : arith::primes_upto(100000)) logs += std::log(rankin_local_factor(sys, p, s));
        const cplx prod = std::exp(logs.value());
        EXPECT_LE(std::abs(ser.value - closed.value), 1e-6 * std::abs(closed.value));
        EXPECT_LE(std::abs(ser.value - prod), 1e-6 * std::abs(prod));
        EXPECT_LE(std::abs(ser.value - closed.value), ser.tail_bound + closed.error_bound);
        EXPECT_FALSE(closed.ill_conditioned);
    }
}

TEST(TwistScan, FindsNonvanishingTwists) {
    auto sys = tempered(11);
    const u64 N = 20000;
    auto hits = twist_nonvanishing_scan(sys, 2.0, 1, 50, 0.05, N);
    ASSERT_FALSE(hits.empty());
    for (const auto& h : hits) {
        EXPECT_TRUE(h.psi.is_even());
        EXPECT_TRUE(h.psi.is_primitive());
        auto again = l_series(hecke::twist(sys, h.psi), 2.0, 2 * N);
        EXPECT_GT(std::abs(again.value), 0.05 + again.tail_bound);
    }
    EXPECT_TRUE(twist_nonvanishing_scan(sys, 2.0, 1, 50, infinity, N).empty());
    for (const auto& h : twist_nonvanishing_scan(sys, 2.0, 6, 30, 0.05, N)) EXPECT_EQ(std::gcd<u64>(h.conductor, 6), 1u);
}
