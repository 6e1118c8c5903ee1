#include <gtest/gtest.h>

#include <random>

#include "spectral_forge/forms.hpp"

using namespace spectral_forge;
using namespace spectral_forge::forms;

namespace {

SL2Matrix random_sl2(std::mt19937_64& rng, i64 bound, i64 level = 1) {
    std::uniform_int_distribution<i64> u(-bound, bound);
    for (;;) {
        const i64 a = u(rng), b = u(rng), c = u(rng) * level, d = u(rng);
        if (a * d - b * c == 1 && std::abs(c) <= bound * level) return {a, b, c, d};
    }
}

}  // namespace

TEST(Eisenstein, E2Coefficients) {
    auto e2 = e2_coefficients(10);
    EXPECT_EQ(e2[0], cplx(1.0));
    EXPECT_EQ(e2[1], cplx(-24.0));
    EXPECT_EQ(e2[2], cplx(-72.0));
    EXPECT_EQ(e2[3], cplx(-96.0));
    EXPECT_FALSE(e2.cuspidal_at_infinity());
}

TEST(Eisenstein, GqCoefficients) {
    EXPECT_EQ(g_q(6, 5)[0], cplx(-5.0));
    EXPECT_EQ(g_q(2, 5)[2], cplx(-24.0));
    for (u64 q = 2; q <= 30; ++q) {
        auto g = g_q(q, 200);
        EXPECT_EQ(g[0], cplx(1.0 - static_cast<double>(q)));
        EXPECT_EQ(g[1], cplx(-24.0));
        for (u64 n = 1; n <= 200; ++n) {
            double expect = -24.0 * static_cast<double>(arith::sigma1(n));
            if (n % q == 0) expect += 24.0 * static_cast<double>(q * arith::sigma1(n / q));
            ASSERT_EQ(g[n], cplx(expect));
        }
    }
    EXPECT_THROW(g_q(1, 5), DomainError);
}

TEST(Eisenstein, Gq1q2Structure) {
    for (u64 q1 = 2; q1 <= 7; ++q1)
        for (u64 q2 = 2; q2 <= 7; ++q2) {
            auto g = g_q1q2(q1, q2, 300);
            EXPECT_EQ(g[0], cplx(0.0));
            EXPECT_EQ(g[1], cplx(-24.0));
            EXPECT_TRUE(g.cuspidal_at_infinity());
            EXPECT_EQ(g.level, q1 * q2);
            auto gq = g_q(q1, 300);
            for (u64 n = 1; n <= 300; ++n)
                ASSERT_EQ(g[n], gq[n] - (n % q2 == 0 ? gq[n / q2] : cplx(0.0)));
        }
}

TEST(Eisenstein, Gq1q2DoubleDifferenceOfE2) {
    // E2(z) - 2E2(2z) - E2(2z) + 2E2(4z), termwise.
    auto g = g_q1q2(2, 2, 100);
    auto e2 = e2_coefficients(100);
    for (u64 n = 0; n <= 100; ++n) {
        cplx expect = e2[n];
        if (n % 2 == 0) expect += -3.0 * e2[n / 2];
        if (n % 4 == 0) expect += 2.0 * e2[n / 4];
        ASSERT_EQ(g[n], expect) << n;
    }
    EXPECT_EQ(g[2], cplx(-24.0 * 3 + 3 * 24.0));
}

TEST(QuasiModular, TrivialMatrices) {
    const cplx z(0.3, 1.0);
    EXPECT_EQ(quasimodular_residual({1, 0, 0, 1}, z, 200), 0.0);
    EXPECT_LE(quasimodular_residual({1, 1, 0, 1}, z, 200), 1e-13);
}

TEST(QuasiModular, Inversion) { EXPECT_LE(quasimodular_residual({0, -1, 1, 0}, {0.3, 1.0}, 200), 1e-8); }

TEST(QuasiModular, RandomMatrices) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.8, 1.6);
    int done = 0;
    while (done < 50) {
        const auto g = random_sl2(rng, 5);
        const cplx z(ux(rng), uy(rng));
        if (mobius(g, z).imag() < 0.2) continue;
        ASSERT_LE(quasimodular_residual(g, z, 200), 1e-8);
        ++done;
    }
}

TEST(QuasiModular, LowImaginaryPartRejected) {
    EXPECT_THROW(quasimodular_residual({1, 0, 0, 1}, {0.0, 0.1}, 200), TruncationError);
    EXPECT_THROW(eval_q_expansion(e2_coefficients(5), {0.0, 0.3}), TruncationError);
}

TEST(ModularGq, AnomalyCancels) {
    std::mt19937_64 rng(8);
    for (u64 q : {2ull, 3ull, 5ull}) {
        auto g = g_q(q, 4000);
        int done = 0;
        while (done < 10) {
            const auto m = random_sl2(rng, 3, static_cast<i64>(q));
            const cplx z(0.1 * done - 0.4, 1.0 / static_cast<double>(q) + 0.5);
            if (mobius(m, z).imag() < 0.2) continue;
            ASSERT_LE(modular_residual(g, m, z), 1e-8) << q;
            ++done;
        }
    }
}

TEST(Maass, ZeroData) {
    MaassFourierData d;
    d.positive.assign(11, 0.0);
    d.s_phi = {0.5, 3.0};
    EXPECT_EQ(maass_eval(d, {0.1, 1.0}, 10).value, cplx(0.0));
}

TEST(Maass, ParityUnderReflection) {
    for (int parity : {1, -1}) {
        auto sys = hecke::random_system(3, 5, arith::DirichletCharacter::principal(5), {0.5, 4.0}, parity);
        auto d = maass_data_from_system(sys, 60);
        const cplx z(0.23, 0.9);
        const cplx a = maass_eval(d, z, 60).value, b = maass_eval(d, -std::conj(z), 60).value;
        EXPECT_LE(std::abs(b - static_cast<double>(parity) * a), 1e-13 * std::max(1.0, std::abs(a)));
        EXPECT_GT(std::abs(a), 1e-6);
    }
}

TEST(Maass, TailBoundCoversTruncation) {
    auto sys = hecke::random_system(2, 1, arith::DirichletCharacter(), {0.5, 2.0}, -1);
    auto d = maass_data_from_system(sys, 100);
    const cplx z(0.1, 0.5);
    auto a = maass_eval(d, z, 10), b = maass_eval(d, z, 100);
    EXPECT_LE(std::abs(a.value - b.value), a.tail_bound);
}

TEST(TwistAverage, TrivialCharacter) {
    auto sys = hecke::random_system(4, 1, arith::DirichletCharacter(), {0.5, 2.5}, -1);
    auto d = maass_data_from_system(sys, 100);
    EXPECT_LE(twist_average_residual(d, arith::DirichletCharacter(), {0.2, 1.0}, 100), 1e-14);
}

TEST(TwistAverage, QuadraticMod5AndOthers) {
    arith::DirichletCharacter leg5(5, 2, {-1, 0, 1, 1, 0});
    for (u64 seed = 0; seed < 3; ++seed) {
        auto sys = hecke::random_system(seed, 1, arith::DirichletCharacter(), {0.5, 1.0 + seed}, -1);
        auto d = maass_data_from_system(sys, 100);
        EXPECT_LE(twist_average_residual(d, leg5, {0.17, 1.0}, 100), 1e-8);
        for (const auto& psi : arith::primitive_characters(7))
            EXPECT_LE(twist_average_residual(d, psi, {-0.3, 1.2}, 100), 1e-8);
    }
}

TEST(TwistAverage, PerTermGaussIdentity) {
    arith::DirichletCharacter leg5(5, 2, {-1, 0, 1, 1, 0});
    const auto bar = leg5.conjugate();
    const cplx tau = arith::gauss_sum(bar);
    for (i64 n = -50; n <= 50; ++n) {
        ComplexCompensatedSum s;
        for (i64 a = 0; a < 5; ++a) s += bar(a) * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(n * a) / 5.0);
        EXPECT_LE(std::abs(s.value() - leg5(n) * tau), 1e-13);
    }
}
