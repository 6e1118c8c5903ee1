#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "spectral_forge/arith.hpp"

using namespace spectral_forge;
using namespace spectral_forge::arith;

namespace {

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST(Arith, Sigma1) {
    EXPECT_EQ(sigma1(1), 1u);
    EXPECT_EQ(sigma1(12), 28u);
    for (u64 p : primes_upto(500)) EXPECT_EQ(sigma1(p), p + 1);
    EXPECT_THROW(sigma1(0), DomainError);
}

TEST(Arith, Sigma1MultiplicativeAndTable) {
    const auto table = sigma1_table(3000);
    for (u64 n = 1; n <= 3000; ++n) ASSERT_EQ(table[n], sigma1(n)) << n;
    for (u64 m = 1; m <= 60; ++m)
        for (u64 n = 1; n <= 60; ++n)
            if (std::gcd(m, n) == 1) {
                ASSERT_EQ(sigma1(m * n), sigma1(m) * sigma1(n));
            }
}

TEST(Arith, EnumerateTrivialModulus) {
    auto chars = enumerate_characters(1);
    ASSERT_EQ(chars.size(), 1u);
    for (i64 n = -5; n <= 5; ++n) EXPECT_EQ(chars[0](n), cplx(1.0, 0.0));
}

TEST(Arith, EnumerateMod5) {
    auto chars = enumerate_characters(5);
    ASSERT_EQ(chars.size(), 4u);
    int even = 0;
    for (const auto& c : chars) even += c.is_even();
    EXPECT_EQ(even, 2);
}

TEST(Arith, EnumerateMod8) {
    auto chars = enumerate_characters(8);
    ASSERT_EQ(chars.size(), 4u);
    for (const auto& c : chars) {
        for (i64 r = 1; r < 8; r += 2) {
            const cplx v = c(r);
            const bool fourth_root = close(v, 1.0, 1e-15) || close(v, -1.0, 1e-15) ||
                                     close(v, cplx(0, 1), 1e-15) || close(v, cplx(0, -1), 1e-15);
            EXPECT_TRUE(fourth_root);
        }
    }
}

TEST(Arith, EnumerationCountsDistinctAndClosed) {
    for (u64 q = 1; q <= 60; ++q) {
        auto chars = enumerate_characters(q);
        ASSERT_EQ(chars.size(), euler_phi(q)) << q;
        for (std::size_t i = 0; i < chars.size(); ++i)
            for (std::size_t j = i + 1; j < chars.size(); ++j) ASSERT_FALSE(chars[i] == chars[j]);
        if (q <= 24) {
            for (const auto& a : chars)
                for (const auto& b : chars) {
                    auto prod = a * b;
                    bool found = false;
                    for (const auto& c : chars) found = found || c == prod;
                    ASSERT_TRUE(found);
                }
        }
    }
}

TEST(Arith, CharacterInvariants) {
    for (u64 q = 1; q <= 50; ++q) {
        for (const auto& chi : enumerate_characters(q)) {
            for (u64 a = 0; a < q; ++a) {
                const cplx v = chi(static_cast<i64>(a));
                if (std::gcd(a, q) == 1) {
                    EXPECT_NEAR(std::abs(v), 1.0, 1e-15);
                    for (u64 b = 1; b < q; ++b)
                        if (std::gcd(b, q) == 1) {
                            ASSERT_TRUE(close(chi(static_cast<i64>(a * b % q)), v * chi(static_cast<i64>(b)), 1e-13));
                        }
                } else {
                    EXPECT_EQ(v, cplx{});
                }
            }
            EXPECT_EQ(chi.is_even(), close(chi(static_cast<i64>(q) - 1), 1.0, 1e-15) || q == 1);
            EXPECT_EQ(q % chi.conductor(), 0u);
        }
    }
}

TEST(Arith, Orthogonality) {
    for (u64 q = 1; q <= 50; ++q) {
        for (const auto& chi : enumerate_characters(q)) {
            ComplexCompensatedSum s;
            for (u64 a = 0; a < q; ++a) s += chi(static_cast<i64>(a));
            const double expect = chi.is_principal() ? static_cast<double>(euler_phi(q)) : 0.0;
            EXPECT_NEAR(std::abs(s.value() - expect), 0.0, 1e-12) << q;
        }
    }
}

TEST(Arith, ConductorDecompose) {
    auto [t, c] = conductor_decompose(DirichletCharacter::principal(6));
    EXPECT_EQ(c, 1u);
    EXPECT_EQ(t.modulus(), 1u);

    for (const auto& psi : primitive_characters(5)) {
        auto [p, c5] = conductor_decompose(psi);
        EXPECT_EQ(c5, 5u);
        EXPECT_TRUE(p == psi);
    }

    // Quadratic character mod 3 lifted to 15.
    DirichletCharacter quad3(3, 2, {-1, 0, 1});
    auto lifted = quad3.lift(15);
    auto [prim, q3] = conductor_decompose(lifted);
    EXPECT_EQ(q3, 3u);
    EXPECT_TRUE(prim == quad3);
    for (i64 n = 1; n < 60; ++n)
        if (std::gcd<i64>(n, 15) == 1) {
            EXPECT_EQ(lifted(n), prim(n));
        }
}

TEST(Arith, ConductorDecomposeIdempotent) {
    for (u64 q = 1; q <= 40; ++q)
        for (const auto& chi : enumerate_characters(q)) {
            auto [p, c] = conductor_decompose(chi);
            auto [pp, cc] = conductor_decompose(p);
            EXPECT_EQ(c, cc);
            EXPECT_TRUE(pp == p);
            EXPECT_TRUE(p.lift(q) == chi);
        }
}

TEST(Arith, GaussSums) {
    // Quadratic mod 5: 1, -1, -1, 1 at 1..4.
    DirichletCharacter leg5(5, 2, {-1, 0, 1, 1, 0});
    const cplx tau = gauss_sum(leg5);
    EXPECT_NEAR(tau.real(), std::sqrt(5.0), 1e-14);
    EXPECT_NEAR(tau.imag(), 0.0, 1e-14);
    EXPECT_EQ(gauss_sum(DirichletCharacter()), cplx(1.0, 0.0));

    for (u64 r = 1; r <= 100; ++r)
        for (const auto& psi : primitive_characters(r))
            ASSERT_NEAR(std::abs(gauss_sum(psi)), std::sqrt(static_cast<double>(r)), 1e-10) << r;
}

TEST(Arith, GaussSumTwistIdentity) {
    for (u64 r = 1; r <= 100; r += (r < 20 ? 1 : 7)) {
        for (const auto& psi : primitive_characters(r)) {
            const auto bar = psi.conjugate();
            const cplx tau_bar = gauss_sum(bar);
            for (i64 n = 1; n <= 200; n += 3) {
                ComplexCompensatedSum s;
                for (u64 a = 0; a < r; ++a)
                    s += bar(static_cast<i64>(a)) * unit_root(n * static_cast<i64>(a) % static_cast<i64>(r), static_cast<i64>(r));
                ASSERT_LE(std::abs(s.value() - psi(n) * tau_bar), 1e-10);
            }
        }
    }
}

TEST(Arith, GroupCharacterView) {
    DirichletCharacter leg5(5, 2, {-1, 0, 1, 1, 0});
    GroupCharacterView view(leg5);
    EXPECT_EQ(view(SL2Matrix{1, 0, 5, 1}), cplx(1.0, 0.0));
    EXPECT_EQ(view(SL2Matrix{3, 1, 5, 2}), cplx(-1.0, 0.0));
    EXPECT_THROW(view(SL2Matrix{1, 1, 1, 2}), DomainError);
    EXPECT_THROW(view(SL2Matrix{1, 0, 5, 2}), DomainError);
}

TEST(Arith, CharacterFromValuesRoundTrip) {
    for (const auto& chi : enumerate_characters(21)) {
        auto back = character_from_values(21, chi.values());
        EXPECT_TRUE(back == chi);
    }
    std::vector<cplx> bad(5, cplx(1.0, 0.0));
    EXPECT_THROW(character_from_values(5, bad), DomainError);
}
