#pragma once

// Dirichlet characters, divisor sums, conductors and Gauss sums.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spectral_forge/errors.hpp"
#include "spectral_forge/summation.hpp"

namespace spectral_forge::arith {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Elementary number theory

/// Smallest-prime-factor table with the prime list up to `limit`.
struct Sieve {
    std::size_t limit = 0;
    std::vector<std::uint32_t> spf;
    /// Largest power of spf[n] dividing n.
    std::vector<std::uint32_t> spf_power;
    std::vector<std::uint32_t> primes;
};

inline Sieve build_sieve(std::size_t limit) {
    Sieve s;
    s.limit = limit;
    s.spf.assign(limit + 1, 0);
    for (std::size_t i = 2; i <= limit; ++i) {
        if (s.spf[i] == 0) {
            s.spf[i] = static_cast<std::uint32_t>(i);
            s.primes.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : s.primes) {
            if (p > s.spf[i] || static_cast<std::size_t>(p) * i > limit) break;
            s.spf[p * i] = p;
        }
    }
    s.spf_power.assign(limit + 1, 0);
    if (limit >= 1) s.spf_power[1] = 1;
    for (std::size_t i = 2; i <= limit; ++i) {
        const std::uint32_t p = s.spf[i];
        const std::size_t rest = i / p;
        s.spf_power[i] = (rest > 1 && s.spf[rest] == p) ? s.spf_power[rest] * p : p;
    }
    return s;
}

/// Process-wide sieve covering at least `n`. Grows geometrically; readers
/// keep their snapshot alive through the shared_ptr.
inline std::shared_ptr<const Sieve> sieve_upto(std::size_t n) {
    static std::mutex mutex;
    static std::shared_ptr<const Sieve> cached;
    std::lock_guard lock(mutex);
    if (!cached || cached->limit < n) {
        std::size_t limit = std::max<std::size_t>(n, 1024);
        if (cached) limit = std::max(limit, 2 * cached->limit);
        cached = std::make_shared<const Sieve>(build_sieve(limit));
    }
    return cached;
}

inline std::vector<u64> primes_upto(u64 bound) {
    if (bound < 2) return {};
    auto s = sieve_upto(bound);
    std::vector<u64> out;
    for (auto p : s->primes) {
        if (p > bound) break;
        out.push_back(p);
    }
    return out;
}

/// Prime factorisation by trial division, ascending primes.
inline std::vector<std::pair<u64, int>> factorize(u64 n) {
    std::vector<std::pair<u64, int>> out;
    for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        int k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        out.emplace_back(p, k);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

inline u64 ipow(u64 base, int exp) {
    u64 r = 1;
    while (exp-- > 0) r *= base;
    return r;
}

inline u64 euler_phi(u64 n) {
    u64 r = n;
    for (auto [p, k] : factorize(n)) r = r / p * (p - 1);
    return r;
}

/// Exponent of (Z/nZ)^*.
inline u64 carmichael_lambda(u64 n) {
    u64 r = 1;
    for (auto [p, k] : factorize(n)) {
        u64 part = 0;
        if (p == 2) {
            part = k == 1 ? 1 : (k == 2 ? 2 : ipow(2, k - 2));
        } else {
            part = (p - 1) * ipow(p, k - 1);
        }
        r = std::lcm(r, part);
    }
    return r;
}

inline std::vector<u64> divisors(u64 n) {
    std::vector<u64> small, large;
    for (u64 d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        small.push_back(d);
        if (d != n / d) large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

inline u64 divisor_count(u64 n) {
    u64 r = 1;
    for (auto [p, k] : factorize(n)) r *= static_cast<u64>(k + 1);
    return r;
}

/// Sum of divisors, exact. Overflows only beyond the u64 range of sigma_1.
inline u64 sigma1(u64 n) {
    if (n == 0) throw DomainError("sigma1: n must be positive");
    u64 r = 1;
    for (auto [p, k] : factorize(n)) r *= (ipow(p, k + 1) - 1) / (p - 1);
    return r;
}

/// sigma_1(n) for 0 <= n <= N (entry 0 is 0).
inline std::vector<u64> sigma1_table(std::size_t N) {
    std::vector<u64> s(N + 1, 0);
    if (N == 0) return s;
    auto sv = sieve_upto(N);
    s[1] = 1;
    for (std::size_t n = 2; n <= N; ++n) {
        const u64 p = sv->spf[n];
        u64 m = n, pk = 1;
        while (m % p == 0) {
            m /= p;
            pk *= p;
        }
        s[n] = (pk * p - 1) / (p - 1) * s[m];
    }
    return s;
}

inline u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = static_cast<u64>((static_cast<unsigned __int128>(r) * b) % m);
        b = static_cast<u64>((static_cast<unsigned __int128>(b) * b) % m);
        e >>= 1;
    }
    return r;
}

inline u64 primitive_root_mod_prime(u64 p) {
    if (p == 2) return 1;
    auto fac = factorize(p - 1);
    for (u64 g = 2; g < p; ++g) {
        bool ok = true;
        for (auto [f, k] : fac) {
            if (powmod(g, (p - 1) / f, p) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw DomainError("primitive_root_mod_prime: not a prime");
}

/// exp(2 pi i k / D), exact at multiples of a quarter turn.
inline cplx unit_root(i64 k, i64 D) {
    i64 t = ((k % D) + D) % D;
    if ((4 * t) % D == 0) {
        switch ((4 * t) / D) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    const long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(t) /
                              static_cast<long double>(D);
    return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

// ---------------------------------------------------------------------------
// Dirichlet characters

/// A Dirichlet character stored as a full table of exponents: the value at a
/// residue r coprime to the modulus is exp(2 pi i k(r)/D). Arithmetic on
/// characters (products, conjugates, conductors) is therefore exact.
class DirichletCharacter {
public:
    /// Trivial character modulo 1.
    DirichletCharacter() : DirichletCharacter(1, 1, std::vector<i64>{0}) {}

    /// `exponents[r]` is k(r) for gcd(r, q) = 1 and -1 otherwise.
    DirichletCharacter(u64 modulus, u64 denominator, std::vector<i64> exponents)
        : modulus_(modulus), denom_(denominator), exps_(std::move(exponents)) {
        if (modulus_ == 0 || denom_ == 0 || exps_.size() != modulus_)
            throw DomainError("DirichletCharacter: malformed exponent table");
        normalize();
        values_.resize(modulus_);
        for (u64 r = 0; r < modulus_; ++r)
            values_[r] = exps_[r] < 0 ? cplx{0.0, 0.0} : unit_root(exps_[r], static_cast<i64>(denom_));
        even_ = modulus_ <= 2 || exps_[modulus_ - 1] == 0;
        conductor_ = compute_conductor();
    }

    u64 modulus() const noexcept { return modulus_; }
    u64 conductor() const noexcept { return conductor_; }
    bool is_even() const noexcept { return even_; }
    int parity() const noexcept { return even_ ? 1 : -1; }
    bool is_primitive() const noexcept { return conductor_ == modulus_; }
    bool is_principal() const noexcept { return conductor_ == 1; }

    /// chi(n) for any integer n (negative allowed).
    cplx operator()(i64 n) const noexcept { return values_[residue(n)]; }

    /// k with chi(n) = exp(2 pi i k / denominator()), or -1 when chi(n) = 0.
    i64 exponent(i64 n) const noexcept { return exps_[residue(n)]; }
    u64 denominator() const noexcept { return denom_; }

    std::span<const cplx> values() const noexcept { return values_; }

    DirichletCharacter conjugate() const {
        std::vector<i64> e(exps_);
        for (auto& k : e)
            if (k > 0) k = static_cast<i64>(denom_) - k;
        return {modulus_, denom_, std::move(e)};
    }

    /// Product of two characters to the same modulus.
    DirichletCharacter operator*(const DirichletCharacter& o) const {
        if (o.modulus_ != modulus_) throw DomainError("character product: moduli differ");
        const u64 D = std::lcm(denom_, o.denom_);
        std::vector<i64> e(modulus_);
        for (u64 r = 0; r < modulus_; ++r) {
            if (exps_[r] < 0 || o.exps_[r] < 0) {
                e[r] = -1;
                continue;
            }
            e[r] = static_cast<i64>((static_cast<u64>(exps_[r]) * (D / denom_) +
                                     static_cast<u64>(o.exps_[r]) * (D / o.denom_)) %
                                    D);
        }
        return {modulus_, D, std::move(e)};
    }

    DirichletCharacter pow(int k) const {
        DirichletCharacter r = principal(modulus_);
        DirichletCharacter b = k < 0 ? conjugate() : *this;
        for (int i = 0; i < std::abs(k); ++i) r = r * b;
        return r;
    }

    /// The character modulo a multiple Q of the modulus induced by this one.
    DirichletCharacter lift(u64 Q) const {
        if (Q % modulus_ != 0) throw DomainError("lift: target modulus is not a multiple");
        std::vector<i64> e(Q);
        for (u64 r = 0; r < Q; ++r) e[r] = std::gcd(r, Q) == 1 ? exps_[r % modulus_] : -1;
        return {Q, denom_, std::move(e)};
    }

    /// The primitive character modulo the conductor inducing this one.
    DirichletCharacter primitive() const {
        const u64 c = conductor_;
        std::vector<i64> e(c, -1);
        for (u64 b = 0; b < c; ++b) {
            if (std::gcd(b, c) != 1) continue;
            for (u64 a = b;; a += c) {
                if (std::gcd(a, modulus_) == 1) {
                    e[b] = exps_[a % modulus_];
                    break;
                }
            }
        }
        return {c, denom_, std::move(e)};
    }

    static DirichletCharacter principal(u64 q) {
        std::vector<i64> e(q);
        for (u64 r = 0; r < q; ++r) e[r] = std::gcd(r, q) == 1 ? 0 : -1;
        return {q, 1, std::move(e)};
    }

    friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
        if (a.modulus_ != b.modulus_) return false;
        const u64 D = std::lcm(a.denom_, b.denom_);
        for (u64 r = 0; r < a.modulus_; ++r) {
            if ((a.exps_[r] < 0) != (b.exps_[r] < 0)) return false;
            if (a.exps_[r] < 0) continue;
            if ((static_cast<u64>(a.exps_[r]) * (D / a.denom_)) % D !=
                (static_cast<u64>(b.exps_[r]) * (D / b.denom_)) % D)
                return false;
        }
        return true;
    }

private:
    u64 residue(i64 n) const noexcept {
        const i64 q = static_cast<i64>(modulus_);
        return static_cast<u64>(((n % q) + q) % q);
    }

    void normalize() {
        // Reduce the denominator to the exact order of the character.
        u64 g = denom_;
        for (i64 k : exps_)
            if (k >= 0) g = std::gcd(g, static_cast<u64>(k) % denom_);
        if (g == 0) g = denom_;
        for (auto& k : exps_)
            if (k >= 0) k = static_cast<i64>((static_cast<u64>(k) % denom_) / g);
        denom_ /= g;
    }

    bool factors_through(u64 d) const {
        for (u64 a = 1; a < modulus_ + 1; a += d) {
            const u64 r = a % modulus_;
            if (std::gcd(r, modulus_) == 1 && exps_[r] != 0) return false;
        }
        return true;
    }

    u64 compute_conductor() const {
        u64 d = modulus_;
        for (auto [p, k] : factorize(modulus_)) {
            while (d % p == 0 && factors_through(d / p)) d /= p;
        }
        return d;
    }

    u64 modulus_;
    u64 denom_;
    std::vector<i64> exps_;
    std::vector<cplx> values_;
    bool even_ = true;
    u64 conductor_ = 1;
};

namespace detail {

/// One cyclic factor of (Z/qZ)^* together with the discrete log of every
/// residue mod q onto that factor.
struct CyclicFactor {
    u64 order = 1;
    std::vector<u64> dlog;  // indexed by residue mod q (only coprime ones valid)
};

inline std::vector<CyclicFactor> unit_group_factors(u64 q) {
    std::vector<CyclicFactor> out;
    for (auto [p, k] : factorize(q)) {
        const u64 pk = ipow(p, k);
        if (p == 2) {
            if (k == 1) continue;
            // (Z/2^k)^* = <-1> x <5>
            CyclicFactor sign{2, std::vector<u64>(q, 0)};
            CyclicFactor five{k >= 3 ? ipow(2, k - 2) : 1, std::vector<u64>(q, 0)};
            std::vector<u64> log5(pk, 0);
            u64 x = 1;
            for (u64 j = 0; j < five.order; ++j) {
                log5[x] = j;
                x = x * 5 % pk;
            }
            for (u64 r = 0; r < q; ++r) {
                if (std::gcd(r, q) != 1) continue;
                u64 y = r % pk;
                const bool neg = y % 4 == 3;
                sign.dlog[r] = neg ? 1 : 0;
                if (neg) y = pk - y;
                five.dlog[r] = log5[y];
            }
            out.push_back(std::move(sign));
            if (five.order > 1) out.push_back(std::move(five));
        } else {
            u64 g = primitive_root_mod_prime(p);
            if (k > 1 && powmod(g, p - 1, p * p) == 1) g += p;
            const u64 order = (p - 1) * ipow(p, k - 1);
            std::vector<u64> lg(pk, 0);
            u64 x = 1;
            for (u64 j = 0; j < order; ++j) {
                lg[x] = j;
                x = x * g % pk;
            }
            CyclicFactor f{order, std::vector<u64>(q, 0)};
            for (u64 r = 0; r < q; ++r)
                if (std::gcd(r, q) == 1) f.dlog[r] = lg[r % pk];
            out.push_back(std::move(f));
        }
    }
    return out;
}

}  // namespace detail

/// All phi(q) characters modulo q. Index 0 is the principal character; the
/// order is the mixed-radix order of the generator images and is stable.
inline std::vector<DirichletCharacter> enumerate_characters(u64 q) {
    if (q == 0) throw DomainError("enumerate_characters: modulus must be positive");
    const auto factors = detail::unit_group_factors(q);
    u64 D = 1;
    for (const auto& f : factors) D = std::lcm(D, f.order);
    u64 count = 1;
    for (const auto& f : factors) count *= f.order;

    std::vector<DirichletCharacter> out;
    out.reserve(count);
    std::vector<u64> digits(factors.size(), 0);
    for (u64 idx = 0; idx < count; ++idx) {
        u64 rest = idx;
        for (std::size_t c = factors.size(); c-- > 0;) {
            digits[c] = rest % factors[c].order;
            rest /= factors[c].order;
        }
        std::vector<i64> e(q);
        for (u64 r = 0; r < q; ++r) {
            if (std::gcd(r, q) != 1) {
                e[r] = -1;
                continue;
            }
            u64 k = 0;
            for (std::size_t c = 0; c < factors.size(); ++c)
                k = (k + digits[c] * factors[c].dlog[r] % factors[c].order * (D / factors[c].order)) % D;
            e[r] = static_cast<i64>(k);
        }
        out.emplace_back(q, D, std::move(e));
    }
    return out;
}

inline std::vector<DirichletCharacter> primitive_characters(u64 r) {
    auto all = enumerate_characters(r);
    std::erase_if(all, [](const DirichletCharacter& c) { return !c.is_primitive(); });
    return all;
}

/// chi = chi* . chi_0 with chi* primitive modulo the conductor q*.
inline std::pair<DirichletCharacter, u64> conductor_decompose(const DirichletCharacter& chi) {
    auto prim = chi.primitive();
    const u64 c = prim.modulus();
    return {std::move(prim), c};
}

/// tau(psi) = sum_{a mod r} psi(a) e^{2 pi i a / r}.
inline cplx gauss_sum(const DirichletCharacter& psi) {
    const u64 r = psi.modulus();
    ComplexCompensatedSum acc;
    for (u64 a = 0; a < r; ++a) {
        const cplx v = psi(static_cast<i64>(a));
        if (v == cplx{}) continue;
        acc += v * unit_root(static_cast<i64>(a), static_cast<i64>(r));
    }
    return acc.value();
}

/// Rebuilds a character from a numeric value table (e.g. parsed JSON);
/// checks that the table really is a character.
inline DirichletCharacter character_from_values(u64 q, std::span<const cplx> values, double tol = 1e-9) {
    if (values.size() != q) throw DomainError("character_from_values: table length != modulus");
    const u64 D = std::max<u64>(carmichael_lambda(q), 1);
    std::vector<i64> e(q);
    for (u64 r = 0; r < q; ++r) {
        const bool unit = std::gcd(r, q) == 1;
        if (!unit) {
            if (std::abs(values[r]) > tol) throw DomainError("character_from_values: nonzero at non-unit");
            e[r] = -1;
            continue;
        }
        const double turns = std::arg(values[r]) / (2.0 * std::numbers::pi);
        i64 k = std::llround(turns * static_cast<double>(D));
        k = ((k % static_cast<i64>(D)) + static_cast<i64>(D)) % static_cast<i64>(D);
        if (std::abs(values[r] - unit_root(k, static_cast<i64>(D))) > tol)
            throw DomainError("character_from_values: value is not a root of unity of the group exponent");
        e[r] = k;
    }
    DirichletCharacter chi(q, D, std::move(e));
    // All pairs for small moduli; against the first few units otherwise.
    std::vector<u64> probes;
    for (u64 b = 1; b < q && (q <= 400 || probes.size() < 24); ++b)
        if (std::gcd(b, q) == 1) probes.push_back(b);
    for (u64 a = 1; a < q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        for (u64 b : probes) {
            const i64 lhs = chi.exponent(static_cast<i64>(a * b % q));
            const i64 rhs = (chi.exponent(static_cast<i64>(a)) + chi.exponent(static_cast<i64>(b))) %
                            static_cast<i64>(chi.denominator());
            if (lhs != rhs) throw DomainError("character_from_values: table is not multiplicative");
        }
    }
    return chi;
}

// ---------------------------------------------------------------------------
// Group character on Gamma_0(q)

struct SL2Matrix {
    i64 a = 1, b = 0, c = 0, d = 1;
    i64 det() const noexcept { return a * d - b * c; }
};

/// chi'(gamma) = chi(d) on Gamma_0(q).
class GroupCharacterView {
public:
    explicit GroupCharacterView(DirichletCharacter base) : base_(std::move(base)) {}

    cplx operator()(const SL2Matrix& g) const {
        if (g.det() != 1) throw DomainError("GroupCharacterView: determinant is not 1");
        if (g.c % static_cast<i64>(base_.modulus()) != 0)
            throw DomainError("GroupCharacterView: matrix is not in Gamma_0(q)");
        return base_(g.d);
    }

    const DirichletCharacter& base() const noexcept { return base_; }

private:
    DirichletCharacter base_;
};

}  // namespace spectral_forge::arith
