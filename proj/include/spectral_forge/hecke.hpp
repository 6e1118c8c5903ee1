#pragma once

// Synthetic Hecke eigensystems: prime seeds lambda(p) extended to all n by
// the Hecke recursion, plus twisting by primitive characters.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "spectral_forge/arith.hpp"
#include "spectral_forge/errors.hpp"
#include "spectral_forge/summation.hpp"

namespace spectral_forge::hecke {

using arith::cplx;
using arith::DirichletCharacter;
using arith::i64;
using arith::u64;

/// Counter-based generator: every (seed, key) pair maps to its own stream,
/// so values do not depend on the order in which primes are visited.
inline u64 splitmix64(u64 x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline double uniform01(u64 seed, u64 key, u64 draw) {
    const u64 h = splitmix64(splitmix64(seed ^ splitmix64(key)) + draw);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// p-adic valuation.
inline int valuation(u64 n, u64 p) {
    int v = 0;
    while (n != 0 && n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

/// |lambda(p)| forced for p | q:  1 if v_p(m_chi) = v_p(q);  p^{-1/2} if
/// p || q and p does not divide m_chi;  0 otherwise.
inline double ramified_magnitude(u64 p, u64 level, u64 conductor) {
    const int vq = valuation(level, p), vm = valuation(conductor, p);
    if (vm == vq) return 1.0;
    if (vq == 1 && vm == 0) return 1.0 / std::sqrt(static_cast<double>(p));
    return 0.0;
}

/// Deterministic random seeds. `theta` = Re s_phi - 1/2: zero gives the
/// tempered model lambda(p) = 2 cos(t) sqrt(chi(p)), t uniform in [0, pi];
/// positive theta gives lambda(p) = 2 cosh(t) sqrt(chi(p)), t uniform in
/// [0, theta log p]. Ramified seeds take the forced magnitude with a
/// uniform phase.
struct SeedGenerator {
    u64 seed = 0;
    double theta = 0.0;

    cplx operator()(u64 p, const DirichletCharacter& chi, u64 level) const {
        const double u = uniform01(seed, p, 0);
        if (level % p == 0) {
            const double mag = ramified_magnitude(p, level, chi.conductor());
            if (mag == 0.0) return 0.0;
            return std::polar(mag, 2.0 * std::numbers::pi * u);
        }
        const cplx root = std::sqrt(chi(static_cast<i64>(p)));
        if (theta == 0.0) return 2.0 * std::cos(std::numbers::pi * u) * root;
        return 2.0 * std::cosh(u * theta * std::log(static_cast<double>(p))) * root;
    }
};

using SeedFunction = std::function<cplx(u64)>;

struct SystemOptions {
    /// Reject unramified seeds with |lambda(p)| > 2.
    bool enforce_tempered = true;
    /// Check the forced magnitude of ramified seeds.
    bool check_ramified = true;
    /// Largest n cached by on-demand lookups.
    u64 memo_bound = 1'000'000;
};

class HeckeEigenSystem {
public:
    /// Seeds from an explicit table. Primes not listed take the fallback
    /// generator's value when one is given and 0 otherwise.
    HeckeEigenSystem(u64 level, DirichletCharacter chi, cplx s_phi, int parity, cplx eta,
                     std::map<u64, cplx> seeds, SystemOptions opts = {},
                     std::optional<SeedGenerator> fallback = std::nullopt)
        : HeckeEigenSystem(level, std::move(chi), s_phi, parity, eta, SeedFunction{}, opts) {
        for (const auto& [p, v] : seeds) {
            if (!arith::is_prime(p)) throw DomainError("HeckeEigenSystem: seed key is not prime");
            validate_seed(p, v);
        }
        explicit_ = std::make_shared<const std::map<u64, cplx>>(std::move(seeds));
        generator_ = fallback;
        auto table = explicit_;
        const DirichletCharacter c = nebentypus_;
        const u64 q = level_;
        seed_fn_ = [table, fallback, c, q](u64 p) {
            auto it = table->find(p);
            if (it != table->end()) return it->second;
            return fallback ? (*fallback)(p, c, q) : cplx{};
        };
    }

    /// Seeds from a generator.
    HeckeEigenSystem(u64 level, DirichletCharacter chi, cplx s_phi, int parity, cplx eta, SeedGenerator gen,
                     SystemOptions opts = {})
        : HeckeEigenSystem(level, std::move(chi), s_phi, parity, eta, SeedFunction{}, opts) {
        generator_ = gen;
        const DirichletCharacter c = nebentypus_;
        const u64 q = level_;
        seed_fn_ = [gen, c, q](u64 p) { return gen(p, c, q); };
    }

    /// Seeds from an arbitrary function of the prime.
    HeckeEigenSystem(u64 level, DirichletCharacter chi, cplx s_phi, int parity, cplx eta, SeedFunction fn,
                     SystemOptions opts)
        : level_(level), s_phi_(s_phi), parity_(parity), eta_(eta), opts_(opts), seed_fn_(std::move(fn)),
          cache_(std::make_shared<Cache>()) {
        if (level_ == 0) throw DomainError("HeckeEigenSystem: level must be positive");
        if (parity_ != 1 && parity_ != -1) throw DomainError("HeckeEigenSystem: parity must be +1 or -1");
        if (level_ % chi.modulus() != 0) throw DomainError("HeckeEigenSystem: nebentypus modulus must divide level");
        nebentypus_ = chi.modulus() == level_ ? std::move(chi) : chi.lift(level_);
        if (!nebentypus_.is_even()) throw DomainError("HeckeEigenSystem: nebentypus must be even");
    }

    u64 level() const noexcept { return level_; }
    const DirichletCharacter& nebentypus() const noexcept { return nebentypus_; }
    u64 conductor() const noexcept { return nebentypus_.conductor(); }
    cplx s_phi() const noexcept { return s_phi_; }
    int parity() const noexcept { return parity_; }
    bool is_even() const noexcept { return parity_ == 1; }
    cplx eta() const noexcept { return eta_; }
    const SystemOptions& options() const noexcept { return opts_; }
    const std::optional<SeedGenerator>& generator() const noexcept { return generator_; }
    const std::map<u64, cplx>* explicit_seeds() const noexcept { return explicit_.get(); }

    /// max(0, Re s_phi - 1/2): exponent in the growth model |lambda(n)| <= d(n) n^theta.
    double growth_exponent() const noexcept { return std::max(0.0, s_phi_.real() - 0.5); }

    cplx seed(u64 p) const {
        const cplx v = seed_fn_ ? seed_fn_(p) : cplx{};
        validate_seed(p, v);
        return v;
    }

    /// lambda(p^k), by the Hecke recursion for p not dividing the level and
    /// by lambda(p)^k otherwise.
    cplx prime_power(u64 p, int k) const {
        const cplx lp = seed(p);
        return prime_power_from(p, k, lp);
    }

    /// rho(n): lambda(n) for n > 0 and parity * lambda(|n|) for n < 0.
    cplx coefficient(i64 n) const {
        if (n == 0) throw DomainError("coefficient: n = 0 is not a Fourier index");
        if (n < 0) return static_cast<double>(parity_) * coefficient(-n);
        const u64 m = static_cast<u64>(n);
        if (auto t = std::atomic_load(&cache_->table); t && m < t->size()) return (*t)[m];
        if (m <= opts_.memo_bound) {
            {
                std::shared_lock lock(cache_->mutex);
                auto it = cache_->memo.find(m);
                if (it != cache_->memo.end()) return it->second;
            }
            const cplx v = compute(m);
            std::unique_lock lock(cache_->mutex);
            cache_->memo.emplace(m, v);
            return v;
        }
        return compute(m);
    }

    /// lambda(0..N) with lambda(0) = 0; cached and shared by copies.
    std::shared_ptr<const std::vector<cplx>> coefficient_table(u64 N) const {
        if (auto t = std::atomic_load(&cache_->table); t && t->size() > N) return t;
        std::lock_guard build(cache_->build_mutex);
        if (auto t = std::atomic_load(&cache_->table); t && t->size() > N) return t;
        auto t = std::make_shared<const std::vector<cplx>>(build_table(N));
        std::atomic_store(&cache_->table, t);
        return t;
    }

    /// The cached table if one has been built, else null. Never builds.
    std::shared_ptr<const std::vector<cplx>> cached_table() const { return std::atomic_load(&cache_->table); }

    /// Drop the cached table (memory control for very long tables).
    void release_table() const {
        std::lock_guard build(cache_->build_mutex);
        std::atomic_store(&cache_->table, std::shared_ptr<const std::vector<cplx>>{});
    }

private:
    struct Cache {
        std::shared_mutex mutex;
        std::unordered_map<u64, cplx> memo;
        std::mutex build_mutex;
        std::shared_ptr<const std::vector<cplx>> table;
    };

    void validate_seed(u64 p, cplx v) const {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("seed is not finite");
        if (level_ % p == 0) {
            if (!opts_.check_ramified) return;
            const double mag = ramified_magnitude(p, level_, nebentypus_.conductor());
            if (std::abs(std::abs(v) - mag) > 1e-12 * std::max(1.0, mag))
                throw DomainError("seed at ramified prime " + std::to_string(p) + " violates the magnitude law");
        } else if (opts_.enforce_tempered && std::norm(v) > (2.0 + 1e-12) * (2.0 + 1e-12)) {
            throw DomainError("seed at prime " + std::to_string(p) + " exceeds the tempered bound 2");
        }
    }

    cplx prime_power_from(u64 p, int k, cplx lp) const {
        if (k == 0) return 1.0;
        if (level_ % p == 0) {
            cplx r = lp;
            for (int i = 1; i < k; ++i) r = cmul(r, lp);
            return r;
        }
        const cplx cp = nebentypus_(static_cast<i64>(p));
        cplx prev = 1.0, cur = lp;
        for (int i = 1; i < k; ++i) {
            const cplx next = cmul(lp, cur) - cmul(cp, prev);
            prev = cur;
            cur = next;
        }
        return cur;
    }

    // Product over prime powers folded from the largest prime down, which is
    // the association order the table builder produces.
    cplx compute(u64 n) const {
        const auto f = arith::factorize(n);
        cplx r = 1.0;
        bool first = true;
        for (auto it = f.rbegin(); it != f.rend(); ++it) {
            const cplx pk = prime_power(it->first, it->second);
            r = first ? pk : cmul(pk, r);
            first = false;
        }
        return r;
    }

    std::vector<cplx> build_table(u64 N) const {
        if (N > 0xFFFFFFF0ULL) throw DomainError("coefficient_table: bound too large");
        std::vector<cplx> t(N + 1);
        if (N == 0) return t;
        t[1] = 1.0;
        auto sv = arith::sieve_upto(N);
        for (auto p : sv->primes) {
            if (p > N) break;
            t[p] = seed(p);
        }
        const auto& spf = sv->spf;
        const auto& spf_power = sv->spf_power;
        for (std::uint32_t n = 2; n <= N; ++n) {
            const std::uint32_t p = spf[n], pk = spf_power[n];
            if (pk == n) {
                // Same recursion steps as prime_power_from.
                const cplx lp = t[p];
                if (n == p) {
                    continue;
                } else if (level_ % p == 0) {
                    t[n] = cmul(t[n / p], lp);
                } else {
                    const cplx cp = nebentypus_(static_cast<i64>(p));
                    t[n] = cmul(lp, t[n / p]) - cmul(cp, n / p == p ? cplx(1.0) : t[n / p / p]);
                }
            } else {
                t[n] = cmul(t[pk], t[n / pk]);
            }
        }
        return t;
    }

    u64 level_;
    DirichletCharacter nebentypus_;
    cplx s_phi_;
    int parity_;
    cplx eta_;
    SystemOptions opts_;
    SeedFunction seed_fn_;
    std::shared_ptr<const std::map<u64, cplx>> explicit_;
    std::optional<SeedGenerator> generator_;
    std::shared_ptr<Cache> cache_;
};

/// |lambda(m) lambda(n) - sum_{d | (m,n)} chi(d) lambda(mn/d^2)|.
inline double verify_hecke_relation(const HeckeEigenSystem& sys, u64 m, u64 n) {
    if (m == 0 || n == 0) throw DomainError("verify_hecke_relation: m, n must be positive");
    const cplx lhs = sys.coefficient(static_cast<i64>(m)) * sys.coefficient(static_cast<i64>(n));
    const u64 g = std::gcd(m, n);
    ComplexCompensatedSum rhs;
    for (u64 d : arith::divisors(g)) {
        const cplx cd = sys.nebentypus()(static_cast<i64>(d));
        if (cd == cplx{}) continue;
        rhs += cd * sys.coefficient(static_cast<i64>((m / d) * (n / d)));
    }
    return std::abs(lhs - rhs.value());
}

/// Seeded synthetic system. Re s_phi = 1/2 gives a tempered system; real
/// s_phi in (1/2, 1) gives an untempered one (small-eigenvalue model).
inline HeckeEigenSystem random_system(u64 seed, u64 level, const DirichletCharacter& chi, cplx s_phi, int parity) {
    if (!chi.is_even()) throw DomainError("random_system: nebentypus must be even");
    SeedGenerator gen{seed, 0.0};
    SystemOptions opts;
    if (s_phi.real() == 0.5) {
        gen.theta = 0.0;
    } else if (s_phi.imag() == 0.0 && s_phi.real() > 0.5 && s_phi.real() < 1.0) {
        gen.theta = s_phi.real() - 0.5;
        opts.enforce_tempered = false;
    } else {
        throw DomainError("random_system: s_phi must have real part 1/2 or be real in (1/2, 1)");
    }
    const cplx eta = std::polar(1.0, 2.0 * std::numbers::pi * uniform01(seed, 0, 7));
    return {level, chi, s_phi, parity, eta, gen, opts};
}

/// lcm(q, q* r, r^2): level of a twist of a level-q form whose nebentypus has
/// conductor q* by a primitive character of modulus r.
inline u64 twist_level(u64 q, u64 q_star, u64 r) { return std::lcm(q, std::lcm(q_star * r, r * r)); }

/// Largest |lambda(m)lambda(n) - sum chi(d) lambda(mn/d^2)| / (1 + |lambda(m)lambda(n)|)
/// over 1 <= m, n <= M, read from one coefficient table.
inline double max_hecke_residual(const HeckeEigenSystem& sys, u64 M) {
    const auto t = sys.coefficient_table(M * M);
    const auto& lam = *t;
    const auto& chi = sys.nebentypus();
    double worst = 0.0;
    for (u64 m = 1; m <= M; ++m) {
        for (u64 n = m; n <= M; ++n) {
            const cplx lhs = lam[m] * lam[n];
            const u64 g = std::gcd(m, n);
            ComplexCompensatedSum rhs;
            for (u64 d = 1; d <= g; ++d) {
                if (g % d != 0) continue;
                const cplx cd = chi(static_cast<i64>(d));
                if (cd == cplx{}) continue;
                rhs += cd * lam[(m / d) * (n / d)];
            }
            worst = std::max(worst, std::abs(lhs - rhs.value()) / (1.0 + std::abs(lhs)));
        }
    }
    return worst;
}

/// Twist by a primitive character psi mod r: level lcm(q, q* r, r^2),
/// nebentypus chi psi^2, parity eps psi(-1), lambda(p) -> psi(p) lambda(p).
/// Primes dividing r (hence the new level but not necessarily q) get seed 0.
inline HeckeEigenSystem twist(const HeckeEigenSystem& sys, const DirichletCharacter& psi) {
    if (!psi.is_primitive()) throw DomainError("twist: character must be primitive");
    const u64 q = sys.level(), r = psi.modulus(), qs = sys.conductor();
    const u64 N = twist_level(q, qs, r);
    const DirichletCharacter chi = sys.nebentypus().lift(N) * psi.pow(2).lift(N);
    const int parity = sys.parity() * (r <= 2 ? 1 : (psi(-1).real() > 0.0 ? 1 : -1));
    auto fn = [sys, psi, r](u64 p) -> cplx {
        if (r % p == 0) return 0.0;
        return psi(static_cast<i64>(p)) * sys.seed(p);
    };
    SystemOptions opts = sys.options();
    opts.check_ramified = false;
    return {N, chi, sys.s_phi(), parity, sys.eta(), SeedFunction(fn), opts};
}

}  // namespace spectral_forge::hecke
