#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "lucasreg/sequences.hpp"

namespace lucasreg {

struct PrimePower {
    std::uint64_t p = 0;
    unsigned exp = 0;
};

/// k = p_1^{a_1} ... p_h^{a_h} with strictly increasing primes.
struct Factorization {
    std::vector<PrimePower> pairs;

    std::uint64_t value() const;
    std::uint64_t radical() const;
};

/// The additive correction rho_p in nu_p(u_n) = nu_p(n) + rho_p(n). Only
/// p = 2 with odd discriminant distinguishes the parity of n; otherwise the
/// two slots coincide.
struct RhoSpec {
    std::uint64_t p = 0;
    Valuation rho_odd = 0;
    Valuation rho_even = 0;

    Valuation at(std::uint64_t n) const { return (n % 2 == 0) ? rho_even : rho_odd; }
};

/// Rank of apparition: least n >= 1 with m | u_n.
struct TauValue {
    std::uint64_t m = 0;
    std::uint64_t tau = 0;
};

/// Trial-division factorization, 2 <= k <= 10^9.
Factorization factorize(std::uint64_t k);

/// Legendre symbol (delta/p) for odd prime p, by Euler's criterion.
int legendre(long long delta, std::uint64_t p);

/// Least n with p | u_n, by linear scan of u_n mod p. Requires p prime and
/// p not dividing b. The result is checked against tau(p) | p - (Delta/p)
/// (odd p) and tau(p) = p when p | Delta.
TauValue tau_prime(const LucasParams& params, std::uint64_t p);

/// tau of a squarefree m coprime to b: lcm of tau over the prime divisors,
/// verified by the direct divisibility m | u_tau. tau(1) = 1.
TauValue tau_squarefree(const LucasParams& params, std::uint64_t m);

/// Fills both parity slots of rho_p from the defining valuations:
///   p = 2:  nu_2(u_3) / nu_2(u_6) - 1 when Delta is odd, nu_2(u_2) - 1 when even;
///   p >= 3: nu_p(u_tau(p)) if p does not divide Delta,
///           nu_3(u_3) - 1 for p = 3 | Delta, 0 for p >= 5 | Delta.
/// All valuations are taken from the brute-force oracle.
RhoSpec rho(const LucasParams& params, std::uint64_t p);

/// Precomputed tau and rho for one (params, p); the hot-loop form of the
/// closed formula below.
struct PrimeContext {
    std::uint64_t p = 0;
    std::uint64_t tau = 0;
    RhoSpec rho_spec;
};

PrimeContext make_prime_context(const LucasParams& params, std::uint64_t p);

/// Closed formula: nu_p(u_n) = nu_p(n) + rho_p(n) when tau(p) | n, else 0.
Valuation nu_p_closed(const PrimeContext& ctx, std::uint64_t n);
Valuation nu_p_closed(const LucasParams& params, std::uint64_t p, std::uint64_t n);

enum class Parity { odd, even };

/// Correction factor c_k(n) = prod p_i^{rho_{p_i}(n)}; depends only on the
/// parity of n once k is fixed.
mpz_class c_k(const LucasParams& params, const Factorization& k_fact, Parity n_parity);

struct CompositeContext {
    std::uint64_t k = 0;
    Factorization fact;
    std::uint64_t tau_rad = 0; // tau(p_1 ... p_h)
    mpz_class c_odd;
    mpz_class c_even;
};

CompositeContext make_composite_context(const LucasParams& params, std::uint64_t k);

/// Closed formula: nu_k(u_n) = nu_k(c_k(n) n) when tau(p_1...p_h) | n, else 0.
/// Requires gcd(k, b) = 1.
Valuation nu_k_closed(const CompositeContext& ctx, std::uint64_t n);
Valuation nu_k_closed(const LucasParams& params, std::uint64_t k, std::uint64_t n);

/// nu_k(m) as min_i floor(nu_{p_i}(m) / a_i).
Valuation nu_k_via_min(const Factorization& k_fact, const mpz_class& m);

enum class TrivialCase { coprime, identically_zero, unsupported };

/// Classifies what the closed formulas can do with (params, k):
///   coprime           gcd(k, b) = 1, formulas apply;
///   identically_zero  some prime p | gcd(k, b) has p not dividing a, so
///                     p never divides u_n and nu_k(u_{n+1}) == 0;
///   unsupported       gcd(k, b) > 1 and every common prime divides a.
TrivialCase trivial_case(const LucasParams& params, std::uint64_t k);

bool is_prime_u64(std::uint64_t n);

} // namespace lucasreg
