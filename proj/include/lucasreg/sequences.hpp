#pragma once

#include <cstdint>

#include <gmpxx.h>

#include "lucasreg/errors.hpp"

namespace lucasreg {

/// Exponent e such that k^e exactly divides the target integer.
using Valuation = std::uint64_t;

/// Coefficients of the recurrence u_0 = 0, u_1 = 1, u_{n+2} = a u_{n+1} + b u_n,
/// together with the discriminant Delta = a^2 + 4b of x^2 - ax - b.
/// Construct through make_params, which certifies nondegeneracy.
struct LucasParams {
    long long a = 0;
    long long b = 0;
    long long delta = 0;
};

/// Validates (a, b) and computes the discriminant.
///
/// The sequence is degenerate iff b = 0 or the ratio of the characteristic
/// roots is a root of unity, which over the integers is equivalent to
/// a^2 in {0, -b, -2b, -3b, -4b} (covers the repeated-root case Delta = 0).
/// Throws DegenerateSequence.
LucasParams make_params(long long a, long long b);

bool is_degenerate(long long a, long long b);

/// Exact n-th term by iterating the recurrence. Intended for n <= 1e5;
/// terms grow exponentially, so large-n callers should use lucas_term_mod.
mpz_class lucas_term(const LucasParams& params, std::uint64_t n);

/// u_n mod m for m >= 2, via the companion matrix [[a, b], [1, 0]] raised to
/// the n-th power in O(log n) modular 2x2 multiplications. Result in [0, m).
mpz_class lucas_term_mod(const LucasParams& params, std::uint64_t n, const mpz_class& m);

/// Fast-path overload for moduli below 2^63.
std::uint64_t lucas_term_mod_u64(const LucasParams& params, std::uint64_t n, std::uint64_t m);

/// Largest e with k^e | m, sign of m ignored. Throws ZeroArgument when m = 0.
Valuation nu_int(std::uint64_t k, const mpz_class& m);

/// Overload for word-sized m (m != 0).
Valuation nu_u64(std::uint64_t k, std::uint64_t m);

/// nu_k(u_n) computed without closed formulas: evaluate u_n mod k^E for an
/// escalating exponent cap E (8, 16, 32, ...) until the residue is nonzero,
/// then read the valuation off the residue. Terminates for nondegenerate
/// params since u_n != 0 for n >= 1; throws EscalationExceeded past E = 2^20.
Valuation valuation_oracle(const LucasParams& params, std::uint64_t k, std::uint64_t n);

} // namespace lucasreg
