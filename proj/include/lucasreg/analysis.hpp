#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lucasreg/regularity.hpp"
#include "lucasreg/valuation.hpp"

namespace lucasreg {

enum class RankCase {
    delta_small_nu1,     // p | Delta, p in {2,3}, nu_p(u_p) = 1      -> 2
    delta_small_nuNe1,   // p | Delta, p in {2,3}, nu_p(u_p) != 1     -> 3
    delta_large,         // p | Delta, p >= 5                         -> 2
    nodelta_p2_irregular,// p = 2 not | Delta, nu2(u6) != nu2(u3) + 1 -> 5
    nodelta_generic,     // otherwise                                 -> tau(p) + 1
};

const char* to_string(RankCase c);

struct RankReport {
    std::uint64_t p = 0;
    RankCase case_label = RankCase::nodelta_generic;
    std::size_t predicted = 0;
    std::optional<std::size_t> empirical;
    bool agree = false;
};

/// Case dispatch on (p | Delta, small-prime valuation, parity anomaly at 2);
/// fills only the predicted side.
RankReport predicted_rank(const LucasParams& params, std::uint64_t p);

/// Runs the kernel explorer on n -> nu_p(u_{n+1}) in base p and completes
/// the report.
RankReport empirical_rank(const LucasParams& params, std::uint64_t p,
                          std::size_t prefix_length = kDefaultPrefixLength,
                          unsigned depth_cap = kDefaultDepthCap);

/// n -> nu_p(u_{n+1}) through the closed formula.
SequenceHandle lucas_valuation_handle(const LucasParams& params, std::uint64_t p);

/// n -> nu_k(u_{n+1}) for composite k coprime to b; the identically-zero
/// trivial case yields the zero handle. Throws NotCoprime on the unsupported
/// case.
SequenceHandle lucas_valuation_handle_k(const LucasParams& params, std::uint64_t k);

/// n -> nu_k(n + 1).
SequenceHandle plain_valuation_handle(std::uint64_t k);

SequenceHandle constant_handle(long long value);

/// The generator sequences behind the rank analysis. For p not dividing
/// Delta: s(n) = (nu_p(n+1) + v) [tau | n+1], the indicator family
/// s_j(n) = [tau | n+j+1], and for p = 2 the correction t(n) = d [6 | n+1]
/// with d = nu2(u6) - nu2(u3) - 1. For p | Delta: tau = p and
/// s(n) = rho_p [p | n+1], with t identically zero.
struct GeneratorFamily {
    std::uint64_t p = 0;
    bool delta_branch = false; // p | Delta
    std::uint64_t tau = 0;
    int epsilon = 0;     // p == epsilon (mod tau); 0 when p | Delta (unused)
    Valuation v = 0;     // nu_p(u_tau)
    Valuation rho_value = 0;
    long long d = 0;     // nu2(u6) - nu2(u3) - 1 when p = 2 not | Delta
    SequenceHandle s;
    std::vector<SequenceHandle> s_j;
    SequenceHandle t;
};

GeneratorFamily generator_family(const LucasParams& params, std::uint64_t p);

/// Handles whose exact prefix rank must equal the predicted rank:
/// {nu_p(n+1), s, 1} on the p | Delta branch, and {s, s_0..s_{tau-1}} plus t
/// (when nonzero) otherwise.
std::vector<SequenceHandle> rank_basis_handles(const GeneratorFamily& family);

/// The two periodic indicators splitting nu_k(u_{n+1}) by the parity of n+1:
///   nu_k(u_{n+1}) = nu_k(c1 (n+1)) s(n) + nu_k(c2 (n+1)) t(n).
struct Decomposition {
    std::uint64_t k = 0;
    std::uint64_t tau_rad = 0;
    mpz_class c1; // c_k at odd arguments
    mpz_class c2; // c_k at even arguments
    SequenceHandle s;
    SequenceHandle t;
};

/// Builds the decomposition and verifies the displayed identity pointwise on
/// 0 <= n < check_upto; IdentityViolation carries the smallest witness.
Decomposition decompose_k(const LucasParams& params, std::uint64_t k, std::uint64_t check_upto);

struct IdentityWitness {
    std::uint64_t n = 0;
    std::int64_t i = -1;
    std::int64_t j = -1;
};

struct IdentityReport {
    std::string name;
    bool pass = false;
    std::optional<IdentityWitness> witness;
};

/// Pointwise checks of the generator-family equations for 0 <= n < N and all
/// digit offsets; each report carries the minimal witness on failure.
/// Branch p | Delta: sum1 and the digit relation of s. Branch p not | Delta:
/// sum2, ss0, child, shift, s0p2, and for p = 2 the t relation.
std::vector<IdentityReport> verify_proof_identities(const LucasParams& params, std::uint64_t p,
                                                    std::uint64_t N);

/// True when every s_j is reproduced, via rational span membership of prefix
/// vectors, from the two kernel subsequences s(p^3 n + p j + p - 1) and
/// s(p^2 n + j). Vacuous (true) on the p | Delta branch.
bool generator_span_placement(const LucasParams& params, std::uint64_t p,
                              std::size_t prefix_length = 512);

} // namespace lucasreg
