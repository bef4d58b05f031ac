#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lucasreg/errors.hpp"

namespace lucasreg {

/// An evaluatable integer sequence over nonnegative indices. Evaluation must
/// be deterministic and pure; handles are freely copyable and thread-safe.
struct SequenceHandle {
    std::function<long long(std::uint64_t)> eval;
    std::string description;
};

/// The kernel subsequence n -> s(k^e n + i), 0 <= i < k^e.
struct KernelNode {
    unsigned e = 0;
    std::uint64_t i = 0;

    bool operator==(const KernelNode&) const = default;
};

/// Basis descriptor: a kernel node of the root sequence, or a derived label.
struct BasisLabel {
    std::optional<KernelNode> node;
    std::string derived;
};

/// Certificate of k-regularity: dim basis sequences, k transition matrices
/// M^(i) with row j expressing basis_j(k n + i) over the basis at n, and the
/// basis values at 0. dim equals the kernel-module rank unless augmentation
/// was required for integral matrix entries.
struct LinearRepresentation {
    std::uint64_t k = 0;
    std::size_t dim = 0;
    std::vector<BasisLabel> basis;
    std::vector<std::vector<long long>> matrices; // k matrices, row-major dim*dim
    std::vector<long long> initial;
    std::uint64_t verified_upto = 0;
};

struct RankCertificate {
    std::size_t rank = 0;
    std::size_t prefix_length = 0;
    bool confirmed_at_double = false;
};

inline constexpr std::size_t kDefaultPrefixLength = 4096;
inline constexpr unsigned kDefaultDepthCap = 12;

/// Handle for n -> s(k n + i), 0 <= i < k.
SequenceHandle kernel_child(const SequenceHandle& s, std::uint64_t k, std::uint64_t i);

/// (s(0), ..., s(length - 1)).
std::vector<long long> prefix_vector(const SequenceHandle& s, std::size_t length);

/// Rank of the rational span, by fraction-free elimination in exact integer
/// arithmetic. All vectors must share a length.
std::size_t exact_rank(const std::vector<std::vector<mpz_class>>& vectors);
std::size_t exact_rank(const std::vector<std::vector<long long>>& vectors);

/// Exact rational coefficients expressing target over the given vectors, or
/// nullopt when target lies outside their span.
std::optional<std::vector<mpq_class>> in_span(const std::vector<std::vector<mpz_class>>& vectors,
                                              const std::vector<mpz_class>& target);

/// Exact integer coefficients (solved over the row lattice), or nullopt when
/// no integral combination exists.
std::optional<std::vector<mpz_class>> in_zspan(const std::vector<std::vector<mpz_class>>& vectors,
                                               const std::vector<mpz_class>& target);

/// Breadth-first closure of the k-kernel starting from s itself. A node is
/// retained only when its prefix vector enlarges the current span; children
/// of retained nodes are enqueued in digit order. On closure the rank is
/// re-confirmed at twice the prefix length (children of retained nodes must
/// still reduce to zero), otherwise TruncationUnstable. DepthExceeded when a
/// retained node sits at the depth cap.
RankCertificate explore_kernel(const SequenceHandle& s, std::uint64_t k,
                               std::size_t prefix_length = kDefaultPrefixLength,
                               unsigned depth_cap = kDefaultDepthCap);

/// Runs explore_kernel and solves every retained node's children over the
/// basis with integer coefficients. When a child admits no integral
/// combination the basis is augmented by that child (the dimension can then
/// exceed the rank); NonIntegralCoefficients if augmentation does not settle.
LinearRepresentation build_linrep(const SequenceHandle& s, std::uint64_t k,
                                  std::size_t prefix_length = kDefaultPrefixLength,
                                  unsigned depth_cap = kDefaultDepthCap);

/// Digit-peeling evaluation: peel base-k digits of n least-significant
/// first, accumulating the corresponding transition matrices against the
/// coordinate functional of basis[0]; contract with the initial values. For
/// the empty representation returns 0.
long long eval_linrep(const LinearRepresentation& rep, std::uint64_t n);

/// M^(0) * initial == initial; holds for every well-formed representation.
bool zero_consistent(const LinearRepresentation& rep);

/// First n < limit with eval_linrep(rep, n) != s(n), if any.
std::optional<std::uint64_t> first_linrep_mismatch(const LinearRepresentation& rep,
                                                   const SequenceHandle& s, std::uint64_t limit);

} // namespace lucasreg
