#include "lucasreg/regularity.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <utility>

namespace lucasreg {

namespace {

using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Raised internally when the word-sized elimination fast path would lose
// exactness; the caller reruns with arbitrary precision.
struct OverflowSignal {};

u128 abs128(i128 x) { return x < 0 ? -static_cast<u128>(x) : static_cast<u128>(x); }

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        const u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

long long narrow_i128(i128 x) {
    if (x > std::numeric_limits<long long>::max() || x < std::numeric_limits<long long>::min()) {
        throw OverflowSignal{};
    }
    return static_cast<long long>(x);
}

std::vector<mpz_class> to_mpz(const std::vector<long long>& v) {
    std::vector<mpz_class> out;
    out.reserve(v.size());
    for (const long long x : v) out.emplace_back(static_cast<long>(x));
    return out;
}

u64 pow_checked(u64 k, unsigned e) {
    u64 r = 1;
    for (unsigned t = 0; t < e; ++t) {
        if (r > UINT64_MAX / k) throw OutOfRange("kernel index range exceeds 64 bits");
        r *= k;
    }
    return r;
}

std::vector<long long> node_prefix(const SequenceHandle& s, u64 k, KernelNode node,
                                   std::size_t len) {
    const u64 step = pow_checked(k, node.e);
    if (len > 0 && step > (UINT64_MAX - node.i) / len) {
        throw OutOfRange("kernel index range exceeds 64 bits");
    }
    std::vector<long long> v(len);
    for (std::size_t n = 0; n < len; ++n) v[n] = s.eval(step * n + node.i);
    return v;
}

// Row echelon over the integers with word-sized entries. Combines are exact
// in 128 bits; rows are kept primitive so entries stay small. Any entry that
// cannot be narrowed back to 64 bits aborts via OverflowSignal.
class EchelonI64 {
public:
    explicit EchelonI64(std::size_t len) : len_(len) {}

    std::size_t rank() const { return rows_.size(); }

    bool contains(const std::vector<long long>& vec) const {
        std::vector<i128> work(vec.begin(), vec.end());
        reduce(work);
        return std::all_of(work.begin(), work.end(), [](i128 x) { return x == 0; });
    }

    bool insert(const std::vector<long long>& vec) {
        std::vector<i128> work(vec.begin(), vec.end());
        reduce(work);
        std::size_t lead = len_;
        for (std::size_t c = 0; c < len_; ++c) {
            if (work[c] != 0) {
                lead = c;
                break;
            }
        }
        if (lead == len_) return false;
        Row row;
        row.lead = lead;
        row.v.resize(len_);
        for (std::size_t c = 0; c < len_; ++c) row.v[c] = narrow_i128(work[c]);
        const auto pos = std::lower_bound(rows_.begin(), rows_.end(), lead,
                                          [](const Row& r, std::size_t l) { return r.lead < l; });
        rows_.insert(pos, std::move(row));
        return true;
    }

private:
    struct Row {
        std::vector<long long> v;
        std::size_t lead = 0;
    };

    void reduce(std::vector<i128>& work) const {
        for (const Row& row : rows_) {
            const i128 f = work[row.lead];
            if (f == 0) continue;
            const i128 g = row.v[row.lead];
            // work := g*work - f*row; exact since both factors fit in 64 bits.
            u128 maxabs = 0;
            for (std::size_t c = 0; c < len_; ++c) {
                work[c] = g * work[c] - static_cast<i128>(f) * row.v[c];
                maxabs = std::max(maxabs, abs128(work[c]));
            }
            if (maxabs >> 32) normalize(work);
        }
    }

    // Divide by the content, then require word-sized entries.
    static void normalize(std::vector<i128>& work) {
        u128 g = 0;
        for (const i128 x : work) {
            g = gcd128(g, abs128(x));
            if (g == 1) break;
        }
        if (g == 0) return;
        u128 maxabs = 0;
        for (i128& x : work) {
            if (g > 1) x /= static_cast<i128>(g); // exact: g divides every entry
            maxabs = std::max(maxabs, abs128(x));
        }
        if (maxabs > static_cast<u128>(std::numeric_limits<long long>::max())) {
            throw OverflowSignal{};
        }
    }

    std::size_t len_;
    std::vector<Row> rows_;
};

// Arbitrary-precision variant, used directly by the public rank/span entry
// points and as the fallback for the explorer.
class EchelonMpz {
public:
    explicit EchelonMpz(std::size_t len) : len_(len) {}

    std::size_t rank() const { return rows_.size(); }

    bool contains(const std::vector<long long>& vec) const {
        std::vector<mpz_class> work = to_mpz(vec);
        reduce(work);
        return std::all_of(work.begin(), work.end(), [](const mpz_class& x) { return x == 0; });
    }

    bool insert(const std::vector<long long>& vec) {
        return insert(to_mpz(vec));
    }

    bool insert(std::vector<mpz_class> work) {
        reduce(work);
        std::size_t lead = len_;
        for (std::size_t c = 0; c < len_; ++c) {
            if (work[c] != 0) {
                lead = c;
                break;
            }
        }
        if (lead == len_) return false;
        Row row{std::move(work), lead};
        const auto pos = std::lower_bound(rows_.begin(), rows_.end(), lead,
                                          [](const Row& r, std::size_t l) { return r.lead < l; });
        rows_.insert(pos, std::move(row));
        return true;
    }

private:
    struct Row {
        std::vector<mpz_class> v;
        std::size_t lead = 0;
    };

    void reduce(std::vector<mpz_class>& work) const {
        for (const Row& row : rows_) {
            if (work[row.lead] == 0) continue;
            const mpz_class f = work[row.lead];
            const mpz_class& g = row.v[row.lead];
            for (std::size_t c = 0; c < len_; ++c) {
                mpz_mul(work[c].get_mpz_t(), work[c].get_mpz_t(), g.get_mpz_t());
                mpz_submul(work[c].get_mpz_t(), f.get_mpz_t(), row.v[c].get_mpz_t());
            }
            normalize(work);
        }
    }

    static void normalize(std::vector<mpz_class>& work) {
        mpz_class g = 0;
        for (const mpz_class& x : work) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
            if (g == 1) return;
        }
        if (g <= 1) return;
        for (mpz_class& x : work) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    }

    std::size_t len_;
    std::vector<Row> rows_;
};

// Row echelon form over Z with a mirrored unimodular transform, for solving
// x * A = target in integers.
class HnfSolver {
public:
    explicit HnfSolver(std::vector<std::vector<mpz_class>> rows) : a_(std::move(rows)) {
        m_ = a_.size();
        len_ = m_ > 0 ? a_[0].size() : 0;
        u_.assign(m_, std::vector<mpz_class>(m_, 0));
        for (std::size_t r = 0; r < m_; ++r) u_[r][r] = 1;

        std::size_t pivot_row = 0;
        for (std::size_t col = 0; col < len_ && pivot_row < m_; ++col) {
            while (true) {
                std::size_t best = m_;
                for (std::size_t r = pivot_row; r < m_; ++r) {
                    if (a_[r][col] == 0) continue;
                    if (best == m_ || cmpabs(a_[r][col], a_[best][col]) < 0) best = r;
                }
                if (best == m_) break;
                if (best != pivot_row) {
                    std::swap(a_[best], a_[pivot_row]);
                    std::swap(u_[best], u_[pivot_row]);
                }
                bool cleared = true;
                for (std::size_t r = pivot_row + 1; r < m_; ++r) {
                    if (a_[r][col] == 0) continue;
                    mpz_class q;
                    mpz_tdiv_q(q.get_mpz_t(), a_[r][col].get_mpz_t(), a_[pivot_row][col].get_mpz_t());
                    submul_row(a_[r], a_[pivot_row], q);
                    submul_row(u_[r], u_[pivot_row], q);
                    if (a_[r][col] != 0) cleared = false;
                }
                if (cleared) break;
            }
            if (a_[pivot_row][col] != 0) {
                leads_.push_back(col);
                ++pivot_row;
            }
        }
        rank_ = pivot_row;
    }

    std::optional<std::vector<mpz_class>> solve(const std::vector<mpz_class>& target) const {
        if (target.size() != len_) throw DimensionMismatch("target length mismatch");
        std::vector<mpz_class> residual = target;
        std::vector<mpz_class> y(m_, 0);
        for (std::size_t r = 0; r < rank_; ++r) {
            const std::size_t col = leads_[r];
            if (residual[col] == 0) continue;
            if (!mpz_divisible_p(residual[col].get_mpz_t(), a_[r][col].get_mpz_t())) {
                return std::nullopt;
            }
            mpz_class q;
            mpz_divexact(q.get_mpz_t(), residual[col].get_mpz_t(), a_[r][col].get_mpz_t());
            submul_row(residual, a_[r], q);
            y[r] = std::move(q);
        }
        for (const mpz_class& x : residual) {
            if (x != 0) return std::nullopt;
        }
        std::vector<mpz_class> coeffs(m_, 0);
        for (std::size_t r = 0; r < m_; ++r) {
            if (y[r] == 0) continue;
            for (std::size_t l = 0; l < m_; ++l) {
                mpz_addmul(coeffs[l].get_mpz_t(), y[r].get_mpz_t(), u_[r][l].get_mpz_t());
            }
        }
        return coeffs;
    }

private:
    static int cmpabs(const mpz_class& x, const mpz_class& y) {
        return mpz_cmpabs(x.get_mpz_t(), y.get_mpz_t());
    }

    static void submul_row(std::vector<mpz_class>& row, const std::vector<mpz_class>& other,
                           const mpz_class& q) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            mpz_submul(row[c].get_mpz_t(), q.get_mpz_t(), other[c].get_mpz_t());
        }
    }

    std::vector<std::vector<mpz_class>> a_;
    std::vector<std::vector<mpz_class>> u_;
    std::vector<std::size_t> leads_;
    std::size_t m_ = 0;
    std::size_t len_ = 0;
    std::size_t rank_ = 0;
};

void check_same_length(const std::vector<std::vector<mpz_class>>& vectors) {
    for (const auto& v : vectors) {
        if (v.size() != vectors.front().size()) {
            throw DimensionMismatch("vectors differ in length");
        }
    }
}

struct ExploreOutcome {
    std::vector<KernelNode> retained;
    RankCertificate cert;
};

template <class Echelon>
ExploreOutcome explore_impl(const SequenceHandle& s, u64 k, std::size_t L, unsigned e_max) {
    Echelon ech(L);
    std::deque<KernelNode> queue{KernelNode{0, 0}};
    std::vector<KernelNode> retained;
    while (!queue.empty()) {
        const KernelNode node = queue.front();
        queue.pop_front();
        if (!ech.insert(node_prefix(s, k, node, L))) continue;
        if (node.e >= e_max) {
            throw DepthExceeded("kernel not closed within depth " + std::to_string(e_max) +
                                " for " + s.description);
        }
        retained.push_back(node);
        const u64 step = pow_checked(k, node.e);
        for (u64 d = 0; d < k; ++d) queue.push_back(KernelNode{node.e + 1, node.i + d * step});
    }

    // Re-confirm at doubled prefix length: the retained family must keep its
    // rank and every child must still reduce to zero.
    Echelon ech2(2 * L);
    for (const KernelNode& node : retained) {
        if (!ech2.insert(node_prefix(s, k, node, 2 * L))) {
            throw std::logic_error("basis lost independence on longer prefixes");
        }
    }
    std::vector<KernelNode> candidates{KernelNode{0, 0}};
    for (const KernelNode& node : retained) {
        const u64 step = pow_checked(k, node.e);
        for (u64 d = 0; d < k; ++d) candidates.push_back(KernelNode{node.e + 1, node.i + d * step});
    }
    for (const KernelNode& node : candidates) {
        if (!ech2.contains(node_prefix(s, k, node, 2 * L))) {
            throw TruncationUnstable("rank at prefix length " + std::to_string(L) +
                                     " not stable at " + std::to_string(2 * L) + " for " +
                                     s.description);
        }
    }
    return ExploreOutcome{std::move(retained),
                          RankCertificate{ech.rank(), L, true}};
}

ExploreOutcome explore(const SequenceHandle& s, u64 k, std::size_t L, unsigned e_max) {
    if (k < 2) throw OutOfRange("base k must be >= 2");
    if (L < 1) throw OutOfRange("prefix length must be >= 1");
    try {
        return explore_impl<EchelonI64>(s, k, L, e_max);
    } catch (const OverflowSignal&) {
        return explore_impl<EchelonMpz>(s, k, L, e_max);
    }
}

std::vector<mpz_class> node_prefix_mpz(const SequenceHandle& s, u64 k, KernelNode node,
                                       std::size_t len) {
    return to_mpz(node_prefix(s, k, node, len));
}

} // namespace

SequenceHandle kernel_child(const SequenceHandle& s, std::uint64_t k, std::uint64_t i) {
    if (i >= k) throw OffsetOutOfRange("offset " + std::to_string(i) + " not below " +
                                       std::to_string(k));
    auto eval = s.eval;
    return SequenceHandle{
        [eval, k, i](std::uint64_t n) { return eval(k * n + i); },
        s.description + "[" + std::to_string(k) + "n+" + std::to_string(i) + "]"};
}

std::vector<long long> prefix_vector(const SequenceHandle& s, std::size_t length) {
    if (length < 1) throw OutOfRange("prefix length must be >= 1");
    std::vector<long long> v(length);
    for (std::size_t n = 0; n < length; ++n) v[n] = s.eval(n);
    return v;
}

std::size_t exact_rank(const std::vector<std::vector<mpz_class>>& vectors) {
    if (vectors.empty()) return 0;
    check_same_length(vectors);
    EchelonMpz ech(vectors.front().size());
    for (const auto& v : vectors) ech.insert(v);
    return ech.rank();
}

std::size_t exact_rank(const std::vector<std::vector<long long>>& vectors) {
    std::vector<std::vector<mpz_class>> conv;
    conv.reserve(vectors.size());
    for (const auto& v : vectors) conv.push_back(to_mpz(v));
    return exact_rank(conv);
}

std::optional<std::vector<mpq_class>> in_span(const std::vector<std::vector<mpz_class>>& vectors,
                                              const std::vector<mpz_class>& target) {
    check_same_length(vectors);
    const std::size_t m = vectors.size();
    for (const auto& v : vectors) {
        if (v.size() != target.size()) throw DimensionMismatch("target length mismatch");
    }

    // One equation per coordinate: sum_j x_j vectors[j][c] = target[c].
    // Gaussian elimination over Q on (m+1)-wide equation rows.
    std::vector<std::vector<mpq_class>> pivots; // normalized pivot rows
    std::vector<std::size_t> pivot_cols;
    for (std::size_t c = 0; c < target.size(); ++c) {
        std::vector<mpq_class> eq(m + 1);
        for (std::size_t j = 0; j < m; ++j) eq[j] = vectors[j][c];
        eq[m] = target[c];
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            const mpq_class f = eq[pivot_cols[r]];
            if (f == 0) continue;
            for (std::size_t j = 0; j <= m; ++j) eq[j] -= f * pivots[r][j];
        }
        std::size_t lead = m + 1;
        for (std::size_t j = 0; j < m; ++j) {
            if (eq[j] != 0) {
                lead = j;
                break;
            }
        }
        if (lead == m + 1) {
            if (eq[m] != 0) return std::nullopt; // 0 = nonzero: inconsistent
            continue;
        }
        const mpq_class inv = eq[lead];
        for (std::size_t j = 0; j <= m; ++j) eq[j] /= inv;
        pivots.push_back(std::move(eq));
        pivot_cols.push_back(lead);
    }

    // Back-substitute so each pivot row mentions only its own unknown.
    for (std::size_t r = pivots.size(); r-- > 0;) {
        for (std::size_t q = r + 1; q < pivots.size(); ++q) {
            const mpq_class f = pivots[r][pivot_cols[q]];
            if (f == 0) continue;
            for (std::size_t j = 0; j <= m; ++j) pivots[r][j] -= f * pivots[q][j];
        }
    }
    std::vector<mpq_class> coeffs(m, mpq_class(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) coeffs[pivot_cols[r]] = pivots[r][m];
    return coeffs;
}

std::optional<std::vector<mpz_class>> in_zspan(const std::vector<std::vector<mpz_class>>& vectors,
                                               const std::vector<mpz_class>& target) {
    if (vectors.empty()) {
        for (const mpz_class& x : target) {
            if (x != 0) return std::nullopt;
        }
        return std::vector<mpz_class>{};
    }
    check_same_length(vectors);
    return HnfSolver(vectors).solve(target);
}

RankCertificate explore_kernel(const SequenceHandle& s, std::uint64_t k, std::size_t prefix_length,
                               unsigned depth_cap) {
    return explore(s, k, prefix_length, depth_cap).cert;
}

LinearRepresentation build_linrep(const SequenceHandle& s, std::uint64_t k,
                                  std::size_t prefix_length, unsigned depth_cap) {
    const ExploreOutcome outcome = explore(s, k, prefix_length, depth_cap);
    std::vector<KernelNode> family = outcome.retained;
    const std::size_t len = 2 * prefix_length;

    constexpr std::size_t kMaxAugmentations = 64;
    for (std::size_t round = 0; round <= kMaxAugmentations; ++round) {
        const std::size_t dim = family.size();
        std::vector<std::vector<mpz_class>> vectors;
        vectors.reserve(dim);
        for (const KernelNode& node : family) vectors.push_back(node_prefix_mpz(s, k, node, len));
        const HnfSolver solver(vectors);

        std::vector<std::vector<long long>> matrices(k, std::vector<long long>(dim * dim, 0));
        std::optional<KernelNode> missing;
        for (std::size_t j = 0; j < dim && !missing; ++j) {
            const u64 step = pow_checked(k, family[j].e);
            for (u64 d = 0; d < k; ++d) {
                const KernelNode child{family[j].e + 1, family[j].i + d * step};
                const auto sol = solver.solve(node_prefix_mpz(s, k, child, len));
                if (!sol) {
                    if (child.e > depth_cap) {
                        throw NonIntegralCoefficients(
                            "no integral closure within depth cap for " + s.description);
                    }
                    missing = child;
                    break;
                }
                for (std::size_t l = 0; l < dim; ++l) {
                    if (!(*sol)[l].fits_slong_p()) {
                        throw OutOfRange("matrix coefficient exceeds 64 bits");
                    }
                    matrices[d][j * dim + l] = (*sol)[l].get_si();
                }
            }
        }
        if (missing) {
            family.push_back(*missing);
            continue;
        }

        LinearRepresentation rep;
        rep.k = k;
        rep.dim = dim;
        rep.basis.reserve(dim);
        for (const KernelNode& node : family) rep.basis.push_back(BasisLabel{node, {}});
        rep.matrices = std::move(matrices);
        rep.initial.reserve(dim);
        for (const KernelNode& node : family) rep.initial.push_back(s.eval(node.i));
        rep.verified_upto = 0;
        return rep;
    }
    throw NonIntegralCoefficients("augmentation did not stabilize for " + s.description);
}

long long eval_linrep(const LinearRepresentation& rep, std::uint64_t n) {
    const std::size_t dim = rep.dim;
    if (dim == 0) return 0;
    // Row functional of basis[0], pushed through the digit matrices in
    // least-significant-first order: s(n) = e_0 M^(d_0) ... M^(d_t) initial.
    std::vector<i128> w(dim, 0);
    w[0] = 1;
    std::vector<i128> next(dim);
    u64 rest = n;
    // Keeps every product in the next step well inside 128 bits.
    constexpr i128 kGuard = static_cast<i128>(1) << 45;
    while (rest > 0) {
        const std::size_t digit = static_cast<std::size_t>(rest % rep.k);
        rest /= rep.k;
        const auto& mat = rep.matrices[digit];
        for (std::size_t c = 0; c < dim; ++c) {
            i128 acc = 0;
            for (std::size_t j = 0; j < dim; ++j) acc += w[j] * mat[j * dim + c];
            next[c] = acc;
            if (acc > kGuard || acc < -kGuard) throw OutOfRange("evaluation overflow");
        }
        w.swap(next);
    }
    i128 result = 0;
    for (std::size_t j = 0; j < dim; ++j) result += w[j] * rep.initial[j];
    if (result > std::numeric_limits<long long>::max() ||
        result < std::numeric_limits<long long>::min()) {
        throw OutOfRange("evaluation overflow");
    }
    return static_cast<long long>(result);
}

bool zero_consistent(const LinearRepresentation& rep) {
    const std::size_t dim = rep.dim;
    if (dim == 0) return true;
    const auto& m0 = rep.matrices[0];
    for (std::size_t j = 0; j < dim; ++j) {
        i128 acc = 0;
        for (std::size_t l = 0; l < dim; ++l) acc += static_cast<i128>(m0[j * dim + l]) * rep.initial[l];
        if (acc != rep.initial[j]) return false;
    }
    return true;
}

std::optional<std::uint64_t> first_linrep_mismatch(const LinearRepresentation& rep,
                                                   const SequenceHandle& s, std::uint64_t limit) {
    for (u64 n = 0; n < limit; ++n) {
        if (eval_linrep(rep, n) != s.eval(n)) return n;
    }
    return std::nullopt;
}

} // namespace lucasreg
