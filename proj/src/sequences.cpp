#include "lucasreg/sequences.hpp"

#include <array>
#include <string>

namespace lucasreg {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 normalize_mod_u64(long long v, u64 m) {
    long long r = v % static_cast<long long>(m);
    if (r < 0) r += static_cast<long long>(m);
    return static_cast<u64>(r);
}

// 2x2 matrix over Z/mZ, m < 2^63 so that entry products fit in 128 bits.
struct Mat2x2U64 {
    std::array<u64, 4> v; // row-major
};

Mat2x2U64 mul(const Mat2x2U64& x, const Mat2x2U64& y, u64 m) {
    auto ent = [&](int r, int c) {
        u128 s = static_cast<u128>(x.v[2 * r]) * y.v[c] +
                 static_cast<u128>(x.v[2 * r + 1]) * y.v[2 + c];
        return static_cast<u64>(s % m);
    };
    return {{ent(0, 0), ent(0, 1), ent(1, 0), ent(1, 1)}};
}

struct Mat2x2Mpz {
    std::array<mpz_class, 4> v;
};

Mat2x2Mpz mul(const Mat2x2Mpz& x, const Mat2x2Mpz& y, const mpz_class& m) {
    Mat2x2Mpz r;
    mpz_class t;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            t = x.v[2 * i] * y.v[j];
            t += x.v[2 * i + 1] * y.v[2 + j];
            mpz_mod(r.v[2 * i + j].get_mpz_t(), t.get_mpz_t(), m.get_mpz_t());
        }
    }
    return r;
}

template <typename Mat, typename Mod>
Mat mat_pow(Mat base, u64 n, const Mod& m, const Mat& id) {
    Mat acc = id;
    while (n > 0) {
        if (n & 1) acc = mul(acc, base, m);
        n >>= 1;
        if (n > 0) base = mul(base, base, m);
    }
    return acc;
}

} // namespace

bool is_degenerate(long long a, long long b) {
    if (b == 0) return true;
    const __int128 a2 = static_cast<__int128>(a) * a;
    for (int c = 0; c <= 4; ++c) {
        if (a2 == static_cast<__int128>(-c) * b) return true;
    }
    return false;
}

LucasParams make_params(long long a, long long b) {
    if (is_degenerate(a, b)) {
        throw DegenerateSequence("degenerate Lucas sequence: a=" + std::to_string(a) +
                                 ", b=" + std::to_string(b));
    }
    const __int128 delta = static_cast<__int128>(a) * a + static_cast<__int128>(4) * b;
    if (delta > static_cast<__int128>(INT64_MAX) || delta < static_cast<__int128>(INT64_MIN)) {
        throw OutOfRange("discriminant a^2 + 4b does not fit in 64 bits");
    }
    return LucasParams{a, b, static_cast<long long>(delta)};
}

mpz_class lucas_term(const LucasParams& params, std::uint64_t n) {
    mpz_class prev = 0, cur = 1; // u_0, u_1
    if (n == 0) return prev;
    const long a = static_cast<long>(params.a);
    const long b = static_cast<long>(params.b);
    mpz_class next;
    for (u64 i = 1; i < n; ++i) {
        next = a * cur + b * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

std::uint64_t lucas_term_mod_u64(const LucasParams& params, std::uint64_t n, std::uint64_t m) {
    if (m < 2 || m >= (1ULL << 63)) throw OutOfRange("modulus out of range for u64 path");
    if (n == 0) return 0;
    const u64 a = normalize_mod_u64(params.a, m);
    const u64 b = normalize_mod_u64(params.b, m);
    const Mat2x2U64 companion{{a, b, 1 % m, 0}};
    const Mat2x2U64 id{{1 % m, 0, 0, 1 % m}};
    // (u_{n+1}, u_n) = C^n (u_1, u_0), so u_n is the lower-left entry of C^n.
    return mat_pow(companion, n, m, id).v[2];
}

mpz_class lucas_term_mod(const LucasParams& params, std::uint64_t n, const mpz_class& m) {
    if (m < 2) throw OutOfRange("modulus must be >= 2");
    if (mpz_sizeinbase(m.get_mpz_t(), 2) <= 62 && m.fits_ulong_p()) {
        return mpz_class(lucas_term_mod_u64(params, n, m.get_ui()));
    }
    if (n == 0) return mpz_class(0);
    mpz_class a(static_cast<long>(params.a)), b(static_cast<long>(params.b));
    mpz_mod(a.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    mpz_mod(b.get_mpz_t(), b.get_mpz_t(), m.get_mpz_t());
    const Mat2x2Mpz companion{{a, b, mpz_class(1), mpz_class(0)}};
    const Mat2x2Mpz id{{mpz_class(1), mpz_class(0), mpz_class(0), mpz_class(1)}};
    return mat_pow(companion, n, m, id).v[2];
}

Valuation nu_int(std::uint64_t k, const mpz_class& m) {
    if (k < 2) throw OutOfRange("base k must be >= 2");
    if (m == 0) throw ZeroArgument("nu_int is undefined at 0");
    mpz_class r = abs(m);
    Valuation e = 0;
    while (mpz_divisible_ui_p(r.get_mpz_t(), k)) {
        mpz_divexact_ui(r.get_mpz_t(), r.get_mpz_t(), k);
        ++e;
    }
    return e;
}

Valuation nu_u64(std::uint64_t k, std::uint64_t m) {
    if (k < 2) throw OutOfRange("base k must be >= 2");
    if (m == 0) throw ZeroArgument("nu_u64 is undefined at 0");
    Valuation e = 0;
    while (m % k == 0) {
        m /= k;
        ++e;
    }
    return e;
}

Valuation valuation_oracle(const LucasParams& params, std::uint64_t k, std::uint64_t n) {
    if (k < 2) throw OutOfRange("base k must be >= 2");
    if (n < 1) throw OutOfRange("oracle requires n >= 1");
    constexpr u64 kExponentCap = 1ULL << 20;
    for (u64 exponent = 8;; exponent *= 2) {
        if (exponent > kExponentCap) {
            throw EscalationExceeded("no nonzero residue of u_" + std::to_string(n) +
                                     " modulo k^e up to e=2^20; sequence may be degenerate");
        }
        mpz_class modulus;
        mpz_ui_pow_ui(modulus.get_mpz_t(), k, exponent);
        const mpz_class residue = lucas_term_mod(params, n, modulus);
        // 0 < residue < k^E pins the valuation exactly.
        if (residue != 0) return nu_int(k, residue);
    }
}

} // namespace lucasreg
