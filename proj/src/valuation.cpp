#include "lucasreg/valuation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lucasreg {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kFactorizeCap = 1'000'000'000ULL;

u64 mulmod(u64 x, u64 y, u64 m) { return static_cast<u64>(static_cast<u128>(x) * y % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
    u64 acc = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) acc = mulmod(acc, base, m);
        exp >>= 1;
        if (exp > 0) base = mulmod(base, base, m);
    }
    return acc;
}

u64 gcd_u64(u64 x, u64 y) { return std::gcd(x, y); }

u64 lcm_u64(u64 x, u64 y) {
    const u128 l = static_cast<u128>(x / gcd_u64(x, y)) * y;
    if (l > UINT64_MAX) throw OutOfRange("lcm overflow");
    return static_cast<u64>(l);
}

u64 abs_b(const LucasParams& params) {
    const long long b = params.b;
    return b < 0 ? static_cast<u64>(-(b + 1)) + 1 : static_cast<u64>(b);
}

void require_prime_not_dividing_b(const LucasParams& params, u64 p) {
    if (!is_prime_u64(p)) throw OutOfRange("p must be prime: " + std::to_string(p));
    if (abs_b(params) % p == 0) {
        throw NotCoprime("p = " + std::to_string(p) + " divides b = " + std::to_string(params.b));
    }
}

} // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (u64 d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

std::uint64_t Factorization::value() const {
    u64 v = 1;
    for (const auto& pp : pairs) {
        for (unsigned e = 0; e < pp.exp; ++e) v *= pp.p;
    }
    return v;
}

std::uint64_t Factorization::radical() const {
    u64 r = 1;
    for (const auto& pp : pairs) r *= pp.p;
    return r;
}

Factorization factorize(std::uint64_t k) {
    if (k < 2) throw OutOfRange("factorize requires k >= 2");
    if (k > kFactorizeCap) throw OutOfRange("factorize cap is 10^9, got " + std::to_string(k));
    Factorization fact;
    u64 rest = k;
    auto strip = [&](u64 p) {
        unsigned e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        if (e > 0) fact.pairs.push_back({p, e});
    };
    strip(2);
    for (u64 d = 3; d * d <= rest; d += 2) strip(d);
    if (rest > 1) fact.pairs.push_back({rest, 1});
    return fact;
}

int legendre(long long delta, std::uint64_t p) {
    if (p < 3 || !is_prime_u64(p)) throw OutOfRange("legendre requires an odd prime");
    long long r = delta % static_cast<long long>(p);
    if (r < 0) r += static_cast<long long>(p);
    const u64 d = static_cast<u64>(r);
    if (d == 0) return 0;
    const u64 e = powmod(d, (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

TauValue tau_prime(const LucasParams& params, std::uint64_t p) {
    require_prime_not_dividing_b(params, p);
    // Scan (u_n mod p); tau(p) <= p + 1 always, so the loop is bounded.
    const u64 a = static_cast<u64>(((params.a % static_cast<long long>(p)) + static_cast<long long>(p))) % p;
    const u64 b = static_cast<u64>(((params.b % static_cast<long long>(p)) + static_cast<long long>(p))) % p;
    u64 prev = 0, cur = 1 % p;
    u64 tau = 0;
    for (u64 n = 1; n <= p + 1; ++n) {
        if (cur == 0) {
            tau = n;
            break;
        }
        const u64 next = (mulmod(a, cur, p) + mulmod(b, prev, p)) % p;
        prev = cur;
        cur = next;
    }
    if (tau == 0) throw std::logic_error("rank of apparition not found up to p + 1");

    const bool p_divides_delta = (params.delta % static_cast<long long>(p)) == 0;
    if (p == 2) {
        if (tau != (p_divides_delta ? 2u : 3u)) throw std::logic_error("tau(2) inconsistent");
    } else {
        const long long bound = static_cast<long long>(p) - legendre(params.delta, p);
        if (bound % static_cast<long long>(tau) != 0) {
            throw std::logic_error("tau(p) does not divide p - (Delta/p)");
        }
        if (p_divides_delta && tau != p) throw std::logic_error("tau(p) != p despite p | Delta");
    }
    return TauValue{p, tau};
}

TauValue tau_squarefree(const LucasParams& params, std::uint64_t m) {
    if (m == 0) throw OutOfRange("tau requires m >= 1");
    if (m == 1) return TauValue{1, 1};
    const Factorization fact = factorize(m);
    for (const auto& pp : fact.pairs) {
        if (pp.exp > 1) throw NotSquarefree("m = " + std::to_string(m) + " is not squarefree");
    }
    u64 tau = 1;
    for (const auto& pp : fact.pairs) tau = lcm_u64(tau, tau_prime(params, pp.p).tau);
    if (lucas_term_mod(params, tau, mpz_class(static_cast<unsigned long>(m))) != 0) {
        throw std::logic_error("lcm of prime taus does not satisfy m | u_tau");
    }
    return TauValue{m, tau};
}

RhoSpec rho(const LucasParams& params, std::uint64_t p) {
    require_prime_not_dividing_b(params, p);
    const bool p_divides_delta = (params.delta % static_cast<long long>(p)) == 0;
    RhoSpec spec;
    spec.p = p;
    if (p == 2) {
        if (p_divides_delta) {
            spec.rho_odd = spec.rho_even = valuation_oracle(params, 2, 2) - 1;
        } else {
            spec.rho_odd = valuation_oracle(params, 2, 3);
            spec.rho_even = valuation_oracle(params, 2, 6) - 1;
        }
    } else if (!p_divides_delta) {
        const u64 tau = tau_prime(params, p).tau;
        spec.rho_odd = spec.rho_even = valuation_oracle(params, p, tau);
    } else if (p == 3) {
        spec.rho_odd = spec.rho_even = valuation_oracle(params, 3, 3) - 1;
    } else {
        spec.rho_odd = spec.rho_even = 0;
    }
    return spec;
}

PrimeContext make_prime_context(const LucasParams& params, std::uint64_t p) {
    return PrimeContext{p, tau_prime(params, p).tau, rho(params, p)};
}

Valuation nu_p_closed(const PrimeContext& ctx, std::uint64_t n) {
    if (n < 1) throw OutOfRange("closed formula requires n >= 1");
    if (n % ctx.tau != 0) return 0;
    return nu_u64(ctx.p, n) + ctx.rho_spec.at(n);
}

Valuation nu_p_closed(const LucasParams& params, std::uint64_t p, std::uint64_t n) {
    return nu_p_closed(make_prime_context(params, p), n);
}

mpz_class c_k(const LucasParams& params, const Factorization& k_fact, Parity n_parity) {
    mpz_class c = 1;
    for (const auto& pp : k_fact.pairs) {
        const RhoSpec spec = rho(params, pp.p);
        const Valuation e = (n_parity == Parity::even) ? spec.rho_even : spec.rho_odd;
        mpz_class pe;
        mpz_ui_pow_ui(pe.get_mpz_t(), pp.p, e);
        c *= pe;
    }
    return c;
}

CompositeContext make_composite_context(const LucasParams& params, std::uint64_t k) {
    if (trivial_case(params, k) != TrivialCase::coprime) {
        throw NotCoprime("gcd(k, b) > 1 for k = " + std::to_string(k));
    }
    CompositeContext ctx;
    ctx.k = k;
    ctx.fact = factorize(k);
    ctx.tau_rad = tau_squarefree(params, ctx.fact.radical()).tau;
    ctx.c_odd = c_k(params, ctx.fact, Parity::odd);
    ctx.c_even = c_k(params, ctx.fact, Parity::even);
    return ctx;
}

Valuation nu_k_closed(const CompositeContext& ctx, std::uint64_t n) {
    if (n < 1) throw OutOfRange("closed formula requires n >= 1");
    if (n % ctx.tau_rad != 0) return 0;
    const mpz_class target = (n % 2 == 0 ? ctx.c_even : ctx.c_odd) * static_cast<unsigned long>(n);
    return nu_int(ctx.k, target);
}

Valuation nu_k_closed(const LucasParams& params, std::uint64_t k, std::uint64_t n) {
    return nu_k_closed(make_composite_context(params, k), n);
}

Valuation nu_k_via_min(const Factorization& k_fact, const mpz_class& m) {
    if (m == 0) throw ZeroArgument("nu_k_via_min is undefined at 0");
    if (k_fact.pairs.empty()) throw OutOfRange("empty factorization");
    Valuation best = UINT64_MAX;
    for (const auto& pp : k_fact.pairs) {
        best = std::min(best, nu_int(pp.p, m) / pp.exp);
    }
    return best;
}

TrivialCase trivial_case(const LucasParams& params, std::uint64_t k) {
    if (k < 2) throw OutOfRange("k must be >= 2");
    const u64 g = gcd_u64(k, abs_b(params));
    if (g == 1) return TrivialCase::coprime;
    const u64 abs_a = params.a < 0 ? static_cast<u64>(-(params.a + 1)) + 1 : static_cast<u64>(params.a);
    for (const auto& pp : factorize(g).pairs) {
        if (abs_a % pp.p != 0) return TrivialCase::identically_zero;
    }
    return TrivialCase::unsupported;
}

} // namespace lucasreg
