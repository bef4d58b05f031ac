#include "lucasreg/analysis.hpp"

#include <algorithm>
#include <utility>

namespace lucasreg {

namespace {

using u64 = std::uint64_t;

SequenceHandle zero_handle() {
    return SequenceHandle{[](u64) -> long long { return 0; }, "0"};
}

// [tau | n + j + 1] as a handle.
SequenceHandle indicator_handle(u64 tau, u64 j) {
    return SequenceHandle{[tau, j](u64 n) -> long long { return (n + j + 1) % tau == 0 ? 1 : 0; },
                          "s_" + std::to_string(j) + " (mod " + std::to_string(tau) + ")"};
}

u64 mod_shift(long long x, u64 tau) {
    const long long t = static_cast<long long>(tau);
    return static_cast<u64>(((x % t) + t) % t);
}

int epsilon_of(u64 p, u64 tau) {
    if ((p + 1) % tau == 0 && (p - 1) % tau != 0) return -1;
    return 1;
}

struct Checker {
    std::vector<IdentityReport>& reports;

    void run(const std::string& name, auto&& body) {
        IdentityReport rep{name, true, std::nullopt};
        try {
            body();
        } catch (const IdentityViolation& v) {
            rep.pass = false;
            rep.witness = IdentityWitness{v.n, v.i, v.j};
        }
        reports.push_back(std::move(rep));
    }
};

} // namespace

const char* to_string(RankCase c) {
    switch (c) {
    case RankCase::delta_small_nu1: return "delta_small_nu1";
    case RankCase::delta_small_nuNe1: return "delta_small_nuNe1";
    case RankCase::delta_large: return "delta_large";
    case RankCase::nodelta_p2_irregular: return "nodelta_p2_irregular";
    case RankCase::nodelta_generic: return "nodelta_generic";
    }
    return "?";
}

RankReport predicted_rank(const LucasParams& params, std::uint64_t p) {
    const PrimeContext ctx = make_prime_context(params, p);
    RankReport report;
    report.p = p;
    if (params.delta % static_cast<long long>(p) == 0) {
        if (p >= 5) {
            report.case_label = RankCase::delta_large;
            report.predicted = 2;
        } else if (nu_p_closed(ctx, p) == 1) {
            report.case_label = RankCase::delta_small_nu1;
            report.predicted = 2;
        } else {
            report.case_label = RankCase::delta_small_nuNe1;
            report.predicted = 3;
        }
    } else {
        if (p == 2 && nu_p_closed(ctx, 6) != nu_p_closed(ctx, 3) + 1) {
            report.case_label = RankCase::nodelta_p2_irregular;
            report.predicted = 5;
        } else {
            report.case_label = RankCase::nodelta_generic;
            report.predicted = ctx.tau + 1;
        }
    }
    return report;
}

RankReport empirical_rank(const LucasParams& params, std::uint64_t p, std::size_t prefix_length,
                          unsigned depth_cap) {
    RankReport report = predicted_rank(params, p);
    const RankCertificate cert =
        explore_kernel(lucas_valuation_handle(params, p), p, prefix_length, depth_cap);
    report.empirical = cert.rank;
    report.agree = (cert.rank == report.predicted);
    return report;
}

SequenceHandle lucas_valuation_handle(const LucasParams& params, std::uint64_t p) {
    const PrimeContext ctx = make_prime_context(params, p);
    return SequenceHandle{
        [ctx](u64 n) -> long long { return static_cast<long long>(nu_p_closed(ctx, n + 1)); },
        "nu_" + std::to_string(p) + "(u_{n+1}) for (a,b)=(" + std::to_string(params.a) + "," +
            std::to_string(params.b) + ")"};
}

SequenceHandle lucas_valuation_handle_k(const LucasParams& params, std::uint64_t k) {
    const TrivialCase tc = trivial_case(params, k);
    if (tc == TrivialCase::identically_zero) return zero_handle();
    if (tc == TrivialCase::unsupported) {
        throw NotCoprime("gcd(k, b) > 1 with all common primes dividing a");
    }
    const CompositeContext ctx = make_composite_context(params, k);
    return SequenceHandle{
        [ctx](u64 n) -> long long { return static_cast<long long>(nu_k_closed(ctx, n + 1)); },
        "nu_" + std::to_string(k) + "(u_{n+1}) for (a,b)=(" + std::to_string(params.a) + "," +
            std::to_string(params.b) + ")"};
}

SequenceHandle plain_valuation_handle(std::uint64_t k) {
    if (k < 2) throw OutOfRange("base k must be >= 2");
    return SequenceHandle{[k](u64 n) -> long long { return static_cast<long long>(nu_u64(k, n + 1)); },
                          "nu_" + std::to_string(k) + "(n+1)"};
}

SequenceHandle constant_handle(long long value) {
    return SequenceHandle{[value](u64) { return value; }, std::to_string(value)};
}

GeneratorFamily generator_family(const LucasParams& params, std::uint64_t p) {
    const PrimeContext ctx = make_prime_context(params, p);
    GeneratorFamily fam;
    fam.p = p;
    fam.delta_branch = (params.delta % static_cast<long long>(p) == 0);
    fam.tau = ctx.tau;
    fam.v = nu_p_closed(ctx, ctx.tau);
    for (u64 j = 0; j < fam.tau; ++j) fam.s_j.push_back(indicator_handle(fam.tau, j));

    if (fam.delta_branch) {
        // tau(p) = p here; s is the constant rho on multiples of p.
        const Valuation rho_value = ctx.rho_spec.rho_odd;
        fam.rho_value = rho_value;
        fam.s = SequenceHandle{
            [p, rho_value](u64 n) -> long long {
                return (n + 1) % p == 0 ? static_cast<long long>(rho_value) : 0;
            },
            "rho_p [p | n+1]"};
        fam.t = zero_handle();
        return fam;
    }

    fam.epsilon = epsilon_of(p, fam.tau);
    const u64 tau = fam.tau;
    const Valuation v = fam.v;
    fam.s = SequenceHandle{
        [p, tau, v](u64 n) -> long long {
            if ((n + 1) % tau != 0) return 0;
            return static_cast<long long>(nu_u64(p, n + 1) + v);
        },
        "(nu_p(n+1) + v) [tau | n+1]"};
    if (p == 2) {
        fam.d = static_cast<long long>(nu_p_closed(ctx, 6)) -
                static_cast<long long>(nu_p_closed(ctx, 3)) - 1;
        const long long d = fam.d;
        fam.t = SequenceHandle{[d](u64 n) -> long long { return (n + 1) % 6 == 0 ? d : 0; },
                               "d [6 | n+1]"};
    } else {
        fam.t = zero_handle();
    }
    return fam;
}

std::vector<SequenceHandle> rank_basis_handles(const GeneratorFamily& family) {
    std::vector<SequenceHandle> handles;
    if (family.delta_branch) {
        handles.push_back(plain_valuation_handle(family.p));
        handles.push_back(family.s);
        handles.push_back(constant_handle(1));
        return handles;
    }
    handles.push_back(family.s);
    for (const auto& sj : family.s_j) handles.push_back(sj);
    if (family.p == 2 && family.d != 0) handles.push_back(family.t);
    return handles;
}

Decomposition decompose_k(const LucasParams& params, std::uint64_t k, std::uint64_t check_upto) {
    const CompositeContext ctx = make_composite_context(params, k);
    Decomposition dec;
    dec.k = k;
    dec.tau_rad = ctx.tau_rad;
    dec.c1 = ctx.c_odd;
    dec.c2 = ctx.c_even;
    const u64 tau = ctx.tau_rad;
    dec.s = SequenceHandle{
        [tau](u64 n) -> long long { return ((n + 1) % tau == 0 && (n + 1) % 2 != 0) ? 1 : 0; },
        "[tau | n+1, n+1 odd]"};
    dec.t = SequenceHandle{
        [tau](u64 n) -> long long { return ((n + 1) % tau == 0 && (n + 1) % 2 == 0) ? 1 : 0; },
        "[tau | n+1, n+1 even]"};

    for (u64 n = 0; n < check_upto; ++n) {
        const long long lhs = static_cast<long long>(nu_k_closed(ctx, n + 1));
        long long rhs = 0;
        if (dec.s.eval(n) != 0) rhs += static_cast<long long>(nu_int(k, dec.c1 * (n + 1)));
        if (dec.t.eval(n) != 0) rhs += static_cast<long long>(nu_int(k, dec.c2 * (n + 1)));
        if (lhs != rhs) throw IdentityViolation("decompose", n);
    }
    return dec;
}

std::vector<IdentityReport> verify_proof_identities(const LucasParams& params, std::uint64_t p,
                                                    std::uint64_t N) {
    const PrimeContext ctx = make_prime_context(params, p);
    const GeneratorFamily fam = generator_family(params, p);
    std::vector<IdentityReport> reports;
    Checker check{reports};
    const u64 tau = fam.tau;

    if (fam.delta_branch) {
        // nu_p(u_{n+1}) = nu_p(n+1) + s(n)
        check.run("sum1", [&] {
            for (u64 n = 0; n < N; ++n) {
                const long long lhs = static_cast<long long>(nu_p_closed(ctx, n + 1));
                const long long rhs =
                    static_cast<long long>(nu_u64(p, n + 1)) + fam.s.eval(n);
                if (lhs != rhs) throw IdentityViolation("sum1", n);
            }
        });
        // s(pn + i) = rho_p [i = p - 1]
        check.run("delta_child", [&] {
            for (u64 i = 0; i < p; ++i) {
                const long long expected = (i == p - 1) ? static_cast<long long>(fam.rho_value) : 0;
                for (u64 n = 0; n < N; ++n) {
                    if (fam.s.eval(p * n + i) != expected) {
                        throw IdentityViolation("delta_child", n, static_cast<std::int64_t>(i));
                    }
                }
            }
        });
        return reports;
    }

    const int eps = fam.epsilon;
    const auto shifted = [&](long long x) { return mod_shift(x, tau); };

    // nu_p(u_{n+1}) = s(n) + t(n)
    check.run("sum2", [&] {
        for (u64 n = 0; n < N; ++n) {
            const long long lhs = static_cast<long long>(nu_p_closed(ctx, n + 1));
            if (lhs != fam.s.eval(n) + fam.t.eval(n)) throw IdentityViolation("sum2", n);
        }
    });
    // s(pn + p - 1) = s(n) + s_0(n)
    check.run("ss0", [&] {
        for (u64 n = 0; n < N; ++n) {
            if (fam.s.eval(p * n + p - 1) != fam.s.eval(n) + fam.s_j[0].eval(n)) {
                throw IdentityViolation("ss0", n);
            }
        }
    });
    // s(pn + i) = v * s_{(eps(i+1) - 1) mod tau}(n) for i < p - 1
    check.run("child", [&] {
        for (u64 i = 0; i + 1 < p; ++i) {
            const u64 target = shifted(eps * static_cast<long long>(i + 1) - 1);
            for (u64 n = 0; n < N; ++n) {
                const long long rhs = static_cast<long long>(fam.v) * fam.s_j[target].eval(n);
                if (fam.s.eval(p * n + i) != rhs) {
                    throw IdentityViolation("child", n, static_cast<std::int64_t>(i));
                }
            }
        }
    });
    // s_j(pn + i) = s_{(eps(i+j+1) - 1) mod tau}(n)
    check.run("shift", [&] {
        for (u64 j = 0; j < tau; ++j) {
            for (u64 i = 0; i < p; ++i) {
                const u64 target = shifted(eps * static_cast<long long>(i + j + 1) - 1);
                for (u64 n = 0; n < N; ++n) {
                    if (fam.s_j[j].eval(p * n + i) != fam.s_j[target].eval(n)) {
                        throw IdentityViolation("shift", n, static_cast<std::int64_t>(i),
                                                static_cast<std::int64_t>(j));
                    }
                }
            }
        }
    });
    // s_0(p^2 n + i) = s_{i mod tau}(n)
    check.run("s0p2", [&] {
        for (u64 i = 0; i < p * p; ++i) {
            for (u64 n = 0; n < N; ++n) {
                if (fam.s_j[0].eval(p * p * n + i) != fam.s_j[i % tau].eval(n)) {
                    throw IdentityViolation("s0p2", n, static_cast<std::int64_t>(i));
                }
            }
        }
    });
    if (p == 2) {
        // t(2n) = 0 and t(2n + 1) = d * s_0(n)
        check.run("t_rel", [&] {
            for (u64 n = 0; n < N; ++n) {
                if (fam.t.eval(2 * n) != 0) throw IdentityViolation("t_rel", n, 0);
                if (fam.t.eval(2 * n + 1) != fam.d * fam.s_j[0].eval(n)) {
                    throw IdentityViolation("t_rel", n, 1);
                }
            }
        });
    }
    return reports;
}

bool generator_span_placement(const LucasParams& params, std::uint64_t p,
                              std::size_t prefix_length) {
    const GeneratorFamily fam = generator_family(params, p);
    if (fam.delta_branch) return true;
    const auto eval = fam.s.eval;
    for (u64 j = 0; j < fam.tau; ++j) {
        const SequenceHandle left{
            [eval, p, j](u64 n) { return eval(p * p * p * n + p * j + p - 1); }, "s[p^3 n + pj + p-1]"};
        const SequenceHandle right{[eval, p, j](u64 n) { return eval(p * p * n + j); },
                                   "s[p^2 n + j]"};
        const auto as_mpz = [](const std::vector<long long>& v) {
            std::vector<mpz_class> out;
            out.reserve(v.size());
            for (const long long x : v) out.emplace_back(static_cast<long>(x));
            return out;
        };
        std::vector<std::vector<mpz_class>> basis;
        basis.push_back(as_mpz(prefix_vector(left, prefix_length)));
        basis.push_back(as_mpz(prefix_vector(right, prefix_length)));
        const auto coeffs = in_span(basis, as_mpz(prefix_vector(fam.s_j[j], prefix_length)));
        if (!coeffs) return false;
    }
    return true;
}

} // namespace lucasreg
