#include "lucasreg/grid.hpp"

#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace lucasreg {

namespace {

using u64 = std::uint64_t;

struct Collector {
    GridOutcome& outcome;
    const std::function<void(const CheckRow&)>& on_row;

    void emit(CheckRow row) {
        if (row.status == "pass") ++outcome.passed;
        else if (row.status == "fail") ++outcome.failed;
        else ++outcome.skipped;
        if (on_row) on_row(row);
        outcome.rows.push_back(std::move(row));
    }

    void pass(long long a, long long b, u64 modulus, const std::string& check) {
        emit(CheckRow{a, b, modulus, 0, check, "", "", "pass"});
    }

    void fail(long long a, long long b, u64 modulus, const std::string& check, u64 witness,
              const std::string& expected, const std::string& actual) {
        emit(CheckRow{a, b, modulus, witness, check, expected, actual, "fail"});
    }

    void skip(long long a, long long b, u64 modulus, const std::string& check) {
        emit(CheckRow{a, b, modulus, 0, check, "", "", "skip"});
    }
};

u64 gcd_ll(u64 x, long long b) {
    const u64 ab = b < 0 ? static_cast<u64>(-(b + 1)) + 1 : static_cast<u64>(b);
    return std::gcd(x, ab);
}

// Scans u_n mod m for the first zero, confirming minimality of the expected
// rank of apparition; independent of the lcm route inside tau_squarefree.
bool tau_by_scan_equals(const LucasParams& params, u64 m, u64 expected) {
    const mpz_class mod(static_cast<unsigned long>(m));
    for (u64 n = 1; n < expected; ++n) {
        if (lucas_term_mod(params, n, mod) == 0) return false;
    }
    return lucas_term_mod(params, expected, mod) == 0;
}

void check_min_formula(Collector& out) {
    bool ok = true;
    u64 witness_k = 0;
    long long witness_m = 0;
    Valuation expected = 0, actual = 0;
    for (u64 k = 2; k <= 50 && ok; ++k) {
        const Factorization fact = factorize(k);
        for (long m = 1; m <= 100000 && ok; ++m) {
            for (const long sm : {m, -m}) {
                const mpz_class z(sm);
                const Valuation lhs = nu_k_via_min(fact, z);
                const Valuation rhs = nu_int(k, z);
                if (lhs != rhs) {
                    ok = false;
                    witness_k = k;
                    witness_m = sm;
                    expected = rhs;
                    actual = lhs;
                    break;
                }
            }
        }
    }
    if (ok) {
        out.pass(0, 0, 0, "min_formula");
    } else {
        out.fail(0, 0, witness_k, "min_formula", static_cast<u64>(std::abs(witness_m)),
                 std::to_string(expected), std::to_string(actual));
    }
}

void check_prime(Collector& out, const GridSpec& spec, const LucasParams& params, u64 p) {
    const long long a = params.a, b = params.b;
    const PrimeContext ctx = make_prime_context(params, p);

    // Closed formula against the brute-force oracle.
    {
        bool ok = true;
        for (u64 n = 1; n <= spec.n_max; ++n) {
            const Valuation closed = nu_p_closed(ctx, n);
            const Valuation oracle = valuation_oracle(params, p, n);
            if (closed != oracle) {
                out.fail(a, b, p, "oracle_p", n, std::to_string(oracle), std::to_string(closed));
                ok = false;
                break;
            }
        }
        if (ok) out.pass(a, b, p, "oracle_p");
    }

    // nu_k with a prime k must agree with the prime-specific formula.
    {
        bool ok = true;
        const CompositeContext kctx = make_composite_context(params, p);
        for (u64 n = 1; n <= spec.n_max; ++n) {
            if (nu_k_closed(kctx, n) != nu_p_closed(ctx, n)) {
                out.fail(a, b, p, "prime_reduction", n, std::to_string(nu_p_closed(ctx, n)),
                         std::to_string(nu_k_closed(kctx, n)));
                ok = false;
                break;
            }
        }
        if (ok) out.pass(a, b, p, "prime_reduction");
    }

    const bool p_div_delta = params.delta % static_cast<long long>(p) == 0;
    if (p != 2 && !p_div_delta) {
        const long long bound = static_cast<long long>(p) - legendre(params.delta, p);
        if (bound % static_cast<long long>(ctx.tau) == 0) {
            out.pass(a, b, p, "tau_div");
        } else {
            out.fail(a, b, p, "tau_div", ctx.tau, "tau | p - (Delta/p)", std::to_string(ctx.tau));
        }
    }
    if (p_div_delta) {
        if (ctx.tau == p) {
            out.pass(a, b, p, "tau_delta");
        } else {
            out.fail(a, b, p, "tau_delta", ctx.tau, std::to_string(p), std::to_string(ctx.tau));
        }
    }
    if (ctx.tau < p * p) {
        out.pass(a, b, p, "tau_bound");
    } else {
        out.fail(a, b, p, "tau_bound", ctx.tau, "tau < p^2", std::to_string(ctx.tau));
    }

    if (spec.with_ranks) {
        const RankReport report = empirical_rank(params, p, spec.rank_prefix);
        if (report.agree) {
            out.pass(a, b, p, "rank_agreement");
        } else {
            out.fail(a, b, p, "rank_agreement", 0, std::to_string(report.predicted),
                     std::to_string(report.empirical.value_or(0)));
        }

        const GeneratorFamily fam = generator_family(params, p);
        std::vector<std::vector<long long>> prefixes;
        for (const SequenceHandle& h : rank_basis_handles(fam)) {
            prefixes.push_back(prefix_vector(h, spec.rank_prefix));
        }
        const std::size_t basis_rank = exact_rank(prefixes);
        const std::size_t predicted = predicted_rank(params, p).predicted;
        if (basis_rank == predicted) {
            out.pass(a, b, p, "basis_rank");
        } else {
            out.fail(a, b, p, "basis_rank", 0, std::to_string(predicted),
                     std::to_string(basis_rank));
        }

        if (generator_span_placement(params, p)) {
            out.pass(a, b, p, "span_placement");
        } else {
            out.fail(a, b, p, "span_placement", 0, "in span", "outside span");
        }
    }

    if (spec.with_identities) {
        for (const IdentityReport& rep : verify_proof_identities(params, p, spec.identity_upto)) {
            if (rep.pass) {
                out.pass(a, b, p, "identity:" + rep.name);
            } else {
                out.fail(a, b, p, "identity:" + rep.name, rep.witness ? rep.witness->n : 0,
                         "identity holds", "violated");
            }
        }
    }
}

void check_composite(Collector& out, const GridSpec& spec, const LucasParams& params, u64 k) {
    const long long a = params.a, b = params.b;
    const CompositeContext ctx = make_composite_context(params, k);
    bool ok = true;
    for (u64 n = 1; n <= spec.n_max; ++n) {
        const Valuation closed = nu_k_closed(ctx, n);
        const Valuation oracle = valuation_oracle(params, k, n);
        if (closed != oracle) {
            out.fail(a, b, k, "oracle_k", n, std::to_string(oracle), std::to_string(closed));
            ok = false;
            break;
        }
    }
    if (ok) out.pass(a, b, k, "oracle_k");

    if (spec.with_identities) {
        try {
            decompose_k(params, k, spec.identity_upto);
            out.pass(a, b, k, "decompose");
        } catch (const IdentityViolation& v) {
            out.fail(a, b, k, "decompose", v.n, "identity holds", "violated");
        }
    }
}

void check_tau_lcm(Collector& out, const LucasParams& params) {
    static const std::vector<std::pair<u64, u64>> kPairs{
        {2, 3}, {3, 5}, {2, 7}, {5, 6}, {3, 10}, {2, 15}, {6, 35}};
    for (const auto& [m, n] : kPairs) {
        if (std::gcd(m, n) != 1) continue;
        if (gcd_ll(m * n, params.b) != 1) {
            out.skip(params.a, params.b, m * n, "tau_lcm");
            continue;
        }
        const u64 tm = tau_squarefree(params, m).tau;
        const u64 tn = tau_squarefree(params, n).tau;
        const u64 expected = std::lcm(tm, tn);
        const u64 combined = tau_squarefree(params, m * n).tau;
        if (combined == expected && tau_by_scan_equals(params, m * n, combined)) {
            out.pass(params.a, params.b, m * n, "tau_lcm");
        } else {
            out.fail(params.a, params.b, m * n, "tau_lcm", combined, std::to_string(expected),
                     std::to_string(combined));
        }
    }
}

} // namespace

GridOutcome run_grid(const GridSpec& spec, const std::function<void(const CheckRow&)>& on_row) {
    GridOutcome outcome;
    Collector out{outcome, on_row};

    check_min_formula(out);

    for (long long a = spec.a_min; a <= spec.a_max; ++a) {
        for (long long b = spec.b_min; b <= spec.b_max; ++b) {
            if (is_degenerate(a, b)) {
                out.skip(a, b, 0, "params");
                continue;
            }
            const LucasParams params = make_params(a, b);
            for (const u64 p : spec.primes) {
                if (gcd_ll(p, b) != 1) {
                    out.skip(a, b, p, "coprime");
                    continue;
                }
                check_prime(out, spec, params, p);
            }
            for (const u64 k : spec.composites) {
                if (gcd_ll(k, b) != 1) {
                    out.skip(a, b, k, "coprime");
                    continue;
                }
                check_composite(out, spec, params, k);
            }
            check_tau_lcm(out, params);
        }
    }
    return outcome;
}

void write_csv(const GridOutcome& outcome, std::ostream& out) {
    out << "a,b,modulus,n,check,expected,actual,status\n";
    for (const CheckRow& row : outcome.rows) {
        out << row.a << ',' << row.b << ',' << row.modulus << ',' << row.n << ',' << row.check
            << ',' << row.expected << ',' << row.actual << ',' << row.status << '\n';
    }
}

void write_summary(const GridOutcome& outcome, std::ostream& out) {
    struct Counts {
        std::size_t pass = 0, fail = 0, skip = 0;
    };
    std::map<std::string, Counts> by_check;
    for (const CheckRow& row : outcome.rows) {
        Counts& c = by_check[row.check];
        if (row.status == "pass") ++c.pass;
        else if (row.status == "fail") ++c.fail;
        else ++c.skip;
    }
    for (const auto& [check, c] : by_check) {
        out << check << ": " << c.pass << " pass, " << c.fail << " fail, " << c.skip << " skip\n";
    }
    out << "total: " << outcome.passed << " pass, " << outcome.failed << " fail, "
        << outcome.skipped << " skip\n";
}

} // namespace lucasreg
