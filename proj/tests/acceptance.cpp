// Acceptance suite: runs every exit criterion at full scale and prints one
// PASS/FAIL line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "lucasreg/analysis.hpp"
#include "lucasreg/json_io.hpp"
#include "lucasreg/valuation.hpp"

using namespace lucasreg;

namespace {

using u64 = std::uint64_t;

constexpr long long kCoeffBound = 5;
const std::vector<u64> kPrimes{2, 3, 5, 7, 11, 13};
const std::vector<u64> kComposites{4, 6, 8, 9, 10, 12};
constexpr u64 kNMax = 2000;
constexpr u64 kPointwise = 10000;

std::vector<LucasParams> grid_pairs() {
    std::vector<LucasParams> out;
    for (long long a = -kCoeffBound; a <= kCoeffBound; ++a) {
        for (long long b = -kCoeffBound; b <= kCoeffBound; ++b) {
            if (!is_degenerate(a, b)) out.push_back(make_params(a, b));
        }
    }
    return out;
}

bool coprime_to_b(u64 k, const LucasParams& params) {
    const u64 ab = params.b < 0 ? static_cast<u64>(-params.b) : static_cast<u64>(params.b);
    return std::gcd(k, ab) == 1;
}

struct Harness {
    int failures = 0;

    void criterion(int number, const std::string& label, const std::function<std::string()>& body) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            detail = body();
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s  %d. %s (%s, %.1fs)\n", ok ? "PASS" : "FAIL", number, label.c_str(),
                    detail.c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] void fail_at(const std::string& what) { throw CheckFailure(what); }

std::string where(const LucasParams& p, u64 modulus, u64 n) {
    return "a=" + std::to_string(p.a) + " b=" + std::to_string(p.b) +
           " modulus=" + std::to_string(modulus) + " n=" + std::to_string(n);
}

} // namespace

int main() {
    const std::vector<LucasParams> pairs = grid_pairs();
    Harness h;

    h.criterion(1, "closed formula equals oracle for prime bases", [&] {
        u64 checks = 0;
        for (const LucasParams& params : pairs) {
            for (const u64 p : kPrimes) {
                if (!coprime_to_b(p, params)) continue;
                const PrimeContext ctx = make_prime_context(params, p);
                for (u64 n = 1; n <= kNMax; ++n) {
                    if (nu_p_closed(ctx, n) != valuation_oracle(params, p, n)) {
                        fail_at("mismatch at " + where(params, p, n));
                    }
                    ++checks;
                }
            }
        }
        return std::to_string(checks) + " comparisons, 0 mismatches";
    });

    h.criterion(2, "closed formula equals oracle for composite bases", [&] {
        u64 checks = 0;
        for (const LucasParams& params : pairs) {
            for (const u64 k : kComposites) {
                if (!coprime_to_b(k, params)) continue;
                const CompositeContext ctx = make_composite_context(params, k);
                for (u64 n = 1; n <= kNMax; ++n) {
                    if (nu_k_closed(ctx, n) != valuation_oracle(params, k, n)) {
                        fail_at("mismatch at " + where(params, k, n));
                    }
                    ++checks;
                }
            }
        }
        return std::to_string(checks) + " comparisons, 0 mismatches";
    });

    h.criterion(3, "predicted rank equals kernel rank", [&] {
        const LucasParams fib = make_params(1, 1);
        const std::vector<std::pair<u64, std::size_t>> anchors{{2, 5}, {5, 2}, {3, 5}, {7, 9}};
        for (const auto& [p, expected] : anchors) {
            const RankReport r = empirical_rank(fib, p);
            if (r.predicted != expected || r.empirical != expected) {
                fail_at("fibonacci p=" + std::to_string(p) + " expected rank " +
                        std::to_string(expected) + ", predicted " + std::to_string(r.predicted) +
                        ", empirical " + std::to_string(r.empirical.value_or(0)));
            }
        }
        u64 runs = 0;
        for (const LucasParams& params : pairs) {
            for (const u64 p : kPrimes) {
                if (!coprime_to_b(p, params)) continue;
                const RankReport r = empirical_rank(params, p);
                if (!r.agree) {
                    fail_at("disagreement at " + where(params, p, 0) + ": predicted " +
                            std::to_string(r.predicted) + ", empirical " +
                            std::to_string(r.empirical.value_or(0)));
                }
                ++runs;
            }
        }
        return std::to_string(runs) + " rank explorations agree";
    });

    h.criterion(4, "plain valuation sequences have rank 2", [&] {
        for (u64 k = 2; k <= 10; ++k) {
            const RankCertificate cert = explore_kernel(plain_valuation_handle(k), k);
            if (cert.rank != 2) {
                fail_at("k=" + std::to_string(k) + " rank " + std::to_string(cert.rank));
            }
        }
        return std::string("k = 2..10");
    });

    h.criterion(5, "linear representations round trip", [&] {
        struct Case {
            SequenceHandle handle;
            u64 base;
        };
        std::vector<Case> cases;
        const LucasParams fib = make_params(1, 1);
        for (const u64 p : {2, 3, 5, 7}) cases.push_back({lucas_valuation_handle(fib, p), p});
        cases.push_back({lucas_valuation_handle(make_params(2, 1), 2), 2});
        cases.push_back({lucas_valuation_handle(make_params(1, 3), 2), 2});
        cases.push_back({lucas_valuation_handle(make_params(3, -2), 7), 7});
        for (const u64 k : {2, 3, 10}) cases.push_back({plain_valuation_handle(k), k});
        cases.push_back({constant_handle(1), 2});

        for (const Case& c : cases) {
            LinearRepresentation rep = build_linrep(c.handle, c.base);
            if (!zero_consistent(rep)) fail_at("zero consistency fails for " + c.handle.description);
            if (const auto bad = first_linrep_mismatch(rep, c.handle, kPointwise)) {
                fail_at("evaluation mismatch for " + c.handle.description + " at n=" +
                        std::to_string(*bad));
            }
            rep.verified_upto = kPointwise;
            // serialized form must evaluate identically
            const LinearRepresentation back = linrep_from_json(linrep_to_json(rep));
            if (first_linrep_mismatch(back, c.handle, 1000)) {
                fail_at("serialized form diverges for " + c.handle.description);
            }
        }
        return std::to_string(cases.size()) + " representations verified to n < " +
               std::to_string(kPointwise);
    });

    h.criterion(6, "decomposition and generator identities hold pointwise", [&] {
        u64 identity_runs = 0, decompose_runs = 0;
        for (const LucasParams& params : pairs) {
            for (const u64 p : kPrimes) {
                if (!coprime_to_b(p, params)) continue;
                for (const IdentityReport& rep : verify_proof_identities(params, p, kPointwise)) {
                    if (!rep.pass) {
                        fail_at("identity " + rep.name + " fails at " +
                                where(params, p, rep.witness ? rep.witness->n : 0));
                    }
                }
                ++identity_runs;
            }
            for (const u64 k : kComposites) {
                if (!coprime_to_b(k, params)) continue;
                decompose_k(params, k, kPointwise); // throws IdentityViolation on failure
                ++decompose_runs;
            }
        }
        return std::to_string(identity_runs) + " identity suites, " +
               std::to_string(decompose_runs) + " decompositions, N=" +
               std::to_string(kPointwise);
    });

    h.criterion(7, "min-formula and apparition laws hold exactly", [&] {
        // min formula over composite bases
        for (u64 k = 2; k <= 50; ++k) {
            const Factorization fact = factorize(k);
            for (long m = 1; m <= 100000; ++m) {
                if (nu_k_via_min(fact, mpz_class(m)) != nu_int(k, mpz_class(m)) ||
                    nu_k_via_min(fact, mpz_class(-m)) != nu_int(k, mpz_class(-m))) {
                    fail_at("min formula k=" + std::to_string(k) + " m=" + std::to_string(m));
                }
            }
        }
        // tau divisibility and the p | Delta specialization
        for (const LucasParams& params : pairs) {
            for (const u64 p : kPrimes) {
                if (!coprime_to_b(p, params)) continue;
                const u64 tau = tau_prime(params, p).tau;
                if (params.delta % static_cast<long long>(p) == 0) {
                    if (tau != p) fail_at("tau != p at " + where(params, p, 0));
                } else if (p != 2) {
                    const long long bound = static_cast<long long>(p) - legendre(params.delta, p);
                    if (bound % static_cast<long long>(tau) != 0) {
                        fail_at("tau divisibility at " + where(params, p, 0));
                    }
                }
            }
            // lcm law over coprime squarefree moduli
            for (const auto& [m, n] : std::vector<std::pair<u64, u64>>{
                     {2, 3}, {3, 5}, {2, 7}, {5, 6}, {3, 10}, {2, 15}}) {
                if (!coprime_to_b(m * n, params)) continue;
                const u64 tm = tau_squarefree(params, m).tau;
                const u64 tn = tau_squarefree(params, n).tau;
                const u64 combined = tau_squarefree(params, m * n).tau;
                if (combined != std::lcm(tm, tn)) {
                    fail_at("lcm law at " + where(params, m * n, 0));
                }
                if (lucas_term_mod(params, combined, mpz_class(static_cast<unsigned long>(m * n))) != 0) {
                    fail_at("m does not divide u_tau at " + where(params, m * n, 0));
                }
            }
        }
        return std::string("min formula k<=50 |m|<=1e5; tau laws over the grid");
    });

    if (h.failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", h.failures);
    }
    return h.failures;
}
