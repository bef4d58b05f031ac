// lucasreg CLI: valuation queries, rank verification, linear-representation
// export, and the verification grid.
//
// Exit codes: 0 success, 2 precondition violation, 3 check mismatch,
// 4 representation verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lucasreg/analysis.hpp"
#include "lucasreg/grid.hpp"
#include "lucasreg/json_io.hpp"
#include "lucasreg/valuation.hpp"

namespace {

using namespace lucasreg;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitVerification = 4;
constexpr std::uint64_t kVerifyUpto = 10000;

// CLI11 keeps '=' inside attached short-option values (-b=-2 parses as
// "=-2"), so split those into separate flag/value arguments up front.
// CLI11's vector parse() wants the arguments reversed.
std::vector<std::string> preprocess_args(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 1; --i) {
        const std::string arg = argv[i];
        if (arg.size() > 3 && arg[0] == '-' && arg[1] != '-' && arg[2] == '=') {
            args.push_back(arg.substr(3));
            args.push_back(arg.substr(0, 2));
        } else {
            args.push_back(arg);
        }
    }
    return args;
}

int cmd_val(long long a, long long b, std::uint64_t k, std::uint64_t n, bool with_oracle) {
    const LucasParams params = make_params(a, b);
    if (n < 1) throw OutOfRange("val requires n >= 1");
    const TrivialCase tc = trivial_case(params, k);
    if (tc == TrivialCase::unsupported) {
        throw NotCoprime("gcd(k, b) > 1 with every common prime dividing a; no closed formula");
    }

    Valuation closed = 0;
    if (tc == TrivialCase::identically_zero) {
        std::printf("0\n");
        std::printf("note: identically zero (k shares a prime with b that does not divide a)\n");
    } else {
        closed = nu_k_closed(params, k, n);
        std::printf("%llu\n", static_cast<unsigned long long>(closed));
    }
    if (with_oracle) {
        const Valuation oracle = valuation_oracle(params, k, n);
        std::printf("oracle %llu\n", static_cast<unsigned long long>(oracle));
        if (oracle != closed) {
            std::printf("MISMATCH\n");
            return kExitMismatch;
        }
        std::printf("MATCH\n");
    }
    return kExitOk;
}

int cmd_rank(long long a, long long b, std::uint64_t modulus, const std::string& mode,
             bool with_identities) {
    const LucasParams params = make_params(a, b);

    if (!is_prime_u64(modulus)) {
        // Composite bases have no predicted rank; empirical exploration only.
        if (mode != "empirical") {
            throw OutOfRange("composite k supports --empirical only (no rank prediction)");
        }
        const SequenceHandle handle = lucas_valuation_handle_k(params, modulus);
        const RankCertificate cert = explore_kernel(handle, modulus);
        json j{{"k", modulus}, {"empirical", cert.rank}};
        std::printf("%s\n", j.dump(2).c_str());
        return kExitOk;
    }

    RankReport report;
    if (mode == "predicted") {
        report = predicted_rank(params, modulus);
    } else {
        report = empirical_rank(params, modulus);
    }
    std::vector<IdentityReport> identities;
    if (with_identities) identities = verify_proof_identities(params, modulus, kVerifyUpto);
    const json j = rank_report_to_json(report, with_identities ? &identities : nullptr);
    std::printf("%s\n", j.dump(2).c_str());
    if (mode == "both" && !report.agree) return kExitMismatch;
    for (const IdentityReport& r : identities) {
        if (!r.pass) return kExitMismatch;
    }
    return kExitOk;
}

int cmd_linrep(long long a, long long b, std::uint64_t p, std::uint64_t k, bool plain, bool constant,
               const std::string& out_path) {
    SequenceHandle handle;
    std::uint64_t base = 0;
    if (plain) {
        handle = plain_valuation_handle(k);
        base = k;
    } else if (constant) {
        handle = constant_handle(1);
        base = k;
    } else {
        const LucasParams params = make_params(a, b);
        if (!is_prime_u64(p)) throw OutOfRange("linrep requires a prime p (or --plain-valuation/--constant with -k)");
        handle = lucas_valuation_handle(params, p);
        base = p;
    }

    LinearRepresentation rep;
    try {
        rep = build_linrep(handle, base);
        if (!zero_consistent(rep)) throw TruncationUnstable("zero consistency failed");
        if (const auto bad = first_linrep_mismatch(rep, handle, kVerifyUpto)) {
            throw TruncationUnstable("evaluation mismatch at n=" + std::to_string(*bad));
        }
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "verification failed: %s\n", e.what());
        return kExitVerification;
    }
    rep.verified_upto = kVerifyUpto;

    std::ofstream out(out_path);
    if (!out) {
        std::fprintf(stderr, "cannot open %s\n", out_path.c_str());
        return kExitUsage;
    }
    out << linrep_to_json(rep).dump(2) << '\n';
    std::printf("wrote %s: base %llu, rank %zu, verified to n < %llu\n", out_path.c_str(),
                static_cast<unsigned long long>(base), rep.dim,
                static_cast<unsigned long long>(kVerifyUpto));
    return kExitOk;
}

int cmd_verify(const GridSpec& spec, const std::string& csv_path, bool quiet) {
    const GridOutcome outcome = run_grid(spec, quiet ? std::function<void(const CheckRow&)>{}
                                                     : [](const CheckRow& row) {
                                                           if (row.status == "fail") {
                                                               std::fprintf(stderr,
                                                                            "FAIL %s a=%lld b=%lld "
                                                                            "modulus=%llu n=%llu "
                                                                            "expected=%s actual=%s\n",
                                                                            row.check.c_str(), row.a,
                                                                            row.b,
                                                                            static_cast<unsigned long long>(row.modulus),
                                                                            static_cast<unsigned long long>(row.n),
                                                                            row.expected.c_str(),
                                                                            row.actual.c_str());
                                                           }
                                                       });
    write_summary(outcome, std::cout);
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) {
            std::fprintf(stderr, "cannot open %s\n", csv_path.c_str());
            return kExitUsage;
        }
        write_csv(outcome, csv);
        std::printf("csv written to %s (%zu rows)\n", csv_path.c_str(), outcome.rows.size());
    }
    return outcome.failed == 0 ? kExitOk : kExitMismatch;
}

int cmd_seed_corpus() {
    struct Entry {
        const char* name;
        long long a, b;
    };
    for (const Entry& e : {Entry{"fibonacci", 1, 1}, Entry{"pell", 2, 1}}) {
        const LucasParams params = make_params(e.a, e.b);
        std::printf("%s (a=%lld, b=%lld, delta=%lld)\n", e.name, e.a, e.b, params.delta);
        std::printf("n,u_n,nu2,nu3,nu5,nu6\n");
        for (std::uint64_t n = 1; n <= 24; ++n) {
            const mpz_class term = lucas_term(params, n);
            std::printf("%llu,%s,%llu,%llu,%llu,%llu\n", static_cast<unsigned long long>(n),
                        term.get_str().c_str(),
                        static_cast<unsigned long long>(nu_int(2, term)),
                        static_cast<unsigned long long>(nu_int(3, term)),
                        static_cast<unsigned long long>(nu_int(5, term)),
                        static_cast<unsigned long long>(nu_int(6, term)));
        }
        std::printf("\n");
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-adic valuations of Lucas sequences and k-regularity certificates"};
    app.require_subcommand(1);

    long long a = 0, b = 0;
    std::uint64_t k = 0, p = 0, n = 0;

    auto* val = app.add_subcommand("val", "closed-formula valuation nu_k(u_n)");
    val->add_option("-a", a, "recurrence coefficient a")->required();
    val->add_option("-b", b, "recurrence coefficient b")->required();
    val->add_option("-k", k, "valuation base k >= 2")->required();
    val->add_option("-n", n, "index n >= 1")->required();
    bool with_oracle = false;
    val->add_flag("--oracle", with_oracle, "also run the brute-force oracle and compare");

    auto* rank = app.add_subcommand("rank", "predicted and empirical kernel rank");
    rank->add_option("-a", a, "recurrence coefficient a")->required();
    rank->add_option("-b", b, "recurrence coefficient b")->required();
    auto* rank_p = rank->add_option("-p", p, "prime base");
    auto* rank_k = rank->add_option("-k", k, "composite base (empirical only)");
    bool mode_predicted = false, mode_empirical = false, mode_both = false;
    rank->add_flag("--predicted", mode_predicted, "prediction only");
    rank->add_flag("--empirical", mode_empirical, "kernel exploration only");
    rank->add_flag("--both", mode_both, "predict, explore, and compare (default)");
    bool with_identities = false;
    rank->add_flag("--identities", with_identities, "include the pointwise identity suite");

    auto* linrep = app.add_subcommand("linrep", "export a linear representation as JSON");
    linrep->add_option("-a", a, "recurrence coefficient a");
    linrep->add_option("-b", b, "recurrence coefficient b");
    linrep->add_option("-p", p, "prime base");
    linrep->add_option("-k", k, "base for the synthetic modes");
    bool plain = false, constant = false;
    linrep->add_flag("--plain-valuation", plain, "represent nu_k(n+1) instead of a Lucas sequence");
    linrep->add_flag("--constant", constant, "represent the constant sequence 1");
    std::string out_path;
    linrep->add_option("-o,--out", out_path, "output path")->required();

    auto* verify = app.add_subcommand("verify", "run the verification grid");
    GridSpec spec;
    verify->add_option("--a-min", spec.a_min, "grid lower bound for a");
    verify->add_option("--a-max", spec.a_max, "grid upper bound for a");
    verify->add_option("--b-min", spec.b_min, "grid lower bound for b");
    verify->add_option("--b-max", spec.b_max, "grid upper bound for b");
    verify->add_option("--primes", spec.primes, "prime bases")->delimiter(',');
    verify->add_option("--composites", spec.composites, "composite bases")->delimiter(',');
    verify->add_option("--n-max", spec.n_max, "oracle comparison range");
    verify->add_option("--pointwise", spec.identity_upto, "identity check range");
    verify->add_option("--prefix-length", spec.rank_prefix, "kernel prefix length");
    bool skip_ranks = false, skip_identities = false, quiet = false;
    verify->add_flag("--skip-ranks", skip_ranks, "skip kernel explorations");
    verify->add_flag("--skip-identities", skip_identities, "skip pointwise identity suites");
    verify->add_flag("--quiet", quiet, "do not stream failures to stderr");
    std::string csv_path;
    verify->add_option("--csv", csv_path, "write one row per check to this file");

    auto* seed = app.add_subcommand("seed-corpus", "print the reference tables used in the docs");

    try {
        app.parse(preprocess_args(argc, argv));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (val->parsed()) return cmd_val(a, b, k, n, with_oracle);
        if (rank->parsed()) {
            const int modes = int(mode_predicted) + int(mode_empirical) + int(mode_both);
            if (modes > 1) throw OutOfRange("choose one of --predicted/--empirical/--both");
            std::string mode = mode_predicted ? "predicted" : mode_empirical ? "empirical" : "both";
            if (rank_p->count() == rank_k->count()) {
                throw OutOfRange("exactly one of -p or -k is required");
            }
            const std::uint64_t modulus = rank_p->count() ? p : k;
            if (rank_p->count() && !is_prime_u64(p)) throw OutOfRange("-p must be prime");
            return cmd_rank(a, b, modulus, mode, with_identities);
        }
        if (linrep->parsed()) {
            if (plain && constant) throw OutOfRange("choose one synthetic mode");
            if ((plain || constant) && k < 2) throw OutOfRange("synthetic modes require -k");
            return cmd_linrep(a, b, p, k, plain, constant, out_path);
        }
        if (verify->parsed()) {
            spec.with_ranks = !skip_ranks;
            spec.with_identities = !skip_identities;
            return cmd_verify(spec, csv_path, quiet);
        }
        if (seed->parsed()) return cmd_seed_corpus();
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitMismatch;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return kExitUsage;
}
