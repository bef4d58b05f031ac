#include <doctest.h>

#include <numeric>

#include "lucasreg/analysis.hpp"
#include "lucasreg/valuation.hpp"

using namespace lucasreg;

namespace {

const LucasParams kFibonacci = make_params(1, 1);
const LucasParams kPell = make_params(2, 1);
const LucasParams kMersenne = make_params(3, -2);

bool all_pass(const std::vector<IdentityReport>& reports) {
    for (const IdentityReport& r : reports) {
        if (!r.pass) {
            CAPTURE(r.name);
            CAPTURE(r.witness ? r.witness->n : 0);
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("predicted_rank case dispatch") {
    {
        const RankReport r = predicted_rank(kFibonacci, 5);
        CHECK(r.predicted == 2);
        CHECK(r.case_label == RankCase::delta_large);
    }
    {
        const RankReport r = predicted_rank(kFibonacci, 2);
        CHECK(r.predicted == 5);
        CHECK(r.case_label == RankCase::nodelta_p2_irregular);
    }
    {
        const RankReport r = predicted_rank(kFibonacci, 7);
        CHECK(r.predicted == 9); // tau(7) = 8
        CHECK(r.case_label == RankCase::nodelta_generic);
    }
    {
        const RankReport r = predicted_rank(kPell, 2); // 2 | Delta = 8, nu_2(u_2) = 1
        CHECK(r.predicted == 2);
        CHECK(r.case_label == RankCase::delta_small_nu1);
    }
    {
        const RankReport r = predicted_rank(make_params(4, 1), 2); // nu_2(u_2) = 2
        CHECK(r.predicted == 3);
        CHECK(r.case_label == RankCase::delta_small_nuNe1);
    }
    {
        const RankReport r = predicted_rank(make_params(2, 5), 3); // nu_3(u_3) = 2
        CHECK(r.predicted == 3);
        CHECK(r.case_label == RankCase::delta_small_nuNe1);
    }
    {
        const RankReport r = predicted_rank(make_params(1, 3), 2); // nu_2(u_6) = nu_2(u_3) + 1
        CHECK(r.predicted == 4);
        CHECK(r.case_label == RankCase::nodelta_generic);
    }
    CHECK_THROWS_AS(predicted_rank(kMersenne, 2), NotCoprime);
}

TEST_CASE("empirical_rank agrees with the prediction") {
    {
        const RankReport r = empirical_rank(kFibonacci, 2);
        CHECK(r.empirical == 5);
        CHECK(r.agree);
    }
    {
        const RankReport r = empirical_rank(kFibonacci, 5, 512);
        CHECK(r.empirical == 2);
        CHECK(r.agree);
    }
    {
        const RankReport r = empirical_rank(kMersenne, 7, 512); // tau(7) = 3
        CHECK(r.predicted == 4);
        CHECK(r.empirical == 4);
        CHECK(r.agree);
    }
    {
        const RankReport r = empirical_rank(kPell, 2, 512);
        CHECK(r.empirical == 2);
        CHECK(r.agree);
    }
    {
        const RankReport r = empirical_rank(make_params(1, 3), 2, 512);
        CHECK(r.empirical == 4);
        CHECK(r.agree);
    }
}

TEST_CASE("generator_family fields") {
    {
        const GeneratorFamily fam = generator_family(kFibonacci, 2);
        CHECK_FALSE(fam.delta_branch);
        CHECK(fam.tau == 3);
        CHECK(fam.v == 1);       // nu_2(F_3)
        CHECK(fam.d == 1);       // nu_2(F_6) - nu_2(F_3) - 1 = 3 - 1 - 1
        CHECK(fam.epsilon == -1);
        CHECK(fam.t.eval(5) == 1); // 6 | 6
        CHECK(fam.t.eval(1) == 0);
        CHECK(fam.s_j.size() == 3);
    }
    {
        const GeneratorFamily fam = generator_family(kFibonacci, 3);
        CHECK(fam.tau == 4);
        CHECK(fam.epsilon == -1); // 3 == -1 (mod 4)
    }
    {
        const GeneratorFamily fam = generator_family(kFibonacci, 13);
        CHECK(fam.tau == 7);
        CHECK(fam.epsilon == -1); // 13 == -1 (mod 7)
    }
    {
        const GeneratorFamily fam = generator_family(kFibonacci, 11);
        CHECK(fam.tau == 10);
        CHECK(fam.epsilon == 1); // 11 == 1 (mod 10)
    }
    {
        const GeneratorFamily fam = generator_family(kPell, 2);
        CHECK(fam.delta_branch);
        CHECK(fam.rho_value == 0); // nu_2(u_2) - 1
        for (std::uint64_t n = 0; n < 100; ++n) CHECK(fam.s.eval(n) == 0);
    }
    // indicator definition: s_j(n) = 1 iff n + j + 1 == 0 (mod tau)
    const GeneratorFamily fam = generator_family(kFibonacci, 7);
    for (std::uint64_t j = 0; j < fam.tau; ++j) {
        for (std::uint64_t n = 0; n < 200; ++n) {
            CHECK(fam.s_j[j].eval(n) == ((n + j + 1) % fam.tau == 0 ? 1 : 0));
        }
    }
}

TEST_CASE("verify_proof_identities passes across branches") {
    CHECK(all_pass(verify_proof_identities(kFibonacci, 3, 10000)));
    CHECK(all_pass(verify_proof_identities(kFibonacci, 2, 10000)));
    CHECK(all_pass(verify_proof_identities(kFibonacci, 5, 10000)));
    CHECK(all_pass(verify_proof_identities(kPell, 2, 10000)));
    CHECK(all_pass(verify_proof_identities(make_params(4, 1), 2, 10000)));
    CHECK(all_pass(verify_proof_identities(make_params(2, 5), 3, 10000)));
    CHECK(all_pass(verify_proof_identities(kMersenne, 7, 10000)));

    // Pell at 2: rho = 0, so the valuation equals nu_2(n+1) exactly
    const PrimeContext ctx = make_prime_context(kPell, 2);
    for (std::uint64_t n = 1; n <= 10000; ++n) {
        REQUIRE(nu_p_closed(ctx, n) == nu_u64(2, n));
    }

    const auto reports = verify_proof_identities(kFibonacci, 2, 1000);
    bool saw_t_rel = false;
    for (const auto& r : reports) saw_t_rel |= (r.name == "t_rel");
    CHECK(saw_t_rel);
}

TEST_CASE("decompose_k verifies the two-indicator identity") {
    {
        const Decomposition dec = decompose_k(kFibonacci, 6, 10000);
        CHECK(dec.tau_rad == 12);
        CHECK(dec.c1 == 6);
        CHECK(dec.c2 == 12);
        // where tau does not divide n+1 both indicators vanish
        const CompositeContext ctx = make_composite_context(kFibonacci, 6);
        for (std::uint64_t n = 0; n < 2000; ++n) {
            if ((n + 1) % 12 != 0) {
                REQUIRE(dec.s.eval(n) + dec.t.eval(n) == 0);
                REQUIRE(nu_k_closed(ctx, n + 1) == 0);
            } else {
                REQUIRE(dec.s.eval(n) + dec.t.eval(n) == 1);
            }
        }
    }
    CHECK_NOTHROW(decompose_k(kMersenne, 21, 10000));
    CHECK_NOTHROW(decompose_k(kPell, 6, 10000));
    CHECK_THROWS_AS(decompose_k(kMersenne, 6, 100), NotCoprime);
}

TEST_CASE("generator basis handles span the predicted rank") {
    for (const auto& [a, b] : std::vector<std::pair<long long, long long>>{
             {1, 1}, {2, 1}, {3, -2}, {1, 3}, {4, 1}, {2, 5}, {-1, 1}, {-2, 3}}) {
        if (is_degenerate(a, b)) continue;
        const LucasParams params = make_params(a, b);
        for (const std::uint64_t p : {2, 3, 5}) {
            const std::uint64_t abs_b = b < 0 ? -b : b;
            if (std::gcd(p, abs_b) != 1) continue;
            const GeneratorFamily fam = generator_family(params, p);
            std::vector<std::vector<long long>> prefixes;
            for (const SequenceHandle& h : rank_basis_handles(fam)) {
                prefixes.push_back(prefix_vector(h, 512));
            }
            CAPTURE(a);
            CAPTURE(b);
            CAPTURE(p);
            CHECK(exact_rank(prefixes) == predicted_rank(params, p).predicted);
            CHECK(generator_span_placement(params, p));
            CHECK(fam.tau < p * p);
        }
    }
}

TEST_CASE("composite valuation handles") {
    const SequenceHandle zero = lucas_valuation_handle_k(kMersenne, 6);
    for (std::uint64_t n = 0; n < 100; ++n) CHECK(zero.eval(n) == 0);
    CHECK(explore_kernel(zero, 6, 128).rank == 0);
    CHECK_THROWS_AS(lucas_valuation_handle_k(make_params(2, 2), 2), NotCoprime);

    const SequenceHandle h = lucas_valuation_handle_k(kFibonacci, 6);
    CHECK(h.eval(11) == 2); // nu_6(F_12)
}
