#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "lucasreg/analysis.hpp"

namespace lucasreg {

/// Parameter grid for the verification harness. Degenerate (a, b) pairs and
/// moduli sharing a factor with b are skipped and counted, never failed.
struct GridSpec {
    long long a_min = -5;
    long long a_max = 5;
    long long b_min = -5;
    long long b_max = 5;
    std::vector<std::uint64_t> primes{2, 3, 5, 7, 11, 13};
    std::vector<std::uint64_t> composites{4, 6, 8, 9, 10, 12};
    std::uint64_t n_max = 2000;
    std::uint64_t identity_upto = 10000;
    std::size_t rank_prefix = kDefaultPrefixLength;
    bool with_ranks = true;      // kernel exploration per (a, b, p); the slow part
    bool with_identities = true; // pointwise identity suites
};

struct CheckRow {
    long long a = 0;
    long long b = 0;
    std::uint64_t modulus = 0; // k or p; 0 for grid-independent checks
    std::uint64_t n = 0;       // witness index on failure
    std::string check;
    std::string expected;
    std::string actual;
    std::string status; // pass | fail | skip
};

struct GridOutcome {
    std::vector<CheckRow> rows;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t skipped = 0;
};

/// Runs every valuation- and analysis-level invariant over the grid. Rows
/// arrive in deterministic order; on_row (when set) streams them as they are
/// produced.
GridOutcome run_grid(const GridSpec& spec,
                     const std::function<void(const CheckRow&)>& on_row = {});

/// Header plus one line per row: a,b,modulus,n,check,expected,actual,status.
void write_csv(const GridOutcome& outcome, std::ostream& out);

/// Per-check pass/fail/skip counts, one line each, sorted by check name.
void write_summary(const GridOutcome& outcome, std::ostream& out);

} // namespace lucasreg
