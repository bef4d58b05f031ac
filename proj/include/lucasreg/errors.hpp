#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lucasreg {

// Precondition violations (bad arguments, unsupported domains).
struct DegenerateSequence : std::domain_error {
    using std::domain_error::domain_error;
};

struct ZeroArgument : std::domain_error {
    using std::domain_error::domain_error;
};

struct NotCoprime : std::domain_error {
    using std::domain_error::domain_error;
};

struct NotSquarefree : std::domain_error {
    using std::domain_error::domain_error;
};

struct OutOfRange : std::domain_error {
    using std::domain_error::domain_error;
};

struct OffsetOutOfRange : std::domain_error {
    using std::domain_error::domain_error;
};

struct DimensionMismatch : std::domain_error {
    using std::domain_error::domain_error;
};

// Computation failures.
struct EscalationExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DepthExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncationUnstable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonIntegralCoefficients : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A pointwise identity check failed; carries the minimal witness.
struct IdentityViolation : std::runtime_error {
    std::string identity;
    std::uint64_t n;
    std::int64_t i; // digit offset, -1 when not applicable
    std::int64_t j; // shift offset, -1 when not applicable

    IdentityViolation(std::string identity_, std::uint64_t n_, std::int64_t i_ = -1,
                      std::int64_t j_ = -1)
        : std::runtime_error("identity '" + identity_ + "' violated at n=" + std::to_string(n_) +
                             (i_ >= 0 ? ", i=" + std::to_string(i_) : "") +
                             (j_ >= 0 ? ", j=" + std::to_string(j_) : "")),
          identity(std::move(identity_)), n(n_), i(i_), j(j_) {}
};

} // namespace lucasreg
