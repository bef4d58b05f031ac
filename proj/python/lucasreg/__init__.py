"""k-adic valuations of nondegenerate Lucas sequences and k-regularity
certificates, backed by the C++ core."""

from lucasreg._core import (
    LinearRepresentation,
    LucasParams,
    __version__,
    c_k,
    decompose_check,
    empirical_rank,
    factorize,
    is_degenerate,
    legendre,
    linrep_constant,
    linrep_lucas,
    linrep_plain,
    lucas_term,
    lucas_term_mod,
    nu_int,
    nu_k_closed,
    nu_k_via_min,
    nu_p_closed,
    predicted_rank,
    rho,
    tau_prime,
    tau_squarefree,
    trivial_case,
    valuation_oracle,
    verify_identities,
)

__all__ = [
    "LinearRepresentation",
    "LucasParams",
    "__version__",
    "c_k",
    "decompose_check",
    "empirical_rank",
    "factorize",
    "is_degenerate",
    "legendre",
    "linrep_constant",
    "linrep_lucas",
    "linrep_plain",
    "lucas_term",
    "lucas_term_mod",
    "nu_int",
    "nu_k_closed",
    "nu_k_via_min",
    "nu_p_closed",
    "predicted_rank",
    "rho",
    "tau_prime",
    "tau_squarefree",
    "trivial_case",
    "valuation_oracle",
    "verify_identities",
]
