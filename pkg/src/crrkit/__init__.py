"""Residue number system toolkit.

Pairwise-coprime moduli bases, residue vectors with exact ring operations,
four reconstruction routes back to integers, and exact floor division of
bounded operands through scaled reciprocal series.
"""

from .division import (
    DivideResult,
    DivisionPlan,
    GroupBoundReport,
    Scaler,
    UnderApprox,
    adaptive_group_size,
    build_groups,
    build_plan,
    build_scaler,
    divide,
    group_bound_report,
    group_size,
    reciprocal_series,
    series_numerators,
    strict_moduli_count,
)
from .errors import (
    AttemptsExhaustedError,
    BaseMismatchError,
    CrrError,
    GroupBoundError,
    ParseError,
    PrimeLimitError,
)
from .moduli import (
    PRIME_INDEX_CEILING,
    ModuliBase,
    format_base_line,
    nth_prime,
    pairwise_coprime,
    parse_base_line,
    prime_base,
)
from .reconstruct import (
    BezoutChain,
    CrtCoefficients,
    EgcdCounter,
    GarnerConverter,
    LinearFormSample,
    classical_coefficients,
    coprime_form_attempts,
    default_n2_bound,
    extended_gcd,
    garner_converter,
    probabilistic_reconstruct,
    reconstruct,
    sequential_coefficients,
)
from .vectors import CrrVector, encode, parse, serialize

__version__ = "0.1.0"

__all__ = [
    "AttemptsExhaustedError",
    "BaseMismatchError",
    "BezoutChain",
    "CrrError",
    "CrrVector",
    "CrtCoefficients",
    "DivideResult",
    "DivisionPlan",
    "EgcdCounter",
    "GarnerConverter",
    "GroupBoundError",
    "GroupBoundReport",
    "LinearFormSample",
    "ModuliBase",
    "PRIME_INDEX_CEILING",
    "ParseError",
    "PrimeLimitError",
    "Scaler",
    "UnderApprox",
    "adaptive_group_size",
    "build_groups",
    "build_plan",
    "build_scaler",
    "classical_coefficients",
    "coprime_form_attempts",
    "default_n2_bound",
    "divide",
    "encode",
    "extended_gcd",
    "format_base_line",
    "garner_converter",
    "group_bound_report",
    "group_size",
    "nth_prime",
    "pairwise_coprime",
    "parse",
    "parse_base_line",
    "prime_base",
    "probabilistic_reconstruct",
    "reciprocal_series",
    "reconstruct",
    "sequential_coefficients",
    "serialize",
    "series_numerators",
    "strict_moduli_count",
]
