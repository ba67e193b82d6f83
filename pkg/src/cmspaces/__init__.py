"""Hurwitz zeta values at rationals, the spaces they span, and the identities behind them."""

from .balls import BigComplex, BigReal, pi
from .characters import (
    DirichletCharacter,
    KroneckerCharacter,
    dirichlet_l_value,
    enumerate_characters,
    gauss_sum,
    is_fundamental_discriminant,
    kronecker_character,
    kronecker_symbol,
)
from .errors import DomainError, NotRationalError, PrecisionError
from .exact import (
    CyclotomicNumber,
    bernoulli_number,
    bernoulli_polynomial,
    cyclotomic_polynomial,
    cyclotomic_root,
)
from .identities import (
    IdentityReport,
    check_dedekind_determinant,
    check_dedekind_generic,
    check_degenerate,
    check_unit_decomposition,
    check_euler_factor,
    check_gauss_sum,
    check_hecke_formula,
    check_bernoulli_l_link,
    check_reflection,
    check_stuffle,
)
from .numerics import (
    cot_derivative,
    cot_derivative_value,
    even_zeta_exact,
    hurwitz_zeta,
    mzv,
    polylog_at_root,
    reflection_value,
    riemann_zeta,
)
from .periodic import (
    FourierCoefficients,
    PeriodicFunction,
    degenerate_function,
    unit_decomposition,
    fourier_inverse,
    fourier_transform,
    l_value,
    twist,
)
from .relations import (
    RelationQuery,
    RelationReport,
    cm_dimension_evidence,
    find_relation,
    okada_set_evidence,
    strong_cm_dimension_evidence,
    zagier_dimension_evidence,
    zagier_span,
)

__all__ = [
    "BigComplex",
    "BigReal",
    "CyclotomicNumber",
    "DirichletCharacter",
    "DomainError",
    "FourierCoefficients",
    "IdentityReport",
    "KroneckerCharacter",
    "NotRationalError",
    "PeriodicFunction",
    "PrecisionError",
    "RelationQuery",
    "RelationReport",
    "bernoulli_number",
    "bernoulli_polynomial",
    "check_bernoulli_l_link",
    "check_dedekind_determinant",
    "check_dedekind_generic",
    "check_degenerate",
    "check_euler_factor",
    "check_gauss_sum",
    "check_hecke_formula",
    "check_reflection",
    "check_stuffle",
    "check_unit_decomposition",
    "cm_dimension_evidence",
    "cot_derivative",
    "cot_derivative_value",
    "cyclotomic_polynomial",
    "cyclotomic_root",
    "degenerate_function",
    "dirichlet_l_value",
    "enumerate_characters",
    "even_zeta_exact",
    "find_relation",
    "fourier_inverse",
    "fourier_transform",
    "gauss_sum",
    "hurwitz_zeta",
    "is_fundamental_discriminant",
    "kronecker_character",
    "kronecker_symbol",
    "l_value",
    "mzv",
    "okada_set_evidence",
    "pi",
    "polylog_at_root",
    "reflection_value",
    "riemann_zeta",
    "strong_cm_dimension_evidence",
    "twist",
    "unit_decomposition",
    "zagier_dimension_evidence",
    "zagier_span",
]
