"""Checks for the identities behind the proofs, with structured reports.

Exact checks compare elements of cyclotomic fields structurally; numeric
checks compare balls and pass when the upper bound of the residual is within
the declared tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Sequence

import gmpy2
from gmpy2 import mpfr

from .balls import BigComplex, BigReal, pi
from .characters import (
    dirichlet_l_value,
    enumerate_characters,
    gauss_sum,
    is_fundamental_discriminant,
    kronecker_character,
)
from .errors import DomainError
from .exact import (
    CyclotomicNumber,
    bernoulli_polynomial,
    coprime_residues,
    cyclotomic_root,
    exact_determinant,
)
from .numerics import (
    euler_factor,
    hurwitz_zeta,
    mzv,
    reflection_value,
    riemann_zeta,
)
from .periodic import PeriodicFunction, degenerate_function, unit_decomposition, unit_decomposition_value, l_value

DEFAULT_SLACK_BITS = 4


@dataclass
class IdentityReport:
    name: str
    params: dict[str, Any]
    mode: str  # "exact" or "numeric"
    passed: bool
    precision: int | None = None
    residual: BigReal | None = None
    tolerance_log2: float | None = None
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def residual_log2(self) -> float | None:
        if self.mode == "exact" or self.residual is None:
            return None
        return self.residual.upper_log2

    def to_json(self) -> dict:
        res_log2 = self.residual_log2
        out = {
            "name": self.name,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "mode": self.mode,
            "residual_log2": "exact-zero" if self.mode == "exact" and self.passed else _finite(res_log2),
            "verdict": self.verdict,
            "precision_bits": self.precision,
        }
        if self.tolerance_log2 is not None:
            out["tolerance_log2"] = self.tolerance_log2
        if self.details:
            out["details"] = {k: _jsonable(v) for k, v in self.details.items()}
        return out


def _finite(x):
    if x is None:
        return None
    if x == float("-inf"):
        return "-inf"
    return round(x, 3)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (BigReal, BigComplex)):
        return v.to_json()
    if isinstance(v, CyclotomicNumber):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


def _numeric(name, params, residual: BigReal, precision: int, slack_bits: int = DEFAULT_SLACK_BITS, **details) -> IdentityReport:
    tol_log2 = slack_bits - precision
    ok = residual.upper <= gmpy2.mul_2exp(mpfr(1), tol_log2)
    return IdentityReport(
        name, params, "numeric", bool(ok), precision, residual, float(tol_log2), dict(details)
    )


def _complex_residual(z: BigComplex) -> BigReal:
    """A ball [0, |z|_upper] standing for |z|."""
    up = z.abs_upper()
    with gmpy2.context(precision=64, round=gmpy2.RoundUp):
        half = up / 2
    return BigReal(half, half, z.prec)


# --------------------------------------------------------------------------
# numeric identities


def check_euler_factor(k: int, q: int, precision: int = 256) -> IdentityReport:
    """zeta(k) prod_{p|q}(1 - p^-k) = q^-k sum_{(a,q)=1} zeta(k, a/q)."""
    if k < 2 or q < 2:
        raise DomainError("euler-factor check needs k >= 2 and q >= 2")
    inner = precision + 8
    lhs = riemann_zeta(k, inner) * euler_factor(k, q)
    rhs = BigReal(0, 0, inner)
    for a in coprime_residues(q):
        rhs = rhs + hurwitz_zeta(k, Fraction(a, q), inner)
    rhs = rhs * Fraction(1, q**k)
    return _numeric("euler-factor", {"k": k, "q": q}, lhs - rhs, precision, lhs=lhs)


def check_reflection(k: int, q: int, a: int, precision: int = 256) -> IdentityReport:
    """zeta(k, a/q) + (-1)^k zeta(k, 1 - a/q) against the cotangent-derivative value."""
    inner = precision + 8
    rhs = reflection_value(k, a, q, inner)
    lhs = hurwitz_zeta(k, Fraction(a, q), inner) + hurwitz_zeta(k, Fraction(q - a, q), inner) * (-1) ** k
    return _numeric("reflection", {"k": k, "q": q, "a": a}, lhs - rhs, precision, value=rhs)


def hecke_exact_value(k: int, q: int, a: int) -> CyclotomicNumber:
    """q^(k-1) / (2 k!) sum_b (zeta_q^(ab) - zeta_q^(-ab)) B_k(b/q), exactly."""
    bk = bernoulli_polynomial(k)
    acc = CyclotomicNumber.zero(q)
    for b in range(1, q + 1):
        w = bk(Fraction(b, q))
        if w:
            acc = acc + (cyclotomic_root(q, a * b) - cyclotomic_root(q, -a * b)) * w
    return acc * Fraction(q ** (k - 1), 2 * math.factorial(k))


def check_hecke_formula(k: int, q: int, a: int, precision: int = 256) -> IdentityReport:
    """(zeta(k,a/q) - zeta(k,1-a/q)) / (2 pi i)^k against the exact Bernoulli sum."""
    if k < 3 or k % 2 == 0:
        raise DomainError("the Hecke formula check is for odd k >= 3")
    if q <= 2:
        raise DomainError("the Hecke formula check needs q > 2")
    if not (1 <= a and 2 * a < q) or math.gcd(a, q) != 1:
        raise DomainError(f"need 1 <= a < q/2 with gcd(a, q) = 1, got a={a}, q={q}")
    exact = hecke_exact_value(k, q, a)
    inner = precision + 8
    diff = hurwitz_zeta(k, Fraction(a, q), inner) - hurwitz_zeta(k, Fraction(q - a, q), inner)
    two_pi_k = (pi(inner + 4 * k) * 2) ** k
    # 1 / i^k for odd k is -i when k = 1 mod 4 and +i when k = 3 mod 4
    sign = 1 if k % 4 == 3 else -1
    lhs = BigComplex(BigReal(0, 0, inner), diff / two_pi_k * sign)
    residual = _complex_residual(lhs - exact.embed(inner))
    return _numeric(
        "hecke", {"k": k, "q": q, "a": a}, residual, precision,
        exact_value=str(exact), exact_conductor=exact.conductor, in_Q_zeta_q=exact.conductor == q,
        numeric_lhs=lhs,
    )


def _ball_determinant(rows: list[list[BigReal]]) -> BigReal:
    n = len(rows)
    m = [list(r) for r in rows]
    det = BigReal(1, 0, rows[0][0].prec)
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(m[r][col].mid))
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        p = m[col][col]
        det = det * p
        for r in range(col + 1, n):
            f = m[r][col] / p
            m[r] = [m[r][j] - f * m[col][j] if j > col else m[r][j] for j in range(n)]
    return det


def check_dedekind_determinant(q: int, k: int, precision: int = 320) -> IdentityReport:
    """|det(zeta(k, (bh mod q)/q))| = prod_chi |q^k L(k, chi)| and det != 0."""
    if q <= 2 or k < 2:
        raise DomainError("dedekind check needs q > 2 and k >= 2")
    units = [a for a in coprime_residues(q) if a < q]
    n = len(units)
    inner = precision + 16 + n * (k * q.bit_length() + 4)
    entries = {a: hurwitz_zeta(k, Fraction(a, q), inner) for a in units}
    matrix = [[entries[(b * h) % q] for h in units] for b in units]
    det = _ball_determinant(matrix)
    prod = BigReal(1, 0, inner)
    for chi in enumerate_characters(q):
        lv = dirichlet_l_value(chi, k, inner)
        prod = prod * (lv * q**k).abs()
    abs_det = det if det.mid > 0 else -det
    nonzero = not det.contains_zero()
    rel = (abs_det - prod) / prod if not prod.contains_zero() else None
    # conditioning slack: Hadamard bound over |det|
    hadamard = 1
    for row in matrix:
        hadamard *= math.sqrt(sum(float(x.mid) ** 2 for x in row))
    cond_bits = max(0, math.ceil(math.log2(hadamard / max(abs(float(det.mid)), 1e-300))))
    report = _numeric(
        "dedekind", {"q": q, "k": k},
        rel if rel is not None else BigReal(1, 0, precision),
        precision, slack_bits=8 + cond_bits,
        det=abs_det, character_product=prod,
    )
    report.passed = report.passed and nonzero
    report.details["det_nonzero"] = nonzero
    report.details["relative_deviation_log2"] = _finite(rel.upper_log2) if rel is not None else None
    return report


def check_unit_decomposition(f: PeriodicFunction, k: int, precision: int = 256) -> IdentityReport:
    """Unit-residue Hurwitz combination against the direct L-value, plus exact brackets."""
    inner = precision + 8
    lhs = l_value(f, k, inner, method="series")
    rhs = unit_decomposition_value(f, k, inner)
    brackets = {a: b for a, b, _ in unit_decomposition(f, k, 64)}
    return _numeric(
        "unit-decomposition", {"period": f.period, "k": k, "values": list(f.values)}, lhs - rhs, precision,
        l_value=lhs, brackets=brackets,
    )


def check_degenerate(q: int, k: int, precision: int = 256, c=1) -> IdentityReport:
    """L(k, f_h) = 0 for the degenerate function and all its twists."""
    from .periodic import twist

    f = degenerate_function(q, k, c)
    brackets = [b for _, b, _ in unit_decomposition(f, k, 64)]
    worst = None
    for h in coprime_residues(q):
        v = l_value(twist(f, h), k, precision + 8)
        if worst is None or v.upper > worst.upper:
            worst = v
    report = _numeric("degenerate", {"q": q, "k": k, "c": Fraction(c)}, worst, precision, brackets=brackets)
    report.passed = report.passed and all(b == 0 for b in brackets)
    return report


def check_stuffle(d: int | None = None, precision: int = 256, pair: tuple[int, int] | None = None) -> IdentityReport:
    """zeta(s1) zeta(s2) = zeta(s1,s2) + zeta(s2,s1) + zeta(s1+s2).

    With ``d`` the instance s1 = s2 = 2d+1 is used.
    """
    if pair is None:
        if d is None or d < 1:
            raise DomainError("stuffle check needs d >= 1 or an explicit pair")
        pair = (2 * d + 1, 2 * d + 1)
    s1, s2 = pair
    if s1 < 2 or s2 < 2:
        raise DomainError("stuffle check needs s1, s2 >= 2")
    inner = precision + 8
    lhs = riemann_zeta(s1, inner) * riemann_zeta(s2, inner)
    rhs = mzv([s1, s2], inner) + mzv([s2, s1], inner) + riemann_zeta(s1 + s2, inner)
    params = {"s1": s1, "s2": s2}
    if d is not None:
        params["d"] = d
    return _numeric("stuffle", params, lhs - rhs, precision, lhs=lhs)


# --------------------------------------------------------------------------
# exact identities


def _exact_report(name, params, checks: dict[str, bool], **details) -> IdentityReport:
    return IdentityReport(
        name, params, "exact", all(checks.values()), None, None, None,
        {"checks": checks, **details},
    )


def check_gauss_sum(disc: int) -> IdentityReport:
    """tau^2 = D, tau(chi, b) = chi(b) tau, and the odd-character folding."""
    if disc >= 0 or not is_fundamental_discriminant(disc):
        raise DomainError(f"gauss check needs a negative fundamental discriminant, got {disc}")
    chi = kronecker_character(disc)
    q = chi.modulus
    tau = gauss_sum(chi, 1)
    checks = {"tau_squared_equals_disc": tau * tau == disc}
    twisted_ok = True
    folded_ok = True
    for b in coprime_residues(q):
        cb = chi.value_int(b)
        if gauss_sum(chi, b) != tau * cb:
            twisted_ok = False
        folded = CyclotomicNumber.zero(q)
        for a in range(1, q // 2 + 1):
            ca = chi.value_int(a)
            if ca:
                folded = folded + (cyclotomic_root(q, a * b) - cyclotomic_root(q, -a * b)) * ca
        if folded != tau * cb:
            folded_ok = False
    checks["twisted_gauss_sums"] = twisted_ok
    checks["odd_folding"] = folded_ok
    return _exact_report("gauss", {"disc": disc}, checks, tau=str(tau), conductor=tau.conductor)


def check_dedekind_generic(orders: Sequence[int], values: Sequence) -> IdentityReport:
    """det(F(x y^-1)) = prod_chi sum_x chi(x) F(x) over G = prod Z/n_i.

    ``values`` lists F in mixed-radix order of the element tuples.
    """
    orders = tuple(int(o) for o in orders)
    elements = list(product(*(range(o) for o in orders)))
    if len(values) != len(elements):
        raise DomainError(f"need {len(elements)} values of F, got {len(values)}")
    F = {
        x: v if isinstance(v, CyclotomicNumber) else CyclotomicNumber.from_rational(Fraction(v))
        for x, v in zip(elements, values)
    }

    def sub(x, y):
        return tuple((a - b) % o for a, b, o in zip(x, y, orders))

    det = exact_determinant([[F[sub(x, y)] for y in elements] for x in elements])
    prod = CyclotomicNumber.one()
    for js in elements:  # characters are indexed by the dual group, isomorphic to G
        total = CyclotomicNumber.zero()
        for x in elements:
            turn = sum((Fraction(j * e, o) for j, e, o in zip(js, x, orders)), Fraction(0))
            e = math.lcm(*orders) if orders else 1
            total = total + cyclotomic_root(e, int(turn * e)) * F[x]
        prod = prod * total
    return _exact_report(
        "dedekind-generic", {"orders": list(orders), "values": [str(F[x]) for x in elements]},
        {"determinant_equals_character_product": det == prod},
        determinant=str(det),
    )


def check_bernoulli_l_link(disc: int, d: int, precision: int = 256) -> IdentityReport:
    """The Bernoulli-weighted Gauss-sum identity (exact) and its L-value link (numeric)."""
    if disc >= 0 or not is_fundamental_discriminant(disc):
        raise DomainError(f"bernoulli-l-link check needs a negative fundamental discriminant, got {disc}")
    if d < 1:
        raise DomainError("bernoulli-l-link check needs d >= 1")
    k = 2 * d + 1
    chi = kronecker_character(disc)
    q = chi.modulus
    bk = bernoulli_polynomial(k)
    tau = gauss_sum(chi, 1)
    lhs = CyclotomicNumber.zero(q)
    for a in range(1, q // 2 + 1):
        ca = chi.value_int(a)
        if not ca:
            continue
        inner_sum = CyclotomicNumber.zero(q)
        for b in range(1, q + 1):
            w = bk(Fraction(b, q))
            if w:
                inner_sum = inner_sum + (cyclotomic_root(q, a * b) - cyclotomic_root(q, -a * b)) * w
        lhs = lhs + inner_sum * ca
    bern_sum = sum((chi.value_int(b) * bk(Fraction(b, q)) for b in range(1, q + 1)), Fraction(0))
    rhs = tau * bern_sum
    exact_ok = lhs == rhs

    # L(k, chi) = (2 pi i)^k tau sum_b chi(b) B_k(b/q) / (2 k! q)
    inner = precision + 8
    lval = dirichlet_l_value(chi, k, inner)
    const = rhs * Fraction(1, 2 * math.factorial(k) * q)
    i_pow = cyclotomic_root(4, k)
    predicted = (const * i_pow).embed(inner + 4 * k + 8) * (pi(inner + 4 * k + 8) * 2) ** k
    residual = _complex_residual(lval - predicted)
    report = _numeric(
        "bernoulli-l-link", {"disc": disc, "d": d}, residual, precision,
        bernoulli_sum=bern_sum, exact_lhs=str(lhs), exact_rhs=str(rhs), l_value=lval,
    )
    report.mode = "exact+numeric"
    report.details["exact_identity"] = exact_ok
    report.passed = report.passed and exact_ok
    return report
