"""Integer relation search by lattice reduction, and dimension evidence.

A found relation is always re-checked at twice the precision.  The absence
of a relation is only ever reported as evidence: "no relation with height
<= H detectable at P bits".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import gmpy2
from gmpy2 import mpfr

from .balls import BigReal, _near
from .errors import DomainError, PrecisionError
from .exact import coprime_residues, totient
from .lattice import lll_reduce_with_norms
from .numerics import _bits, cot_derivative, cot_pi, hurwitz_zeta, mzv, pi_power

DEFAULT_HEIGHT = 10**6
DEFAULT_PRECISION = 300
SCALE_GUARD = 16
MAX_ZAGIER_WEIGHT = 8

Evaluator = Callable[[int], Sequence[BigReal]]


@dataclass
class RelationQuery:
    """Labelled reals given by an evaluator ``precision -> values``.

    The evaluator is needed because candidate relations are re-verified
    at doubled precision.
    """

    labels: list[str]
    evaluate: Evaluator
    height: int = DEFAULT_HEIGHT
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.height < 1:
            raise DomainError("height bound must be >= 1")
        if len(self.labels) < 2:
            raise DomainError("relation search needs at least 2 values")

    @classmethod
    def from_functions(cls, labels: Sequence[str], fns: Sequence[Callable[[int], BigReal]],
                       height: int = DEFAULT_HEIGHT, precision: int = DEFAULT_PRECISION) -> "RelationQuery":
        fns = list(fns)
        return cls(list(labels), lambda p: [f(p) for f in fns], height, precision)


@dataclass
class RelationReport:
    labels: list[str]
    found: bool
    height: int
    precision: int
    confirmation_precision: int | None
    coefficients: list[int] | None = None
    relations: list[list[int]] = field(default_factory=list)
    residual: BigReal | None = None
    lattice_excludes_height: bool = False

    @property
    def outcome(self) -> str:
        return "relation_found" if self.found else "no_relation_certificate"

    @property
    def statement(self) -> str:
        if self.found:
            return (
                f"integer relation with height <= {self.height} found at {self.precision} bits "
                f"and re-verified at {self.confirmation_precision} bits"
            )
        return (
            f"no relation with height <= {self.height} detectable at {self.precision} bits "
            "(heuristic evidence, not a proof of independence)"
        )

    def to_json(self) -> dict:
        out: dict[str, Any] = {"labels": list(self.labels), "outcome": self.outcome}
        if self.found:
            out["coefficients"] = list(self.coefficients)
            if len(self.relations) > 1:
                out["relations"] = [list(r) for r in self.relations]
        out["residual_log2"] = _log2_or_none(self.residual)
        out["height_bound"] = self.height
        out["precision_bits"] = self.precision
        out["confirmation_precision_bits"] = self.confirmation_precision
        out["statement"] = self.statement
        if not self.found:
            out["lattice_excludes_height"] = self.lattice_excludes_height
        return out


def _log2_or_none(ball: BigReal | None):
    if ball is None:
        return None
    v = ball.upper_log2
    return "-inf" if v == float("-inf") else round(v, 3)


def required_precision(n: int, height: int) -> int:
    """Bits needed to separate height-H relations among n reals from chance.

    A random real combination of n values with coefficients up to H is about
    H^-(n-1) in size, and LLL loses at most 2^((n-1)/2) per dimension; the
    guard covers the scaling offset and the rounding of the values.
    """
    h_bits = max(1, math.ceil(math.log2(height + 1)))
    return 32 + SCALE_GUARD + n * h_bits + n * (n - 1) // 2


def _residual(coeffs: Sequence[int], values: Sequence[BigReal]) -> BigReal:
    acc = BigReal(0, 0, values[0].prec)
    for m, x in zip(coeffs, values):
        if m:
            acc = acc + x * m
    return acc


def _normalize(coeffs: Sequence[int]) -> list[int]:
    g = 0
    for c in coeffs:
        g = math.gcd(g, c)
    out = [c // g for c in coeffs] if g > 1 else list(coeffs)
    for c in out:
        if c:
            return out if c > 0 else [-x for x in out]
    return out


def _check_values(values: Sequence[BigReal], precision: int, n: int) -> None:
    if len(values) != n:
        raise DomainError(f"evaluator returned {len(values)} values for {n} labels")
    bound = gmpy2.mul_2exp(mpfr(1), 1 - precision)
    for v in values:
        if v.rad > bound:
            raise ArithmeticError(f"value error 2^{v.error_log2} exceeds 2^{1 - precision}")


def find_relation(query: RelationQuery) -> RelationReport:
    n = len(query.labels)
    P = query.precision
    H = query.height
    need = required_precision(n, H)
    if P < need:
        raise PrecisionError(
            f"{n} values with height bound {H} need at least {need} bits, got {P}", need
        )
    values = list(query.evaluate(P))
    _check_values(values, P, n)

    shift = P - SCALE_GUARD
    with _near(P + 64):
        column = [int(gmpy2.rint(gmpy2.mul_2exp(v.mid, shift))) for v in values]
    basis = [[1 if j == i else 0 for j in range(n)] + [column[i]] for i in range(n)]
    reduced, norms2 = lll_reduce_with_norms(basis)

    # a true relation m gives a lattice vector with last entry at most n H / 2 + 1
    candidates = []
    last_bound = n * H
    screen = gmpy2.mul_2exp(mpfr(1), -(P // 2))
    for row in reduced:
        m = row[:n]
        if not any(m) or max(abs(c) for c in m) > H or abs(row[n]) > last_bound:
            continue
        if _residual(m, values).upper < screen:
            candidates.append(_normalize(m))

    confirm = 2 * P
    verified: list[list[int]] = []
    best_residual = None
    if candidates:
        values2 = list(query.evaluate(confirm))
        _check_values(values2, confirm, n)
        target = gmpy2.mul_2exp(mpfr(1), -P)
        for m in candidates:
            r = _residual(m, values2)
            if r.upper < target and m not in verified:
                verified.append(m)
                if best_residual is None:
                    best_residual = r
    if verified:
        return RelationReport(
            list(query.labels), True, H, P, confirm, verified[0], verified, best_residual
        )

    # evidence: the smallest combination the reduced basis offers
    smallest = min((_residual(row[:n], values) for row in reduced), key=lambda b: b.upper)
    # every nonzero lattice vector has norm^2 >= min |b*_i|^2; an exact relation of
    # height <= H would give norm^2 <= n H^2 + (n H)^2
    excludes = min(norms2) > n * H * H + (n * H) ** 2
    return RelationReport(
        list(query.labels), False, H, P, None, None, [], smallest, bool(excludes)
    )


# --------------------------------------------------------------------------
# value families


def okada_value(k: int, a: int, q: int, precision: int) -> BigReal:
    """pi^-k d^(k-1)/dz^(k-1)(pi cot pi z) at z = a/q, i.e. P_k(cot(pi a / q))."""
    poly = cot_derivative(k)
    coef_bits = max(_bits(Fraction(c)) for c in poly.coefficients)
    inner = precision + 16 + k * (q.bit_length() + 2) + coef_bits
    val = poly(cot_pi(Fraction(a, q), inner))
    return val.with_prec(precision)


def half_system(q: int) -> list[int]:
    """T = {1 <= a < q/2 : gcd(a, q) = 1}."""
    return [a for a in coprime_residues(q) if 2 * a < q]


def _one(p: int) -> BigReal:
    return BigReal.exact(1, p)


def _hz(k: int, a: int, q: int) -> Callable[[int], BigReal]:
    return lambda p: hurwitz_zeta(k, Fraction(a, q), p)


def _sub_report(labels, fns, height, precision) -> dict:
    """Relation search on a labelled family, flagging one-element families."""
    if len(labels) == 1:
        v = fns[0](precision)
        return {
            "labels": list(labels),
            "degenerate_set": True,
            "outcome": "no_relation_certificate" if not v.contains_zero() else "value_may_vanish",
            "statement": "single nonzero value; no nontrivial relation is possible",
            "relations": [],
        }
    if not labels:
        return {"labels": [], "degenerate_set": True, "outcome": "empty", "relations": []}
    report = find_relation(RelationQuery.from_functions(labels, fns, height, precision))
    out = report.to_json()
    out["degenerate_set"] = False
    out["relations"] = [list(r) for r in report.relations]
    return out


def strong_cm_dimension_evidence(k: int, q: int, height: int = DEFAULT_HEIGHT,
                                 precision: int = DEFAULT_PRECISION, adjoin_pi: bool = False) -> dict:
    """Evidence for dim of span_Q{1, zeta(k, a/q) : (a, q) = 1}.

    The proven bounds are phi(q)/2 + 1 <= dim <= phi(q) + 1 (q > 2).
    """
    if k < 2 or q < 2:
        raise DomainError("strong-cm evidence needs k >= 2 and q >= 2")
    units = [a for a in coprime_residues(q) if a < q]
    phi = totient(q)
    labels = ["1"] + [f"zeta({k},{a}/{q})" for a in units]
    fns = [_one] + [_hz(k, a, q) for a in units]
    full = _sub_report(labels, fns, height, precision)
    estimate = len(labels) - len(full["relations"])
    lower, upper = phi // 2 + 1, phi + 1
    out: dict[str, Any] = {
        "space": "strong-cm",
        "k": k,
        "q": q,
        "full": full,
        "evidence_dimension": estimate,
        "proven_bounds": [lower, upper],
        "consistent": lower <= estimate <= upper,
        "conjectured_dimension": phi + 1,
    }
    if q > 2:
        T = half_system(q)
        plus_labels = ["1"] + [f"zeta({k},{a}/{q})+zeta({k},{q - a}/{q})" for a in T]
        plus_fns = [_one] + [
            (lambda p, a=a: hurwitz_zeta(k, Fraction(a, q), p) + hurwitz_zeta(k, Fraction(q - a, q), p))
            for a in T
        ]
        minus_labels = [f"zeta({k},{a}/{q})-zeta({k},{q - a}/{q})" for a in T]
        minus_fns = [
            (lambda p, a=a: hurwitz_zeta(k, Fraction(a, q), p) - hurwitz_zeta(k, Fraction(q - a, q), p))
            for a in T
        ]
        plus = _sub_report(plus_labels, plus_fns, height, precision)
        minus = _sub_report(minus_labels, minus_fns, height, precision)
        out["plus_split"] = plus
        out["minus_split"] = minus
        # no relation among {1} and the plus-combinations supports dim >= phi(q)/2 + 1
        out["plus_split_supports_lower_bound"] = not plus["relations"]
    if adjoin_pi:
        pl = labels + [f"pi^{k}"]
        pf = fns + [lambda p: pi_power(k, p)]
        with_pi = _sub_report(pl, pf, height, max(precision, required_precision(len(pl), height)))
        out["with_pi"] = with_pi
    return out


def cm_dimension_evidence(k: int, q: int, height: int = DEFAULT_HEIGHT,
                          precision: int = DEFAULT_PRECISION) -> dict:
    """Evidence for dim of span_Q{zeta(k, a/q) : (a, q) = 1}."""
    if k < 2 or q < 2:
        raise DomainError("cm evidence needs k >= 2 and q >= 2")
    units = [a for a in coprime_residues(q) if a < q]
    labels = [f"zeta({k},{a}/{q})" for a in units]
    full = _sub_report(labels, [_hz(k, a, q) for a in units], height, precision)
    return {
        "space": "cm",
        "k": k,
        "q": q,
        "full": full,
        "evidence_dimension": len(labels) - len(full["relations"]),
        "conjectured_dimension": totient(q),
    }


def okada_set_evidence(k: int, q: int, height: int = DEFAULT_HEIGHT,
                       precision: int = DEFAULT_PRECISION) -> dict:
    """Cotangent-derivative values over T; they are provably Q-independent."""
    if k < 1 or q <= 2:
        raise DomainError("okada evidence needs k >= 1 and q > 2")
    T = half_system(q)
    labels = [f"P{k}(cot(pi*{a}/{q}))" for a in T]
    fns = [(lambda p, a=a: okada_value(k, a, q, p)) for a in T]
    sub = _sub_report(labels, fns, height, precision)
    return {
        "space": "okada",
        "k": k,
        "q": q,
        "set": T,
        "degenerate_set": sub["degenerate_set"],
        "search": sub,
        "evidence_dimension": len(T) - len(sub["relations"]),
        "theorem_dimension": len(T),
        "consistent": not sub["relations"],
    }


def zagier_span(p: int) -> list[list[int]]:
    """Compositions of p with first part >= 2, in descending lexicographic order."""
    if p < 2:
        raise DomainError("weight must be >= 2")
    out: list[list[int]] = []

    def rec(prefix: list[int], rest: int) -> None:
        if rest == 0:
            out.append(list(prefix))
            return
        lo = 2 if not prefix else 1
        for s in range(rest, lo - 1, -1):
            prefix.append(s)
            rec(prefix, rest - s)
            prefix.pop()

    rec([], p)
    return out


def _mzv_label(s: Sequence[int]) -> str:
    return "zeta(" + ",".join(map(str, s)) + ")"


# dimensions of weight-p MZV spaces predicted by d_p = d_{p-2} + d_{p-3}
def _zagier_prediction(p: int) -> int:
    d = [1, 0, 1]
    while len(d) <= p:
        d.append(d[-2] + d[-3])
    return d[p]


def zagier_dimension_evidence(p: int, height: int = DEFAULT_HEIGHT, precision: int = DEFAULT_PRECISION,
                              length_cap: int = 3) -> dict:
    """Relation search among weight-p MZVs (length <= cap) together with pi^p.

    The full-span search raises its precision to the required floor when
    needed.  For p = 4d + 2 the pair {zeta(p), zeta(2d+1, 2d+1)} is also
    searched at the requested precision.
    """
    if p < 4:
        raise DomainError("zagier evidence needs weight p >= 4")
    if p > MAX_ZAGIER_WEIGHT:
        raise DomainError(f"weight {p} is beyond the supported range (<= {MAX_ZAGIER_WEIGHT})")
    if length_cap < 1:
        raise DomainError("length cap must be >= 1")
    span = [s for s in zagier_span(p) if len(s) <= length_cap]
    labels = [_mzv_label(s) for s in span] + [f"pi^{p}"]
    fns = [(lambda prec, s=s: mzv(s, prec)) for s in span] + [lambda prec: pi_power(p, prec)]
    used = max(precision, required_precision(len(labels), height))
    full = _sub_report(labels, fns, height, used)
    out: dict[str, Any] = {
        "space": "zagier",
        "weight": p,
        "length_cap": length_cap,
        "span": span,
        "full": full,
        "full_precision_bits": used,
        "evidence_dimension": len(labels) - len(full["relations"]),
        "predicted_dimension_with_pi": _zagier_prediction(p) + (p % 2),
    }
    if p % 4 == 2:
        d = (p - 2) // 4
        s = [2 * d + 1, 2 * d + 1]
        pair = _sub_report(
            [f"zeta({p})", _mzv_label(s)],
            [lambda prec: mzv([p], prec), lambda prec: mzv(s, prec)],
            height, precision,
        )
        out["pair"] = pair
        out["pair_relation_free"] = not pair["relations"]
    return out
