"""Rational-valued periodic functions, their Fourier transforms and L-values."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import gmpy2
from gmpy2 import mpfr, mpq

from .balls import GUARD_BITS, BigReal, _near, _up
from .errors import DomainError, NotRationalError
from .exact import CyclotomicNumber, coprime_residues, cyclotomic_root
from .numerics import _bits, _em_coefficient, euler_factor, hurwitz_zeta


@dataclass(frozen=True)
class PeriodicFunction:
    """f on Z with period q; ``values[a-1] = f(a)`` for a = 1..q (so f(q) = f(0))."""

    period: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if self.period < 1:
            raise DomainError("period must be >= 1")
        vals = tuple(Fraction(v) for v in self.values)
        if len(vals) != self.period:
            raise DomainError(f"expected {self.period} values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    def __call__(self, n: int) -> Fraction:
        return self.values[(n - 1) % self.period]

    @classmethod
    def from_function(cls, q: int, fn) -> "PeriodicFunction":
        return cls(q, tuple(Fraction(fn(a)) for a in range(1, q + 1)))

    @classmethod
    def indicator(cls, q: int, residue: int) -> "PeriodicFunction":
        r = residue % q
        return cls.from_function(q, lambda a: 1 if a % q == r else 0)

    def to_json(self) -> dict:
        return {"period": self.period, "values": [str(v) for v in self.values]}

    @classmethod
    def from_json(cls, data: dict | str) -> "PeriodicFunction":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            q = int(data["period"])
            vals = tuple(_parse_rational(v) for v in data["values"])
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed periodic function: {exc}") from exc
        return cls(q, vals)

    def max_abs(self) -> Fraction:
        return max(abs(v) for v in self.values)


def _parse_rational(text) -> Fraction:
    if isinstance(text, bool) or isinstance(text, float):
        raise DomainError(f"rationals must be given as 'p/q' strings, not {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"invalid rational {text!r}") from exc


@dataclass(frozen=True)
class FourierCoefficients:
    """``coefficients[n-1] = hat f(n)`` for n = 1..q, elements of Q(zeta_q)."""

    period: int
    coefficients: tuple[CyclotomicNumber, ...]

    def __call__(self, n: int) -> CyclotomicNumber:
        return self.coefficients[(n - 1) % self.period]

    def galois(self, h: int) -> "FourierCoefficients":
        return FourierCoefficients(self.period, tuple(c.galois(h) for c in self.coefficients))


def fourier_transform(f: PeriodicFunction) -> FourierCoefficients:
    """hat f(n) = (1/q) sum_a f(a) zeta_q^(-a n)."""
    q = f.period
    out = []
    for n in range(1, q + 1):
        acc = CyclotomicNumber.zero(q)
        for a in range(1, q + 1):
            v = f(a)
            if v:
                acc = acc + cyclotomic_root(q, -a * n) * v
        out.append(acc / q)
    return FourierCoefficients(q, tuple(out))


def fourier_inverse(coeffs: FourierCoefficients) -> PeriodicFunction:
    """f(n) = sum_a hat f(a) zeta_q^(a n); every value must be rational."""
    q = coeffs.period
    vals = []
    for n in range(1, q + 1):
        acc = CyclotomicNumber.zero(q)
        for a in range(1, q + 1):
            c = coeffs(a)
            if not c.is_zero():
                acc = acc + c * cyclotomic_root(q, a * n)
        if not acc.is_rational():
            raise NotRationalError(f"inverse transform at n={n} is {acc}, not rational")
        vals.append(acc.to_rational())
    return PeriodicFunction(q, tuple(vals))


def twist(f: PeriodicFunction, h: int) -> PeriodicFunction:
    """f_h(n) = f(n h^-1 mod q)."""
    q = f.period
    if math.gcd(h, q) != 1:
        raise DomainError(f"twist needs gcd(h, q) = 1, got h={h}, q={q}")
    h_inv = pow(h, -1, q) if q > 1 else 0
    return PeriodicFunction.from_function(q, lambda n: f(n * h_inv))


def degenerate_function(q: int, k: int, c) -> PeriodicFunction:
    """The function making L(k, f) vanish identically in unit-residue Hurwitz form.

    f(q) = c, f(a) = -c q^-k / prod_{p|q}(1 - p^-k) on units, 0 elsewhere.
    """
    if q < 2 or k < 2:
        raise DomainError("degenerate_function needs q > 1 and k > 1")
    c = Fraction(c)
    unit_value = -c * Fraction(1, q**k) / euler_factor(k, q)
    units = set(coprime_residues(q))

    def value(a: int) -> Fraction:
        if a == q:
            return c
        return unit_value if a in units else Fraction(0)

    return PeriodicFunction.from_function(q, value)


def unit_bracket(f: PeriodicFunction, k: int, a: int) -> Fraction:
    """f(a) + f(q) q^-k / prod_{p|q}(1 - p^-k)."""
    q = f.period
    return f(a) + f(q) * Fraction(1, q**k) / euler_factor(k, q)


def _check_unit_support(f: PeriodicFunction) -> None:
    q = f.period
    for a in range(1, q):
        g = math.gcd(a, q)
        if 1 < g < q and f(a) != 0:
            raise DomainError(f"f({a}) = {f(a)} but gcd({a}, {q}) = {g}; the unit-residue decomposition needs f = 0 there")


def unit_decomposition(f: PeriodicFunction, k: int, precision: int) -> list[tuple[int, Fraction, BigReal]]:
    """(a, bracket, zeta(k, a/q)) for the units a < q."""
    if k < 2:
        raise DomainError("unit_decomposition needs k >= 2")
    _check_unit_support(f)
    q = f.period
    return [
        (a, unit_bracket(f, k, a), hurwitz_zeta(k, Fraction(a, q), precision))
        for a in coprime_residues(q)
        if a < q
    ]


def unit_decomposition_value(f: PeriodicFunction, k: int, precision: int) -> BigReal:
    """q^-k sum_a bracket(a) zeta(k, a/q)."""
    q = f.period
    inner = precision + 8 + q.bit_length() + _bits(2 * f.max_abs())
    acc = BigReal(0, 0, inner)
    for _, bracket, _z in unit_decomposition(f, k, inner):
        if bracket:
            acc = acc + _z * bracket
    acc = acc * Fraction(1, q**k)
    return acc.with_prec(precision)


def _series_l_value(f: PeriodicFunction, k: int, precision: int) -> BigReal:
    """Direct Dirichlet summation over M full periods plus a periodic tail.

    The tail sum_{j>=M} sum_a f(a) (jq + a)^-k is handled per residue with
    Euler-Maclaurin on g(t) = (t + a/q)^-k; its remainder is bounded by the
    last correction kept.  Partial sums run over n in natural order.
    """
    q = f.period
    scale = f.max_abs() * q + 1
    scale_bits = max(0, scale.numerator.bit_length() - scale.denominator.bit_length() + 1)
    wp = precision + GUARD_BITS + scale_bits + 16
    target_bits = precision + 8 + scale_bits
    periods = max(k + 1, target_bits // 6 + 2)
    while True:
        with _near(wp):
            target = gmpy2.mul_2exp(mpfr(1), -target_bits)
            tails = []
            worst = mpfr(0)
            ok = True
            n_corr = 0
            for a in range(1, q + 1):
                fa = f(a)
                if not fa:
                    continue
                y = mpfr(mpq(periods * q + a, q))
                inv_y2 = 1 / (y * y)
                ypow = 1 / y ** (k + 1)
                corr = y ** (1 - k) / (k - 1) + 1 / (2 * y**k)
                last = None
                hit = False
                for j in range(1, 4 * periods):
                    term = mpfr(mpq(_em_coefficient(k, j))) * ypow
                    if last is not None and abs(term) > abs(last):
                        break
                    corr += term
                    last = term
                    n_corr = max(n_corr, j)
                    if abs(term) <= target:
                        hit = True
                        break
                    ypow *= inv_y2
                if not hit:
                    ok = False
                    break
                tails.append(mpfr(mpq(fa)) * corr / mpfr(q**k))
                with _up():
                    worst = max(worst, abs(last) * abs(mpfr(mpq(fa))) / q**k)
        if ok:
            break
        periods *= 2
    with _near(wp):
        head = mpfr(0)
        for n in range(1, periods * q + 1):
            v = f(n)
            if v:
                head += mpfr(mpq(v)) / mpfr(n**k)
        mid = head + sum(tails, mpfr(0))
    with _up():
        rounding = mpfr(mpq(scale)) * 4 * (periods * q + q * n_corr * (2 * n_corr + 6) + 16)
        rounding = gmpy2.mul_2exp(rounding, 1 - wp)
        rad = worst * q + rounding
    return BigReal(mid, rad, precision)


def l_value(f: PeriodicFunction, k: int, precision: int, method: str = "hurwitz") -> BigReal:
    """L(k, f) = sum_{n>=1} f(n) n^-k for k >= 2."""
    if k < 2:
        raise DomainError("l_value needs k >= 2 (k = 1 may be a pole)")
    q = f.period
    if method == "hurwitz":
        inner = precision + 8 + q.bit_length() + _bits(f.max_abs())
        acc = BigReal(0, 0, inner)
        for a in range(1, q + 1):
            v = f(a)
            if v:
                acc = acc + hurwitz_zeta(k, Fraction(a, q), inner) * v
        acc = acc * Fraction(1, q**k)
        out = acc.with_prec(precision)
    elif method == "series":
        out = _series_l_value(f, k, precision)
    else:
        raise DomainError(f"unknown method {method!r}; use 'hurwitz' or 'series'")
    if out.rad > gmpy2.mul_2exp(mpfr(1), 1 - precision):
        raise ArithmeticError(f"l_value: bound 2^{out.error_log2} misses 2^{1 - precision}")
    return out


def periodic_from_values(values: Iterable) -> PeriodicFunction:
    vals = [Fraction(v) for v in values]
    return PeriodicFunction(len(vals), tuple(vals))
