"""Exact arithmetic: rationals, totients, Bernoulli polynomials, cyclotomic fields.

Rationals are :class:`fractions.Fraction` throughout.  Elements of
``Q(zeta_n)`` are stored on the power basis ``1, zeta_n, ..., zeta_n^(phi(n)-1)``
reduced modulo the n-th cyclotomic polynomial, so equality is a plain
comparison of coefficient vectors.
"""

from __future__ import annotations

import functools
import math
import threading
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .balls import BigComplex, BigReal, sin_cos_pi
from .errors import NotRationalError

Rational = Fraction
Scalar = Union[int, Fraction]


# --------------------------------------------------------------------------
# elementary number theory


@functools.lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of ``n >= 1`` as ``((p, e), ...)`` by trial division."""
    if n < 1:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def totient(n: int) -> int:
    """Euler's phi."""
    if n < 1:
        raise ValueError(f"totient expects n >= 1, got {n}")
    result = n
    for p, _ in factorize(n):
        result -= result // p
    return result


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def coprime_residues(q: int) -> list[int]:
    """Residues ``1 <= a <= q`` with ``gcd(a, q) = 1`` (for q = 1 this is [1])."""
    return [a for a in range(1, q + 1) if math.gcd(a, q) == 1]


# --------------------------------------------------------------------------
# Bernoulli numbers and polynomials

_bernoulli_cache: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli_number(l: int) -> Fraction:
    """B_l with the convention B_1 = -1/2 (so B_l = B_l(0))."""
    if l < 0:
        raise ValueError("Bernoulli index must be non-negative")
    if l < len(_bernoulli_cache):
        return _bernoulli_cache[l]
    with _bernoulli_lock:
        cache = _bernoulli_cache
        for m in range(len(cache), l + 1):
            # sum_{j=0}^{m} C(m+1, j) B_j = 0
            acc = Fraction(0)
            for j in range(m):
                acc += math.comb(m + 1, j) * cache[j]
            cache.append(-acc / (m + 1))
        return cache[l]


class BernoulliPolynomial:
    """B_l(x) with dense ascending rational coefficients."""

    __slots__ = ("degree", "coefficients")

    def __init__(self, degree: int, coefficients: Sequence[Fraction]):
        self.degree = degree
        self.coefficients = tuple(Fraction(c) for c in coefficients)

    def __call__(self, x: Scalar) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        terms = [f"{c}*x^{i}" for i, c in enumerate(self.coefficients) if c]
        return f"B_{self.degree}(x) = " + (" + ".join(reversed(terms)) or "0")


@functools.lru_cache(maxsize=256)
def bernoulli_polynomial(l: int) -> BernoulliPolynomial:
    if l < 0:
        raise ValueError("Bernoulli polynomial degree must be non-negative")
    coeffs = [math.comb(l, j) * bernoulli_number(l - j) for j in range(l + 1)]
    return BernoulliPolynomial(l, coeffs)


# --------------------------------------------------------------------------
# cyclotomic polynomials


def _poly_divexact(num: list[int], den: Sequence[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // lead
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@functools.lru_cache(maxsize=512)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Phi_n as ascending integer coefficients."""
    if n < 1:
        raise ValueError("cyclotomic polynomial index must be >= 1")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def _reduce(poly: list[Fraction], n: int) -> tuple[Fraction, ...]:
    """Reduce a coefficient list modulo x^n - 1, then modulo Phi_n."""
    if len(poly) > n:
        folded = [Fraction(0)] * n
        for i, c in enumerate(poly):
            if c:
                folded[i % n] += c
        poly = folded
    else:
        poly = list(poly)
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    for i in range(len(poly) - 1, deg - 1, -1):
        c = poly[i]
        if c:
            shift = i - deg
            for j, p in enumerate(phi):
                if p:
                    poly[shift + j] -= c * p
    poly = poly[:deg] + [Fraction(0)] * (deg - len(poly))
    return tuple(poly)


def _common_conductor(m: int, n: int) -> int:
    if m == n:
        return m
    big = math.lcm(m, n)
    # Q(zeta_2k) = Q(zeta_k) for odd k
    if big % 4 == 2:
        big //= 2
    return big


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and any(a):
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for j, bj in enumerate(b):
            a[shift + j] -= c * bj
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _trim(p: list[Fraction]) -> list[Fraction]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    return [
        (a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)
    ]


# --------------------------------------------------------------------------
# cyclotomic field elements


class CyclotomicNumber:
    """Exact element of Q(zeta_n) on the reduced power basis.

    Binary operations between different conductors lift both operands into
    the compositum first, so ``zeta_4 * zeta_3`` is an element of Q(zeta_12).
    """

    __slots__ = ("conductor", "coefficients")

    def __init__(self, conductor: int, coefficients: Iterable[Scalar]):
        if conductor < 1:
            raise ValueError("conductor must be >= 1")
        self.conductor = conductor
        coeffs = [Fraction(c) for c in coefficients]
        if len(coeffs) != totient(conductor):
            coeffs = list(_reduce(coeffs, conductor))
        self.coefficients = tuple(coeffs)

    @classmethod
    def _raw(cls, conductor: int, coefficients: tuple[Fraction, ...]) -> "CyclotomicNumber":
        obj = cls.__new__(cls)
        obj.conductor = conductor
        obj.coefficients = coefficients
        return obj

    @classmethod
    def from_rational(cls, value: Scalar, conductor: int = 1) -> "CyclotomicNumber":
        coeffs = [Fraction(0)] * totient(conductor)
        coeffs[0] = Fraction(value)
        return cls._raw(conductor, tuple(coeffs))

    @classmethod
    def zero(cls, conductor: int = 1) -> "CyclotomicNumber":
        return cls.from_rational(0, conductor)

    @classmethod
    def one(cls, conductor: int = 1) -> "CyclotomicNumber":
        return cls.from_rational(1, conductor)

    # -- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def is_rational(self) -> bool:
        return not any(self.coefficients[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise NotRationalError(f"{self} is not rational")
        return self.coefficients[0]

    def lift(self, n: int) -> "CyclotomicNumber":
        """The same number viewed in Q(zeta_n)."""
        if n == self.conductor:
            return self
        m = self.conductor
        if n % m == 0:
            step = n // m
            poly = [Fraction(0)] * (step * (len(self.coefficients) - 1) + 1)
            for i, c in enumerate(self.coefficients):
                poly[i * step] = c
            return CyclotomicNumber._raw(n, _reduce(poly, n))
        if m % 4 == 2 and n % (m // 2) == 0:
            half = m // 2
            # zeta_m = -zeta_half^((half+1)/2) when half is odd
            root = -cyclotomic_root(half, (half + 1) // 2).lift(n)
            acc = CyclotomicNumber.zero(n)
            for c in reversed(self.coefficients):
                acc = acc * root + c
            return acc
        raise ValueError(f"Q(zeta_{m}) does not embed in Q(zeta_{n})")

    def _align(self, other) -> tuple["CyclotomicNumber", "CyclotomicNumber"]:
        if isinstance(other, (int, Fraction)):
            return self, CyclotomicNumber.from_rational(other, self.conductor)
        if not isinstance(other, CyclotomicNumber):
            raise TypeError(f"cannot combine CyclotomicNumber with {type(other).__name__}")
        n = _common_conductor(self.conductor, other.conductor)
        return self.lift(n), other.lift(n)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other) -> "CyclotomicNumber":
        if not isinstance(other, (int, Fraction, CyclotomicNumber)):
            return NotImplemented
        a, b = self._align(other)
        return CyclotomicNumber._raw(
            a.conductor, tuple(x + y for x, y in zip(a.coefficients, b.coefficients))
        )

    __radd__ = __add__

    def __neg__(self) -> "CyclotomicNumber":
        return CyclotomicNumber._raw(self.conductor, tuple(-c for c in self.coefficients))

    def __sub__(self, other) -> "CyclotomicNumber":
        if not isinstance(other, (int, Fraction, CyclotomicNumber)):
            return NotImplemented
        a, b = self._align(other)
        return CyclotomicNumber._raw(
            a.conductor, tuple(x - y for x, y in zip(a.coefficients, b.coefficients))
        )

    def __rsub__(self, other) -> "CyclotomicNumber":
        return (-self) + other

    def __mul__(self, other) -> "CyclotomicNumber":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CyclotomicNumber._raw(
                self.conductor, tuple(c * other for c in self.coefficients)
            )
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._align(other)
        if b.is_rational():
            return a * b.coefficients[0]
        if a.is_rational():
            return b * a.coefficients[0]
        n = a.conductor
        return CyclotomicNumber._raw(n, _reduce(_poly_mul(a.coefficients, b.coefficients), n))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        """Multiplicative inverse via extended Euclid in Q[x]/(Phi_n)."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        n = self.conductor
        if self.is_rational():
            return CyclotomicNumber.from_rational(1 / self.coefficients[0], n)
        r0 = [Fraction(c) for c in cyclotomic_polynomial(n)]
        r1 = _trim(list(self.coefficients))
        s0: list[Fraction] = []
        s1: list[Fraction] = [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, _trim(r)
            s0, s1 = s1, _trim(_poly_sub(s0, _poly_mul(q, s1)))
        # r1 is a nonzero constant: s1 * self == r1 (mod Phi_n)
        inv = [c / r1[0] for c in s1]
        return CyclotomicNumber(n, inv)

    def __truediv__(self, other) -> "CyclotomicNumber":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._align(other)
        return a * b.inverse()

    def __rtruediv__(self, other) -> "CyclotomicNumber":
        return CyclotomicNumber.from_rational(other, self.conductor) / self

    def __pow__(self, e: int) -> "CyclotomicNumber":
        if e < 0:
            return self.inverse() ** (-e)
        result = CyclotomicNumber.one(self.conductor)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def galois(self, h: int) -> "CyclotomicNumber":
        """Apply sigma_h: zeta_n -> zeta_n^h (h coprime to n)."""
        n = self.conductor
        if math.gcd(h, n) != 1:
            raise ValueError(f"sigma_{h} is not an automorphism of Q(zeta_{n})")
        poly = [Fraction(0)] * n
        for i, c in enumerate(self.coefficients):
            if c:
                poly[(i * h) % n] += c
        return CyclotomicNumber._raw(n, _reduce(poly, n))

    def conjugate(self) -> "CyclotomicNumber":
        return self.galois(-1 % self.conductor if self.conductor > 1 else 1)

    # -- comparison ------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coefficients[0] == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._align(other)
        return a.coefficients == b.coefficients

    def normalized_trace(self) -> Fraction:
        """Tr(x) / [Q(zeta_n):Q]; independent of the ambient conductor."""
        n = self.conductor
        acc = Fraction(0)
        for i, c in enumerate(self.coefficients):
            if c:
                m = n // math.gcd(i, n)
                acc += c * Fraction(mobius(m), totient(m))
        return acc

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coefficients[0])
        return hash(("cyc", self.normalized_trace()))

    # -- numerics --------------------------------------------------------

    def embed(self, precision: int) -> BigComplex:
        return cyclotomic_embed(self, precision)

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self.conductor}, {str(self)!r})"

    def __str__(self) -> str:
        n = self.conductor
        name = "i" if n == 4 else f"z{n}"
        parts = []
        for j, c in enumerate(self.coefficients):
            if not c:
                continue
            if j == 0:
                parts.append(str(c))
                continue
            mono = name if j == 1 else f"{name}^{j}"
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")


def cyclotomic_root(n: int, a: int) -> CyclotomicNumber:
    """zeta_n^a in Q(zeta_n), with a taken modulo n."""
    if n < 1:
        raise ValueError("cyclotomic_root expects n >= 1")
    poly = [Fraction(0)] * n
    poly[a % n] = Fraction(1)
    return CyclotomicNumber._raw(n, _reduce(poly, n))


def cyclotomic_embed(x: CyclotomicNumber, precision: int) -> BigComplex:
    """Numeric value of ``x`` with absolute error at most 2^(1-precision)."""
    if precision < 16:
        raise ValueError("precision must be at least 16 bits")
    n = x.conductor
    # head-room for coefficient growth in the sum
    bulk = sum(abs(c) for c in x.coefficients) + 1
    inner = precision + int(bulk).bit_length() + len(x.coefficients).bit_length() + 2
    re = BigReal(0, 0, inner)
    im = BigReal(0, 0, inner)
    for j, c in enumerate(x.coefficients):
        if not c:
            continue
        s, co = sin_cos_pi(Fraction(2 * j, n), inner)
        cb = BigReal.exact(c, inner)
        re = re + cb * co
        im = im + cb * s
    return BigComplex(re.with_prec(precision), im.with_prec(precision))


def exact_determinant(rows: Sequence[Sequence[CyclotomicNumber]]) -> CyclotomicNumber:
    """Determinant over a cyclotomic field by Gaussian elimination."""
    n = len(rows)
    if n == 0:
        return CyclotomicNumber.one()
    rows = [
        [v if isinstance(v, CyclotomicNumber) else CyclotomicNumber.from_rational(v) for v in row]
        for row in rows
    ]
    cond = 1
    for row in rows:
        for v in row:
            cond = _common_conductor(cond, v.conductor)
    m = [[v.lift(cond) for v in row] for row in rows]
    det = CyclotomicNumber.one(cond)
    for col in range(n):
        pivot = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if pivot is None:
            return CyclotomicNumber.zero(cond)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        p = m[col][col]
        det = det * p
        inv = p.inverse()
        for r in range(col + 1, n):
            if m[r][col].is_zero():
                continue
            f = m[r][col] * inv
            m[r] = [m[r][j] - f * m[col][j] if j >= col else m[r][j] for j in range(n)]
    return det
