"""Midpoint-radius ("ball") arithmetic on top of MPFR.

A :class:`BigReal` is a pair ``(mid, rad)`` meaning the true value lies in
``[mid - rad, mid + rad]``.  Midpoints are computed at the target precision
plus :data:`GUARD_BITS` with round-to-nearest; radii are 64-bit MPFR numbers
computed with upward rounding, so every bound is rigorous provided the
underlying MPFR primitives are correctly rounded (they are).

gmpy2 contexts are thread-local, which keeps everything here safe to call
from several threads at once.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Union

import gmpy2
from gmpy2 import mpfr, mpq

GUARD_BITS = 32
DEFAULT_PRECISION = 256
_RAD_BITS = 64

Number = Union[int, Fraction]


def working_precision(prec: int, extra: int = 0) -> int:
    return prec + GUARD_BITS + max(0, extra)


def _up():
    return gmpy2.context(precision=_RAD_BITS, round=gmpy2.RoundUp)


def _down():
    return gmpy2.context(precision=_RAD_BITS, round=gmpy2.RoundDown)


def _near(wp: int):
    return gmpy2.context(precision=wp, round=gmpy2.RoundToNearest)


def _rounding(x, wp: int):
    """Upper bound on the rounding error of a result ``x`` produced at ``wp`` bits."""
    if x == 0:
        return mpfr(0)
    with _up():
        return gmpy2.mul_2exp(abs(mpfr(x)), -wp + 1)


def ulp_bound(x, wp: int):
    return _rounding(x, wp)


class BigReal:
    """Real number enclosed in a ball with a guaranteed absolute radius."""

    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid, rad=0, prec: int = DEFAULT_PRECISION):
        self.mid = mid if isinstance(mid, type(mpfr(0))) else mpfr(mid, working_precision(prec))
        with _up():
            self.rad = abs(mpfr(rad))
        self.prec = prec

    # -- constructors -------------------------------------------------

    @classmethod
    def exact(cls, value: Number, prec: int = DEFAULT_PRECISION) -> "BigReal":
        """Ball around an exact rational (radius covers the one rounding)."""
        wp = working_precision(prec)
        value = Fraction(value)
        with _near(wp):
            mid = mpfr(mpq(value.numerator, value.denominator))
        if value.denominator == 1 and value.numerator.bit_length() <= wp:
            return cls(mid, 0, prec)
        return cls(mid, _rounding(mid, wp), prec)

    def _coerce(self, other) -> "BigReal":
        if isinstance(other, BigReal):
            return other
        if isinstance(other, (int, Fraction)):
            return BigReal.exact(other, self.prec)
        return NotImplemented

    # -- queries ---------------------------------------------------------

    @property
    def upper(self):
        """Upper bound on the absolute value."""
        with _up():
            return abs(self.mid) + self.rad

    @property
    def lower(self):
        """Lower bound on the absolute value (0 if the ball contains 0)."""
        with _down():
            v = abs(self.mid) - self.rad
        return v if v > 0 else mpfr(0)

    def contains_zero(self) -> bool:
        return abs(self.mid) <= self.rad

    def contains(self, value) -> bool:
        wp = working_precision(self.prec) + 64
        with _near(wp):
            if isinstance(value, Fraction):
                value = mpq(value.numerator, value.denominator)
            d = abs(self.mid - mpfr(value))
        return d <= self.rad

    @property
    def error_log2(self) -> int | None:
        """Smallest e with rad <= 2**e, or None for an exact ball."""
        if self.rad == 0:
            return None
        e, m = gmpy2.frexp(self.rad)
        return int(e) if m != 0.5 else int(e) - 1

    @property
    def upper_log2(self) -> float:
        u = self.upper
        if u == 0:
            return float("-inf")
        return float(gmpy2.log2(u))

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        return f"BigReal({self.decimal()} +/- 2^{self.error_log2})"

    def decimal(self) -> str:
        """Decimal string carrying only the digits the radius supports."""
        return format_decimal(self.mid, self.rad)

    def to_json(self) -> dict:
        return {
            "decimal": self.decimal(),
            "error_log2": self.error_log2,
            "precision_bits": self.prec,
        }

    # -- arithmetic ------------------------------------------------------

    def __neg__(self) -> "BigReal":
        # negation is exact, but gmpy2 rounds to the context precision
        with _near(max(self.mid.precision, 2)):
            mid = -self.mid
        return BigReal(mid, self.rad, self.prec)

    def __pos__(self) -> "BigReal":
        return self

    def __add__(self, other) -> "BigReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = max(self.prec, other.prec)
        wp = working_precision(prec)
        with _near(wp):
            mid = self.mid + other.mid
        with _up():
            rad = self.rad + other.rad + _rounding(mid, wp)
        return BigReal(mid, rad, prec)

    __radd__ = __add__

    def __sub__(self, other) -> "BigReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "BigReal":
        return (-self) + other

    def __mul__(self, other) -> "BigReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = max(self.prec, other.prec)
        wp = working_precision(prec)
        with _near(wp):
            mid = self.mid * other.mid
        with _up():
            rad = (
                abs(self.mid) * other.rad
                + abs(other.mid) * self.rad
                + self.rad * other.rad
                + _rounding(mid, wp)
            )
        return BigReal(mid, rad, prec)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "BigReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.contains_zero():
            raise ZeroDivisionError("division by a ball containing zero")
        prec = max(self.prec, other.prec)
        wp = working_precision(prec)
        with _near(wp):
            mid = self.mid / other.mid
        denom = other.lower
        with _down():
            denom = denom * abs(other.mid)
        with _up():
            rad = (abs(self.mid) * other.rad + abs(other.mid) * self.rad) / denom
            rad = rad + _rounding(mid, wp)
        return BigReal(mid, rad, prec)

    def __rtruediv__(self, other) -> "BigReal":
        return BigReal.exact(other, self.prec) / self

    def __pow__(self, n: int) -> "BigReal":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = BigReal(1, 0, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def sqrt(self) -> "BigReal":
        if self.mid - self.rad < 0:
            raise ValueError("sqrt of a ball reaching negative values")
        wp = working_precision(self.prec)
        with _near(wp):
            mid = gmpy2.sqrt(self.mid)
        with _down():
            lo = gmpy2.sqrt(self.mid - self.rad)
        with _up():
            # |sqrt(x) - sqrt(m)| <= r / (sqrt(m - r) + sqrt(m))
            rad = self.rad / (lo + gmpy2.sqrt(self.mid)) if self.rad else mpfr(0)
            rad = rad + _rounding(mid, wp)
        return BigReal(mid, rad, self.prec)

    def log(self) -> "BigReal":
        lo = self.lower
        if self.mid <= 0 or lo == 0:
            raise ValueError("log of a ball not strictly positive")
        wp = working_precision(self.prec)
        with _near(wp):
            mid = gmpy2.log(self.mid)
        with _up():
            rad = self.rad / lo + _rounding(mid, wp)
        return BigReal(mid, rad, self.prec)

    def sin(self) -> "BigReal":
        wp = working_precision(self.prec)
        with _near(wp):
            mid = gmpy2.sin(self.mid)
        with _up():
            rad = self.rad + _rounding(mid, wp) + gmpy2.mul_2exp(mpfr(1), -wp)
        return BigReal(mid, rad, self.prec)

    def cos(self) -> "BigReal":
        wp = working_precision(self.prec)
        with _near(wp):
            mid = gmpy2.cos(self.mid)
        with _up():
            rad = self.rad + _rounding(mid, wp) + gmpy2.mul_2exp(mpfr(1), -wp)
        return BigReal(mid, rad, self.prec)

    def with_prec(self, prec: int) -> "BigReal":
        return BigReal(self.mid, self.rad, prec)


class BigComplex:
    """Pair of balls; the error bound is the larger of the two radii."""

    __slots__ = ("real", "imag")

    def __init__(self, real: BigReal, imag: BigReal | None = None):
        self.real = real
        self.imag = imag if imag is not None else BigReal(0, 0, real.prec)

    @property
    def prec(self) -> int:
        return max(self.real.prec, self.imag.prec)

    @property
    def rad(self):
        return max(self.real.rad, self.imag.rad)

    @property
    def error_log2(self) -> int | None:
        r = self.real if self.real.rad >= self.imag.rad else self.imag
        return r.error_log2

    def _coerce(self, other) -> "BigComplex":
        if isinstance(other, BigComplex):
            return other
        if isinstance(other, BigReal):
            return BigComplex(other)
        if isinstance(other, (int, Fraction)):
            return BigComplex(BigReal.exact(other, self.prec))
        return NotImplemented

    def __add__(self, other) -> "BigComplex":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return BigComplex(self.real + other.real, self.imag + other.imag)

    __radd__ = __add__

    def __neg__(self) -> "BigComplex":
        return BigComplex(-self.real, -self.imag)

    def __sub__(self, other) -> "BigComplex":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return BigComplex(self.real - other.real, self.imag - other.imag)

    def __rsub__(self, other) -> "BigComplex":
        return (-self) + other

    def __mul__(self, other) -> "BigComplex":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.real, self.imag, other.real, other.imag
        return BigComplex(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "BigComplex":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c, d = other.real, other.imag
        n = c * c + d * d
        num = self * other.conjugate()
        return BigComplex(num.real / n, num.imag / n)

    def __pow__(self, n: int) -> "BigComplex":
        result = BigComplex(BigReal(1, 0, self.prec))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def conjugate(self) -> "BigComplex":
        return BigComplex(self.real, -self.imag)

    def abs2(self) -> BigReal:
        return self.real * self.real + self.imag * self.imag

    def abs(self) -> BigReal:
        return self.abs2().sqrt()

    def abs_upper(self):
        """Upper bound on the modulus."""
        with _up():
            return gmpy2.sqrt(self.real.upper**2 + self.imag.upper**2)

    def __repr__(self) -> str:
        return f"BigComplex({self.real.decimal()}, {self.imag.decimal()}; 2^{self.error_log2})"

    def to_json(self) -> dict:
        return {
            "real": self.real.decimal(),
            "imag": self.imag.decimal(),
            "error_log2": self.error_log2,
            "precision_bits": self.prec,
        }


@functools.lru_cache(maxsize=64)
def pi(prec: int = DEFAULT_PRECISION) -> BigReal:
    """pi as a ball, cached per precision level."""
    wp = working_precision(prec)
    with _near(wp):
        mid = gmpy2.const_pi()
    return BigReal(mid, _rounding(mid, wp), prec)


def sin_cos_pi(x: Number, prec: int) -> tuple[BigReal, BigReal]:
    """Balls for sin(pi*x) and cos(pi*x) at a rational x."""
    x = Fraction(x)
    # reduce into [0, 2) so the argument stays small
    x = x - 2 * (x.numerator // (2 * x.denominator))
    if x == 0:
        return BigReal(0, 0, prec), BigReal(1, 0, prec)
    if x == 1:
        return BigReal(0, 0, prec), BigReal(-1, 0, prec)
    if x == Fraction(1, 2):
        return BigReal(1, 0, prec), BigReal(0, 0, prec)
    if x == Fraction(3, 2):
        return BigReal(-1, 0, prec), BigReal(0, 0, prec)
    theta = pi(prec) * BigReal.exact(x, prec)
    return theta.sin(), theta.cos()


def format_decimal(mid, rad) -> str:
    """Render ``mid`` with as many significant digits as ``rad`` justifies."""
    if mid == 0 and rad == 0:
        return "0"
    if rad == 0:
        digits = max(20, int(mid.precision * 0.30103))
    else:
        if abs(mid) <= rad:
            return "0"
        lead = math.floor(float(gmpy2.log10(abs(mid))))
        tail = math.floor(float(gmpy2.log10(rad)))
        digits = max(1, lead - tail)
    mant, exp, _ = mid.digits(10, digits)
    sign = ""
    if mant.startswith("-"):
        sign, mant = "-", mant[1:]
    mant = mant.rstrip("0") or "0"
    # value = 0.mant * 10**exp
    if 0 < exp <= 40:
        if len(mant) <= exp:
            return sign + mant + "0" * (exp - len(mant))
        return sign + mant[:exp] + "." + mant[exp:]
    if -10 < exp <= 0:
        return sign + "0." + "0" * (-exp) + mant
    body = mant[0] + ("." + mant[1:] if len(mant) > 1 else "")
    return f"{sign}{body}e{exp - 1}"
