"""Guaranteed-error evaluation of zeta-type values.

Every public function returns a ball whose radius is at most
``2**(1 - precision)``.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Sequence, Union

import gmpy2
from gmpy2 import mpfr, mpq

from .balls import (
    DEFAULT_PRECISION,
    GUARD_BITS,
    BigComplex,
    BigReal,
    _near,
    _up,
    pi,
    sin_cos_pi,
)
from .errors import DomainError
from .exact import bernoulli_number, coprime_residues

Scalar = Union[int, Fraction]


def _bits(x: Fraction) -> int:
    """A b with |x| <= 2^b."""
    x = abs(Fraction(x))
    if x == 0:
        return 0
    return max(0, x.numerator.bit_length() - x.denominator.bit_length() + 1)


def _check_bound(ball: BigReal, precision: int, what: str) -> BigReal:
    if ball.rad > gmpy2.mul_2exp(mpfr(1), 1 - precision):
        raise ArithmeticError(f"{what}: error bound 2^{ball.error_log2} misses target 2^{1 - precision}")
    return ball.with_prec(precision)


# --------------------------------------------------------------------------
# Hurwitz and Riemann zeta


@functools.lru_cache(maxsize=1024)
def _em_coefficient(k: int, j: int) -> Fraction:
    """B_2j / (2j)! * k (k+1) ... (k+2j-2)."""
    rising = math.prod(range(k, k + 2 * j - 1))
    return bernoulli_number(2 * j) * rising / math.factorial(2 * j)


@functools.lru_cache(maxsize=8192)
def hurwitz_zeta(k: int, x: Scalar, precision: int = DEFAULT_PRECISION) -> BigReal:
    """zeta(k, x) = sum_{n>=0} (n + x)^-k for integer k >= 2 and rational 0 < x <= 1.

    Direct summation of the first N terms followed by the Euler-Maclaurin
    tail.  With the corrections j = 1..J included, the remainder is bounded
    by the magnitude of the J-th correction, because the derivatives of
    (t + x)^-k have constant sign.
    """
    if not isinstance(k, int) or k < 2:
        raise DomainError(f"hurwitz_zeta needs integer k >= 2, got {k}")
    x = Fraction(x)
    if not 0 < x <= 1:
        raise DomainError(f"hurwitz_zeta needs 0 < x <= 1, got {x}")
    p, d = x.numerator, x.denominator
    mag = Fraction(d, p) ** k + 2
    mag_bits = _bits(mag)
    wp = precision + GUARD_BITS + mag_bits + 8
    target_bits = precision + 6
    n_terms = max(k + 1, target_bits // 6 + 2)
    while True:
        with _near(wp):
            target = gmpy2.mul_2exp(mpfr(1), -target_bits)
            y = mpfr(mpq(n_terms * d + p, d))
            inv_y2 = 1 / (y * y)
            ypow = 1 / y ** (k + 1)  # y^-(k + 2j - 1) at j = 1
            corr = mpfr(0)
            last = None
            ok = False
            j = 0
            for j in range(1, 4 * n_terms):
                term = mpfr(mpq(_em_coefficient(k, j))) * ypow
                if last is not None and abs(term) > abs(last):
                    break
                corr += term
                last = term
                if abs(term) <= target:
                    ok = True
                    break
                ypow *= inv_y2
        if ok:
            break
        n_terms *= 2
    with _near(wp):
        dk = mpfr(d**k)
        head = mpfr(0)
        for n in range(n_terms):
            head += dk / mpfr((n * d + p) ** k)
        tail = y ** (1 - k) / (k - 1) + y ** (-k) / 2
        mid = head + tail + corr
    with _up():
        rounding = mpfr(mpq(mag)) * (n_terms + j * (2 * j + 6) + 16) * gmpy2.mul_2exp(mpfr(1), 1 - wp)
        rad = abs(last) + rounding
    return _check_bound(BigReal(mid, rad, precision), precision, "hurwitz_zeta")


def riemann_zeta(k: int, precision: int = DEFAULT_PRECISION) -> BigReal:
    if not isinstance(k, int) or k < 2:
        raise DomainError(f"riemann_zeta needs integer k >= 2, got {k}")
    return hurwitz_zeta(k, Fraction(1), precision)


def root_of_unity(q: int, a: int, precision: int) -> BigComplex:
    """exp(2 pi i a / q) as a complex ball."""
    s, c = sin_cos_pi(Fraction(2 * a, q), precision)
    return BigComplex(c, s)


def polylog_at_root(m: int, q: int, a: int, precision: int = DEFAULT_PRECISION) -> BigComplex:
    """Li_m(zeta_q^a).

    m >= 2: q^-m sum_b zeta_q^(ab) zeta(m, b/q).
    m = 1:  -log(1 - zeta_q^a) = -log(2 sin(pi a/q)) + i pi (1/2 - a/q).
    """
    if q < 1:
        raise DomainError("q must be >= 1")
    if m < 1:
        raise DomainError("m must be >= 1")
    inner = precision + 8 + q.bit_length()
    if m == 1:
        r = a % q
        if r == 0:
            raise DomainError("Li_1(1) diverges")
        s, _ = sin_cos_pi(Fraction(r, q), inner)
        re = -((s * 2).log())
        im = pi(inner) * (Fraction(1, 2) - Fraction(r, q))
        return BigComplex(re.with_prec(precision), im.with_prec(precision))
    root_prec = inner + m * q.bit_length()
    acc = BigComplex(BigReal(0, 0, inner))
    for b in range(1, q + 1):
        z = hurwitz_zeta(m, Fraction(b, q), inner)
        acc = acc + root_of_unity(q, a * b, root_prec) * z
    acc = acc * BigReal.exact(Fraction(1, q**m), inner)
    return BigComplex(
        _check_bound(acc.real, precision, "polylog"), _check_bound(acc.imag, precision, "polylog")
    )


# --------------------------------------------------------------------------
# cotangent derivatives


class CotDerivativePolynomial:
    """P_k with d^(k-1)/dz^(k-1) (pi cot pi z) = pi^k P_k(cot pi z)."""

    __slots__ = ("order", "coefficients")

    def __init__(self, order: int, coefficients: Sequence[int]):
        self.order = order
        coeffs = list(coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients = tuple(coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CotDerivativePolynomial):
            return NotImplemented
        return (self.order, self.coefficients) == (other.order, other.coefficients)

    def __hash__(self) -> int:
        return hash((self.order, self.coefficients))

    def __repr__(self) -> str:
        return f"CotDerivativePolynomial({self.order}, {list(self.coefficients)})"

    def next(self) -> "CotDerivativePolynomial":
        # d/dz P(cot pi z) = P'(c) * (-pi (1 + c^2))
        deriv = [i * c for i, c in enumerate(self.coefficients)][1:] or [0]
        out = [0] * (len(deriv) + 2)
        for i, c in enumerate(deriv):
            out[i] -= c
            out[i + 2] -= c
        return CotDerivativePolynomial(self.order + 1, out)

    def __call__(self, c):
        acc = 0
        for coef in reversed(self.coefficients):
            acc = acc * c + coef
        return acc


@functools.lru_cache(maxsize=128)
def cot_derivative(k: int) -> CotDerivativePolynomial:
    if k < 1:
        raise DomainError("cot_derivative needs k >= 1")
    if k == 1:
        return CotDerivativePolynomial(1, [0, 1])
    return cot_derivative(k - 1).next()


def cot_pi(x: Scalar, precision: int) -> BigReal:
    """cot(pi x) for rational x not an integer."""
    x = Fraction(x)
    if x.denominator == 1:
        raise DomainError("cot(pi x) has a pole at integer x")
    s, c = sin_cos_pi(x, precision)
    return c / s


def cot_derivative_value(k: int, x: Scalar, precision: int = DEFAULT_PRECISION) -> BigReal:
    """d^(k-1)/dz^(k-1) (pi cot pi z) at z = x, i.e. pi^k P_k(cot pi x)."""
    x = Fraction(x)
    poly = cot_derivative(k)
    c_bits = _bits(Fraction(x.denominator)) + 1
    coef_bits = max(_bits(Fraction(c)) for c in poly.coefficients)
    inner = precision + 8 + k * (c_bits + 2) + coef_bits
    c = cot_pi(x, inner)
    val = poly(c) * pi(inner) ** k
    return _check_bound(val, precision, "cot_derivative_value")


def reflection_value(k: int, a: int, q: int, precision: int = DEFAULT_PRECISION) -> BigReal:
    """((-1)^(k-1)/(k-1)!) d^(k-1)/dz^(k-1)(pi cot pi z) at z = a/q.

    Equals zeta(k, a/q) + (-1)^k zeta(k, 1 - a/q).
    """
    if k < 2:
        raise DomainError("reflection_value needs k >= 2")
    if not (1 <= a and 2 * a < q) or math.gcd(a, q) != 1:
        raise DomainError(f"need 1 <= a < q/2 with gcd(a, q) = 1, got a={a}, q={q}")
    inner = precision + 4
    val = cot_derivative_value(k, Fraction(a, q), inner + _bits(Fraction(math.factorial(k - 1))))
    val = val * Fraction((-1) ** (k - 1), math.factorial(k - 1))
    return _check_bound(val, precision, "reflection_value")


def even_zeta_exact(m: int) -> Fraction:
    """zeta(2m) / pi^(2m) as an exact rational."""
    if m < 1:
        raise DomainError("even_zeta_exact needs m >= 1")
    return (-1) ** (m + 1) * bernoulli_number(2 * m) * 2 ** (2 * m - 1) / math.factorial(2 * m)


# --------------------------------------------------------------------------
# multiple zeta values


def _word(exponents: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for s in exponents:
        out.extend([0] * (s - 1) + [1])
    return tuple(out)


def _composition(word: Sequence[int]) -> tuple[int, ...]:
    """Inverse of _word for words ending in 1."""
    out = []
    run = 0
    for letter in word:
        run += 1
        if letter == 1:
            out.append(run)
            run = 0
    if run:
        raise ValueError("word must end in the letter 1")
    return tuple(out)


@functools.lru_cache(maxsize=4096)
def _li_half(exps: tuple[int, ...], wp: int):
    """Li_{a_1..a_m}(1/2) = sum_{n_1 > ... > n_m >= 1} 2^-n_1 / prod n_i^a_i.

    Returns (mid, rad) at wp bits.  All terms are positive; the tail past
    n_1 = N is at most 3 * 2^-(N+1) (N+1)^(m-1) once N + 1 >= 4(m - 1).
    """
    m = len(exps)
    if m == 0:
        return mpfr(1), mpfr(0)
    n_max = max(4 * m, 8)
    # smallest N (in steps of 16) with 3 * 2^-(N+1) (N+1)^(m-1) <= 2^-wp
    while 2 - (n_max + 1) + (m - 1) * math.log2(n_max + 1) > -wp:
        n_max += 16
    with _near(wp):
        acc = [mpfr(0)] * m
        half_pow = mpfr(1)
        for n in range(1, n_max + 1):
            half_pow = half_pow / 2
            for i in range(m):
                inner = acc[i + 1] if i + 1 < m else mpfr(1)
                w = inner / mpfr(n ** exps[i])
                if i == 0:
                    w = w * half_pow
                acc[i] += w
        mid = acc[0]
    with _up():
        tail = 3 * gmpy2.mul_2exp(mpfr(n_max + 1) ** (m - 1), -(n_max + 1))
        rad = tail + mid * m * (n_max + 8) * gmpy2.mul_2exp(mpfr(1), 2 - wp)
    return mid, rad


def mzv(exponents: Sequence[int], precision: int = DEFAULT_PRECISION) -> BigReal:
    """zeta(s_1, ..., s_k) = sum_{n_1 > ... > n_k >= 1} prod n_i^-s_i.

    Depth 1 goes through riemann_zeta.  Deeper values use the Hoelder
    convolution at 1/2: splitting the iterated integral over [0, 1] at 1/2
    and mapping [1/2, 1] onto [0, 1/2] by t -> 1 - t gives

        zeta(W) = sum_j Li(dual(reverse(W[:j])))(1/2) * Li(W[j:])(1/2),

    a finite sum of geometrically convergent nested series.
    """
    exps = tuple(int(s) for s in exponents)
    if not exps:
        raise DomainError("mzv needs at least one exponent")
    if any(s < 1 for s in exps):
        raise DomainError("mzv exponents must be positive integers")
    if exps[0] < 2:
        raise DomainError("mzv diverges when s_1 = 1")
    if len(exps) == 1:
        return riemann_zeta(exps[0], precision)
    word = _word(exps)
    weight = len(word)
    inner = precision + 16 + weight.bit_length()
    wp = inner + GUARD_BITS
    total = BigReal(0, 0, inner)
    for j in range(weight + 1):
        head = tuple(1 - letter for letter in reversed(word[:j]))
        tail = word[j:]
        a_mid, a_rad = _li_half(_composition(head), wp)
        b_mid, b_rad = _li_half(_composition(tail), wp)
        total = total + BigReal(a_mid, a_rad, inner) * BigReal(b_mid, b_rad, inner)
    return _check_bound(total, precision, "mzv")


def mzv_weight(exponents: Sequence[int]) -> int:
    return sum(exponents)


def pi_power(p: int, precision: int = DEFAULT_PRECISION) -> BigReal:
    inner = precision + 8 + 2 * p
    return _check_bound(pi(inner) ** p, precision, "pi_power")


def euler_factor(k: int, q: int) -> Fraction:
    """prod_{p | q} (1 - p^-k)."""
    from .exact import prime_divisors

    out = Fraction(1)
    for p in prime_divisors(q):
        out *= 1 - Fraction(1, p**k)
    return out


def hurwitz_coprime_sum(k: int, q: int, precision: int) -> BigReal:
    """sum_{1 <= a < q, (a,q)=1} zeta(k, a/q)."""
    acc = BigReal(0, 0, precision + 8)
    for a in coprime_residues(q):
        if a == q:
            continue
        acc = acc + hurwitz_zeta(k, Fraction(a, q), precision + 8)
    return acc
