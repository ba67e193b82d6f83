"""Dirichlet characters, Kronecker symbols and exact Gauss sums."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .balls import BigComplex, BigReal
from .errors import DomainError
from .exact import (
    CyclotomicNumber,
    coprime_residues,
    cyclotomic_root,
    factorize,
    totient,
)


# --------------------------------------------------------------------------
# structure of (Z/qZ)^*


def _primitive_root(p: int, e: int) -> int:
    """A generator of (Z/p^e)^* for an odd prime p."""
    n = p**e
    order = totient(n)
    primes = [r for r, _ in factorize(order)]
    for g in range(2, n):
        if math.gcd(g, p) != 1:
            continue
        if all(pow(g, order // r, n) != 1 for r in primes):
            return g
    raise ArithmeticError(f"no primitive root modulo {n}")


def _crt_lift(residue: int, modulus: int, q: int) -> int:
    """x with x = residue (mod modulus) and x = 1 modulo the cofactor q/modulus."""
    other = q // modulus
    if other == 1:
        return residue % q
    # x = 1 + other * t with 1 + other*t = residue (mod modulus)
    t = ((residue - 1) * pow(other, -1, modulus)) % modulus
    return (1 + other * t) % q


@dataclass(frozen=True)
class UnitGroup:
    """(Z/qZ)^* as a product of cyclic factors with a discrete-log table."""

    modulus: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]
    logs: dict = field(repr=False, compare=False)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.orders) if self.orders else 1


@functools.lru_cache(maxsize=256)
def unit_group(q: int) -> UnitGroup:
    if q < 1:
        raise DomainError("modulus must be >= 1")
    gens: list[int] = []
    orders: list[int] = []
    for p, e in factorize(q):
        pe = p**e
        if p == 2:
            if e == 2:
                gens.append(_crt_lift(3, pe, q))
                orders.append(2)
            elif e >= 3:
                gens.append(_crt_lift(pe - 1, pe, q))
                orders.append(2)
                gens.append(_crt_lift(5, pe, q))
                orders.append(2 ** (e - 2))
        else:
            gens.append(_crt_lift(_primitive_root(p, e), pe, q))
            orders.append(totient(pe))
    logs: dict[int, tuple[int, ...]] = {}
    for exps in product(*(range(o) for o in orders)):
        a = 1
        for g, x in zip(gens, exps):
            a = a * pow(g, x, q) % q
        logs[a % q] = exps
    if q == 1:
        logs = {0: ()}
    return UnitGroup(q, tuple(gens), tuple(orders), logs)


# --------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class DirichletCharacter:
    """A character mod q, fixed by the images of the unit-group generators.

    ``images[i]`` is the fraction of a full turn, so
    ``chi(generators[i]) = exp(2 pi i * images[i])``.
    """

    modulus: int
    images: tuple[Fraction, ...]

    @functools.cached_property
    def group(self) -> UnitGroup:
        return unit_group(self.modulus)

    @property
    def order(self) -> int:
        return math.lcm(*(f.denominator for f in self.images)) if self.images else 1

    def turn(self, n: int) -> Fraction | None:
        """chi(n) as a fraction of a turn, or None when gcd(n, q) > 1."""
        q = self.modulus
        exps = self.group.logs.get(n % q)
        if exps is None:
            return None
        t = sum((e * im for e, im in zip(exps, self.images)), Fraction(0))
        return t - math.floor(t)

    def __call__(self, n: int) -> CyclotomicNumber:
        t = self.turn(n)
        m = self.order
        if t is None:
            return CyclotomicNumber.zero(m)
        return cyclotomic_root(m, int(t * m))

    def value_int(self, n: int) -> int:
        """chi(n) for a real character, as -1, 0 or 1."""
        t = self.turn(n)
        if t is None:
            return 0
        if t == 0:
            return 1
        if t == Fraction(1, 2):
            return -1
        raise ValueError("character is not real-valued")

    def is_principal(self) -> bool:
        return all(im == 0 for im in self.images)

    @functools.cached_property
    def conductor(self) -> int:
        q = self.modulus
        units = coprime_residues(q)
        for d in sorted(d for d in range(1, q + 1) if q % d == 0):
            if all(self.turn(a) == 0 for a in units if (a - 1) % d == 0):
                return d
        return q

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    @property
    def parity(self) -> int:
        """0 for even characters, 1 for odd ones."""
        return 0 if self.turn(-1) == 0 else 1

    def is_odd(self) -> bool:
        return self.parity == 1

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(
            self.modulus, tuple((-im) - math.floor(-im) for im in self.images)
        )

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "generators": list(self.group.generators),
            "images": [str(im) for im in self.images],
            "primitive": self.is_primitive(),
            "parity": "odd" if self.is_odd() else "even",
        }

    @classmethod
    def from_json(cls, data: dict) -> "DirichletCharacter":
        q = int(data["modulus"])
        grp = unit_group(q)
        if "generators" in data and list(data["generators"]) != list(grp.generators):
            raise DomainError("generator list does not match the canonical unit-group generators")
        images = tuple(Fraction(x) % 1 for x in data["images"])
        if len(images) != len(grp.orders):
            raise DomainError("wrong number of generator images")
        for im, o in zip(images, grp.orders):
            if (im * o).denominator != 1:
                raise DomainError(f"image {im} is not an {o}-th root of unity")
        return cls(q, images)


def enumerate_characters(q: int) -> list[DirichletCharacter]:
    """All phi(q) characters mod q; the principal one comes first."""
    grp = unit_group(q)
    return [
        DirichletCharacter(q, tuple(Fraction(j, o) for j, o in zip(js, grp.orders)))
        for js in product(*(range(o) for o in grp.orders))
    ]


# --------------------------------------------------------------------------
# Kronecker symbols


def _squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(abs(n))) if n not in (0,) else False


def is_fundamental_discriminant(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _check_fundamental(d: int) -> None:
    if not is_fundamental_discriminant(d):
        raise DomainError(
            f"{d} is not a fundamental discriminant "
            "(need d = 1 mod 4 squarefree, or d = 4m with m = 2,3 mod 4 squarefree)"
        )


def kronecker_symbol(disc: int, n: int) -> int:
    """(disc / n) for a fundamental discriminant, extended multiplicatively."""
    _check_fundamental(disc)
    if n == 0:
        return 0
    result = 1
    if n < 0:
        result = 1 if disc > 0 else -1
        n = -n
    if n == 1:
        return result
    for p, e in factorize(n):
        if disc % p == 0:
            return 0
        if p == 2:
            s = 1 if disc % 8 == 1 else -1
        else:
            s = 1 if pow(disc % p, (p - 1) // 2, p) == 1 else -1
        if e % 2:
            result *= s
    return result


@dataclass(frozen=True)
class KroneckerCharacter(DirichletCharacter):
    """chi_D(n) = (D/n) viewed as a character modulo |D|."""

    discriminant: int = 0

    def symbol(self, n: int) -> int:
        return kronecker_symbol(self.discriminant, n)


def kronecker_character(disc: int) -> KroneckerCharacter:
    _check_fundamental(disc)
    q = abs(disc)
    grp = unit_group(q)
    images = []
    for g in grp.generators:
        s = kronecker_symbol(disc, g)
        images.append(Fraction(0) if s == 1 else Fraction(1, 2))
    return KroneckerCharacter(q, tuple(images), discriminant=disc)


# --------------------------------------------------------------------------
# Gauss sums and L-values


def gauss_sum(chi: DirichletCharacter, b: int = 1) -> CyclotomicNumber:
    """tau(chi, b) = sum_{a=1}^{q} chi(a) zeta_q^(a b), computed exactly."""
    q = chi.modulus
    total = CyclotomicNumber.zero(q)
    for a in coprime_residues(q):
        total = total + chi(a) * cyclotomic_root(q, a * b)
    return total


def dirichlet_l_value(chi: DirichletCharacter, k: int, precision: int) -> BigComplex:
    """L(k, chi) with absolute error at most 2^(1-precision).

    For k >= 2 this is q^-k sum chi(a) zeta(k, a/q).  For k = 1 (non-principal
    chi only) the Fourier expansion of chi against -log(1 - zeta_q^b) is used.
    """
    from .numerics import hurwitz_zeta, polylog_at_root

    q = chi.modulus
    if k < 1:
        raise DomainError("k must be >= 1")
    if k == 1 and chi.is_principal():
        raise DomainError("L(s, chi) has a pole at s = 1 for the principal character")
    inner = precision + 8 + len(coprime_residues(q)).bit_length()
    if k >= 2:
        acc = BigComplex(BigReal(0, 0, inner))
        for a in coprime_residues(q):
            z = hurwitz_zeta(k, Fraction(a, q), inner)
            acc = acc + chi(a).embed(inner + k * q.bit_length()) * z
        acc = acc * BigReal.exact(Fraction(1, q**k), inner)
    else:
        acc = BigComplex(BigReal(0, 0, inner))
        for b in range(1, q):
            coeff = CyclotomicNumber.zero(q)
            for a in coprime_residues(q):
                coeff = coeff + chi(a) * cyclotomic_root(q, -a * b)
            if coeff.is_zero():
                continue
            coeff = coeff / q
            acc = acc + coeff.embed(inner) * polylog_at_root(1, q, b, inner)
    return BigComplex(acc.real.with_prec(precision), acc.imag.with_prec(precision))
