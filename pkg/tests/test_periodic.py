import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmspaces.errors import DomainError, NotRationalError
from cmspaces.exact import CyclotomicNumber, coprime_residues, cyclotomic_root
from cmspaces.periodic import (
    FourierCoefficients,
    PeriodicFunction,
    degenerate_function,
    unit_bracket,
    unit_decomposition,
    unit_decomposition_value,
    fourier_inverse,
    fourier_transform,
    l_value,
    twist,
)
from conftest import assert_encloses

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=9)


@st.composite
def periodic_functions(draw, max_q=12):
    q = draw(st.integers(min_value=1, max_value=max_q))
    return PeriodicFunction(q, tuple(draw(st.lists(rationals, min_size=q, max_size=q))))


def chi_minus4() -> PeriodicFunction:
    return PeriodicFunction(4, (1, 0, -1, 0))


def test_values_are_indexed_from_one():
    f = PeriodicFunction(3, (5, 6, 7))
    assert f(1) == 5 and f(3) == 7 and f(0) == 7 and f(-2) == 5


@given(periodic_functions())
@settings(max_examples=40, deadline=None)
def test_fourier_round_trip(f):
    assert fourier_inverse(fourier_transform(f)) == f


def test_fourier_of_indicator():
    f = PeriodicFunction.indicator(5, 2)
    hat = fourier_transform(f)
    for n in range(1, 6):
        assert hat(n) == cyclotomic_root(5, -2 * n) / 5


def test_inverse_refuses_non_rational_values():
    coeffs = tuple([cyclotomic_root(5, 1)] + [CyclotomicNumber.zero(5)] * 4)
    with pytest.raises(NotRationalError):
        fourier_inverse(FourierCoefficients(5, coeffs))


@given(periodic_functions(), st.integers(min_value=1, max_value=50))
@settings(max_examples=30, deadline=None)
def test_twist_matches_galois_action(f, h):
    q = f.period
    if math.gcd(h, q) != 1:
        with pytest.raises(DomainError):
            twist(f, h)
        return
    hat_twist = fourier_transform(twist(f, h))
    hat = fourier_transform(f)
    assert hat_twist == hat.galois(h)
    for n in range(1, q + 1):
        assert hat_twist(n) == hat(h * n)


def test_json_round_trip_and_float_rejection():
    f = PeriodicFunction(3, (Fraction(1, 2), -2, 0))
    assert PeriodicFunction.from_json(f.to_json()) == f
    with pytest.raises(DomainError):
        PeriodicFunction.from_json({"period": 2, "values": [0.5, 1]})
    with pytest.raises(DomainError):
        PeriodicFunction.from_json({"period": 2, "values": ["1/2"]})


def test_l_value_of_chi_minus4_is_beta():
    assert_encloses(l_value(chi_minus4(), 3, 256), mpmath.pi**3 / 32, digits=100)
    assert_encloses(l_value(chi_minus4(), 3, 256, method="series"), mpmath.pi**3 / 32, digits=100)
    assert_encloses(l_value(chi_minus4(), 2, 256), mpmath.catalan, digits=100)


@given(periodic_functions(max_q=8), st.integers(min_value=2, max_value=4))
@settings(max_examples=15, deadline=None)
def test_two_l_value_methods_agree(f, k):
    a = l_value(f, k, 160)
    b = l_value(f, k, 160, method="series")
    assert (a - b).upper_log2 <= -150


def test_l_value_against_direct_mpmath_sum():
    f = PeriodicFunction(6, (Fraction(3, 7), -2, Fraction(5, 3), 1, 0, Fraction(1, 2)))
    ref = sum(mpmath.mpf(f(a).numerator) / f(a).denominator * mpmath.zeta(3, mpmath.mpf(a) / 6)
              for a in range(1, 7)) / 216
    assert_encloses(l_value(f, 3, 256), ref, digits=100)


def test_l_value_domain():
    with pytest.raises(DomainError):
        l_value(chi_minus4(), 1, 64)
    with pytest.raises(DomainError):
        l_value(chi_minus4(), 2, 64, method="guess")


@pytest.mark.parametrize("q", [2, 3, 4, 6, 10])
@pytest.mark.parametrize("k", [2, 3])
def test_degenerate_function_has_zero_brackets_and_l_value(q, k):
    f = degenerate_function(q, k, Fraction(5, 3))
    for _a, bracket, _z in unit_decomposition(f, k, 64):
        assert bracket == 0
    assert l_value(f, k, 200).contains_zero()


def test_unit_decomposition_matches_direct_l_value():
    f = PeriodicFunction(6, (1, 0, 0, 0, -2, 3))
    assert (unit_decomposition_value(f, 3, 200) - l_value(f, 3, 200)).contains_zero()
    assert unit_bracket(f, 3, 1) == 1 + Fraction(3, 216) / (Fraction(7, 8) * Fraction(26, 27))


def test_unit_decomposition_requires_vanishing_on_non_units():
    f = PeriodicFunction(6, (1, 1, 0, 0, 0, 0))
    with pytest.raises(DomainError):
        unit_decomposition(f, 2, 64)


def test_unit_decomposition_unit_residues_only():
    f = degenerate_function(12, 2, 1)
    assert [a for a, _, _ in unit_decomposition(f, 2, 64)] == [a for a in coprime_residues(12) if a < 12]
