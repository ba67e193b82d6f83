from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmspaces.balls import BigComplex, BigReal, pi, sin_cos_pi
from conftest import assert_encloses

PI_75 = "3.14159265358979323846264338327950288419716939937510582097494459230781640629"

fractions = st.fractions(min_value=-1000, max_value=1000, max_denominator=10**6)


def test_pi_matches_reference_digits():
    assert_encloses(pi(256), PI_75)


def test_pi_radius_within_requested_precision():
    assert pi(256).error_log2 <= -255


@given(fractions, fractions)
@settings(max_examples=60, deadline=None)
def test_arithmetic_encloses_exact_results(a, b):
    x, y = BigReal.exact(a, 128), BigReal.exact(b, 128)
    assert (x + y).contains(a + b)
    assert (x - y).contains(a - b)
    assert (x * y).contains(a * b)
    if b:
        assert (x / y).contains(a / b)


@given(fractions, st.integers(min_value=0, max_value=9))
@settings(max_examples=40, deadline=None)
def test_integer_powers_enclose(a, n):
    assert (BigReal.exact(a, 128) ** n).contains(a**n)


def test_negation_keeps_working_precision():
    # a regression: negation once rounded to 53 bits
    x = BigReal.exact(Fraction(1, 3), 300)
    assert (-x).contains(Fraction(-1, 3))
    assert (x - x).upper_log2 < -290


def test_sqrt_and_log():
    two = BigReal.exact(2, 200)
    assert (two.sqrt() ** 2).contains(2)
    assert_encloses(two.log(), "0.693147180559945309417232121458176568075500134360255254120680009493393621969694715605863")


def test_sqrt_rejects_negative_ball():
    with pytest.raises(ValueError):
        BigReal.exact(-1, 64).sqrt()


def test_sin_cos_pi_exact_special_points():
    s, c = sin_cos_pi(Fraction(1, 2), 128)
    assert s.contains(1) and s.rad == 0
    assert c.contains(0) and c.rad == 0


@given(st.fractions(min_value=-3, max_value=3, max_denominator=50))
@settings(max_examples=40, deadline=None)
def test_pythagorean_identity(x):
    s, c = sin_cos_pi(x, 128)
    assert (s * s + c * c).contains(1)


def test_error_log2_is_smallest_power_bound():
    b = BigReal(1, Fraction(3, 1024), 64)
    # 3/1024 lies in (2^-9, 2^-8]
    assert b.error_log2 == -8


def test_json_fields():
    j = BigReal.exact(Fraction(1, 7), 100).to_json()
    assert set(j) == {"decimal", "error_log2", "precision_bits"}
    assert j["precision_bits"] == 100
    assert j["decimal"].startswith("0.142857142857")


def test_decimal_prints_only_supported_digits():
    b = BigReal(Fraction(1, 3), Fraction(1, 1000), 64)
    assert len(b.decimal()) < 10


def test_complex_multiplication_encloses_i_squared():
    i = BigComplex(BigReal.exact(0, 64), BigReal.exact(1, 64))
    z = i * i
    assert z.real.contains(-1) and z.imag.contains(0)


def test_complex_division_and_abs():
    z = BigComplex(BigReal.exact(3, 100), BigReal.exact(4, 100))
    assert z.abs().contains(5)
    w = z / z
    assert w.real.contains(1) and w.imag.contains(0)
