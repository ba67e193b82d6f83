"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

Run under pytest (lines appear in the terminal summary) or directly:
    python3 tests/test_acceptance.py
"""

import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import mpmath

sys.path.insert(0, str(Path(__file__).resolve().parent))

from cmspaces.balls import BigReal  # noqa: E402
from cmspaces.exact import coprime_residues, cyclotomic_root  # noqa: E402
from cmspaces.identities import (  # noqa: E402
    check_dedekind_determinant,
    check_dedekind_generic,
    check_euler_factor,
    check_gauss_sum,
    check_hecke_formula,
    check_reflection,
    check_stuffle,
)
from cmspaces.numerics import (  # noqa: E402
    even_zeta_exact,
    hurwitz_zeta,
    mzv,
    pi_power,
    riemann_zeta,
)
from cmspaces.periodic import (  # noqa: E402
    PeriodicFunction,
    degenerate_function,
    unit_decomposition,
    fourier_inverse,
    fourier_transform,
    l_value,
    twist,
)
from cmspaces.relations import (  # noqa: E402
    RelationQuery,
    find_relation,
    okada_set_evidence,
    strong_cm_dimension_evidence,
)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # running as a script without pytest
    ACCEPTANCE_LINES = []

mpmath.mp.dps = 110


def _record(number: int, title: str, ok: bool, detail: str, started: float) -> None:
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail} [{time.perf_counter() - started:.1f}s]"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _worst(reports) -> float:
    return max(r.residual_log2 for r in reports)


def _within(ball: BigReal, exact, tol) -> bool:
    """|ball - exact| <= tol, judged on the ball's upper bound."""
    mid = mpmath.mpf(str(ball.mid))
    return abs(mid - exact) + mpmath.mpf(str(ball.rad)) <= tol


def test_criterion_01_euler_factor():
    t = time.perf_counter()
    reps = [check_euler_factor(k, q, 256) for q in range(2, 17) for k in (2, 3, 4, 5)]
    worst = _worst(reps)
    ok = all(r.passed for r in reps) and worst <= -240
    _record(1, "Euler-factor identity", ok, f"{len(reps)} cases, worst residual 2^{worst:.1f} (need <= 2^-240)", t)


def test_criterion_02_reflection():
    t = time.perf_counter()
    reps = [
        check_reflection(k, q, a, 256)
        for q in range(3, 17)
        for k in range(2, 7)
        for a in coprime_residues(q)
        if 2 * a < q
    ]
    worst = _worst(reps)
    spot = hurwitz_zeta(2, Fraction(1, 4), 256) + hurwitz_zeta(2, Fraction(3, 4), 256)
    spot_ok = _within(spot, 2 * mpmath.pi**2, mpmath.mpf(10) ** -70)
    ok = all(r.passed for r in reps) and worst <= -240 and spot_ok
    _record(2, "reflection formula", ok,
            f"{len(reps)} cases, worst residual 2^{worst:.1f}; zeta(2,1/4)+zeta(2,3/4)=2pi^2 within 1e-70: {spot_ok}", t)


def test_criterion_03_hecke():
    t = time.perf_counter()
    reps = [
        check_hecke_formula(k, q, a, 256)
        for k in (3, 5)
        for q in (3, 4, 5, 7, 8, 12)
        for a in coprime_residues(q)
        if 2 * a < q
    ]
    worst = _worst(reps)
    special = check_hecke_formula(3, 4, 1, 256)
    exact_ok = special.details["exact_value"] == str(cyclotomic_root(4, 1) / 4) == "1/4*i"
    ok = all(r.passed for r in reps) and worst <= -240 and exact_ok
    _record(3, "Hecke/Bernoulli formula", ok,
            f"{len(reps)} cases, worst residual 2^{worst:.1f}; (3,4,1) exact value {special.details['exact_value']}", t)


def test_criterion_04_gauss_sums():
    t = time.perf_counter()
    discs = (-3, -4, -7, -8, -11, -15, -19, -20)
    reps = [check_gauss_sum(d) for d in discs]
    ok = all(r.passed and r.mode == "exact" for r in reps)
    _record(4, "Gauss sums", ok, f"tau^2 = D and twisted sums exact for D in {list(discs)}", t)


# every finite abelian group of order <= 6, as products of cyclic factors
GROUPS_UP_TO_6 = [[], [2], [3], [4], [2, 2], [5], [6]]


def test_criterion_05_dedekind():
    t = time.perf_counter()
    reps = [check_dedekind_determinant(q, k, 320) for q in (3, 4, 5, 8) for k in (2, 3)]
    devs = [r.details["relative_deviation_log2"] for r in reps]
    numeric_ok = all(r.passed and r.details["det_nonzero"] for r in reps) and max(devs) <= -200
    rng = random.Random(5)
    generic = []
    for orders in GROUPS_UP_TO_6:
        size = math.prod(orders) if orders else 1
        for _ in range(3):
            vals = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(size)]
            generic.append(check_dedekind_generic(orders, vals))
    generic_ok = all(r.passed for r in generic)
    _record(5, "Dedekind determinant", numeric_ok and generic_ok,
            f"worst relative deviation 2^{max(devs):.1f} (need <= 2^-200), det != 0; "
            f"{len(generic)} exact generic checks pass: {generic_ok}", t)


def test_criterion_06_degenerate():
    t = time.perf_counter()
    worst = -math.inf
    brackets_zero = True
    for q in (2, 3, 4, 6):
        for k in (2, 3):
            f = degenerate_function(q, k, 1)
            brackets_zero &= all(b == 0 for _, b, _ in unit_decomposition(f, k, 64))
            worst = max(worst, l_value(f, k, 256).upper_log2)
    ok = worst <= -240 and brackets_zero
    _record(6, "degenerate periodic function", ok,
            f"|L(k,f)| <= 2^{worst:.1f} (need <= 2^-240); all brackets zero: {brackets_zero}", t)


def test_criterion_07_fourier():
    t = time.perf_counter()
    rng = random.Random(7)
    trips = 0
    for _ in range(100):
        q = rng.randint(1, 24)
        f = PeriodicFunction(q, tuple(Fraction(rng.randint(-50, 50), rng.randint(1, 12)) for _ in range(q)))
        assert fourier_inverse(fourier_transform(f)) == f
        trips += 1
    twists = 0
    for q in range(1, 13):
        f = PeriodicFunction(q, tuple(Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(q)))
        hat = fourier_transform(f)
        for h in coprime_residues(q):
            assert fourier_transform(twist(f, h)) == hat.galois(h)
            twists += 1
    _record(7, "Fourier machinery", True, f"{trips} exact round trips (q <= 24), {twists} twist/Galois checks (q <= 12)", t)


def test_criterion_08_stuffle():
    t = time.perf_counter()
    reps = [check_stuffle(d, 256) for d in (1, 2)]
    worst = _worst(reps)
    z22_ok = _within(mzv([2, 2], 256), mpmath.pi**4 / 120, mpmath.mpf(10) ** -60)
    ok = worst <= -180 and z22_ok
    _record(8, "stuffle / MZV", ok, f"worst residual 2^{worst:.1f} (need <= 2^-180); zeta(2,2)=pi^4/120 within 1e-60: {z22_ok}", t)


def test_criterion_09_even_zeta():
    t = time.perf_counter()
    worst = -math.inf
    for m in range(1, 11):
        numeric = riemann_zeta(2 * m, 256) / pi_power(2 * m, 256)
        worst = max(worst, (numeric - even_zeta_exact(m)).upper_log2)
    ok = worst <= -240
    _record(9, "even-zeta rationality", ok, f"m = 1..10, worst |numeric - exact| <= 2^{worst:.1f} (need <= 2^-240)", t)


def test_criterion_10_relation_controls():
    t = time.perf_counter()
    r1 = find_relation(RelationQuery.from_functions(
        ["zeta(2)", "zeta(2,1/2)"],
        [lambda p: riemann_zeta(2, p), lambda p: hurwitz_zeta(2, Fraction(1, 2), p)], 10**3, 256))
    r2 = find_relation(RelationQuery.from_functions(
        ["zeta(2,2)", "pi^4"], [lambda p: mzv([2, 2], p), lambda p: pi_power(4, p)], 10**3, 256))
    controls = r1.found and r1.coefficients == [3, -1] and r2.found and r2.coefficients == [120, -1]
    detections = []
    sets = 0
    for q in range(3, 17):
        for k in range(1, 5):
            rep = okada_set_evidence(k, q, 10**6, 256)
            sets += 1
            if not rep["consistent"]:
                detections.append((k, q, rep["search"]["relations"]))
    ok = controls and not detections
    _record(10, "relation detector controls", ok,
            f"found {r1.coefficients} and {r2.coefficients}; {sets} Okada sets, detections: {detections or 'none'}", t)


def test_criterion_11_dimension_consistency():
    t = time.perf_counter()
    summary = []
    ok = True
    for q in (3, 4, 5):
        rep = strong_cm_dimension_evidence(3, q, 10**6, 300)
        lower = rep["proven_bounds"][0]
        plus_free = rep["plus_split_supports_lower_bound"]
        ok &= plus_free and rep["consistent"] and rep["evidence_dimension"] >= lower
        summary.append(f"q={q}: evidence dim {rep['evidence_dimension']} >= {lower}, plus split relation-free {plus_free}")
    elapsed = time.perf_counter() - t
    ok &= elapsed < 600
    _record(11, "dimension-evidence consistency", ok, "; ".join(summary), t)


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
