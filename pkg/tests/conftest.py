import mpmath
import pytest
from gmpy2 import mpfr

mpmath.mp.dps = 110

# lines recorded by the acceptance module, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def oracle(text: str):
    return mpmath.mpf(text)


def assert_encloses(ball, expected, digits: int = 72):
    """The ball must contain the oracle value, allowing for the oracle's own rounding."""
    exp = mpmath.mpf(expected) if isinstance(expected, str) else mpmath.mpf(expected)
    mid = mpmath.mpf(str(mpfr(ball.mid, ball.mid.precision)))
    slack = mpmath.mpf(10) ** (-digits) * max(1, abs(exp))
    assert abs(mid - exp) <= mpmath.mpf(str(ball.rad)) + slack, (
        f"{mpmath.nstr(mid, 40)} +/- {float(ball.rad):.3g} misses {mpmath.nstr(exp, 40)}"
    )


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def isolated_cache(tmp_path, monkeypatch):
    path = tmp_path / "constants.jsonl"
    monkeypatch.setenv("CMSPACES_CACHE", str(path))
    return path
