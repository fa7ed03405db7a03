from __future__ import annotations

import cmath
import math

import mpmath
import pytest

mpmath.mp.dps = 30


def mp_lerch(x: float, s: complex, alpha: float) -> complex:
    """Independent Lerch oracle: mpmath's lerchphi with z = e^(2 pi i x)."""
    z = mpmath.exp(2j * mpmath.pi * mpmath.mpf(x)) if x else mpmath.mpf(1)
    if x == 0:
        return complex(mpmath.zeta(s, alpha))
    return complex(mpmath.lerchphi(z, s, alpha))


def rel_err(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


@pytest.fixture
def lerch_oracle():
    return mp_lerch


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[2].rstrip(':'))):
            terminalreporter.write_line(line)
