"""String-modified Dirichlet series built from q-expansion degeneracies."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import DivergenceError, DomainError
from .greens import Geometry, SPoint
from .numerics import QSeries, as_complex, cpow, eta_product_expand, gamma, incomplete_gamma_upper

MODELS = ("heterotic12", "ramanujan_tau", "open_fermionic")


@dataclass(frozen=True)
class DegeneracySpec:
    """Which string trace to expand and to what power of q.

    For open_fermionic the expansion runs in q^(1/2), so ``order`` q-powers
    give 2*order + 1 coefficients.
    """

    model: str
    order: int

    def __post_init__(self):
        if self.model not in MODELS:
            raise DomainError(f"model must be one of {MODELS}")
        if self.order < 0:
            raise DomainError("order must be >= 0")


def _spread(series: QSeries, factor: int) -> QSeries:
    """Re-express a series in q^(step/factor), inserting zeros."""
    out = [0] * (factor * series.truncation_order + 1)
    out[::factor] = series.coeffs
    return QSeries(tuple(out), series.step / factor)


def degeneracies(spec: DegeneracySpec) -> QSeries:
    """Exact coefficients rho(N) of the chosen trace."""
    n = spec.order
    if spec.model == "heterotic12":
        return eta_product_expand("plus", 24, False, n, leading_q=True)
    if spec.model == "ramanujan_tau":
        return eta_product_expand("minus", 24, False, n, leading_q=True)
    num = eta_product_expand("plus", 8, True, 2 * n)
    den = _spread(eta_product_expand("minus", 8, False, n), 2)
    return num / den


def ramanujan_tau(n_max: int) -> list[int]:
    """tau(0..n_max), tau(0) = 0."""
    return list(degeneracies(DegeneracySpec("ramanujan_tau", n_max)).coeffs)


class SeriesValue(NamedTuple):
    value: complex
    tail: float
    bound: float


def _tau_sum(tau: np.ndarray, s: complex, upto: int) -> complex:
    n = np.arange(1, upto + 1, dtype=float)
    return complex(np.sum(tau[1 : upto + 1] * np.exp(-s * np.log(n))))


def ramanujan_F(s, n_max: int = 200) -> SeriesValue:
    """Truncated F(s) = sum_{n <= n_max} tau(n) n^(-s).

    ``bound`` is rigorous, from Deligne's |tau(n)| <= d(n) n^(11/2) and
    d(n) <= 2 sqrt(n): 2 n_max^(7 - sigma)/(sigma - 7). ``tail`` is the
    working estimate: the tau signs cancel like a random walk, so the tail
    falls as n^(6 - sigma) and is extrapolated from the last halving,
    |F_n - F_(n/2)|/(2^(sigma - 6) - 1).
    """
    s = as_complex(s)
    if n_max < 10:
        raise DomainError("n_max must be >= 10")
    if s.real <= 6.5:
        raise DivergenceError("Dirichlet series for F(s) needs Re(s) > 13/2")
    tau = np.array(ramanujan_tau(n_max), dtype=float)
    val = _tau_sum(tau, s, n_max)
    half = _tau_sum(tau, s, n_max // 2)
    sig = s.real
    bound = 2 * n_max ** (7 - sig) / (sig - 7) if sig > 7 else math.inf
    tail = min(bound, abs(val - half) / (2 ** (sig - 6) - 1))
    return SeriesValue(val, tail, bound)


def ramanujan_lambda(s, n_max: int = 40) -> complex:
    """Completed (2 pi)^(-s) Gamma(s) F(s), valid for every s.

    sum_n tau(n) [(2 pi n)^(-s) Gamma(s, 2 pi n) + (2 pi n)^(s-12) Gamma(12 - s, 2 pi n)],
    from splitting the Mellin integral of the discriminant at y = 1.
    """
    s = as_complex(s)
    tau = ramanujan_tau(n_max)
    total = 0j
    for n in range(1, n_max + 1):
        x = 2 * math.pi * n
        total += tau[n] * (cpow(x, -s) * incomplete_gamma_upper(s, x)
                           + cpow(x, s - 12) * incomplete_gamma_upper(12 - s, x))
    return total


def ramanujan_functional_residual(s=8.0, n_max: int = 200) -> tuple[float, float]:
    """|(2 pi)^(-s) Gamma(s) F(s) - Lambda(12 - s)| with F truncated; returns (residual, tolerance).

    The tolerance propagates the truncation bound of F through the prefactor.
    """
    s = as_complex(s)
    F = ramanujan_F(s, n_max)
    pref = cpow(2 * math.pi, -s) * gamma(s)
    lhs = pref * F.value
    rhs = ramanujan_lambda(12 - s)
    return abs(lhs - rhs), abs(pref) * F.bound


class StringSeries(NamedTuple):
    value: complex
    n_tail: float
    last_column: float


def string_green_series(pt: SPoint, geom: Geometry, degeneracy: DegeneracySpec | QSeries,
                        alpha_prime: float = 1.0, A: float = 0.0, n_max: int = 200,
                        N_max: int | None = None) -> StringSeries:
    """sum_{n=0}^{n_max} sum_N rho(N) ((a (n + A)/R)^2 + a^2 N/alpha')^(-s/2), s = (sigma + i t)/a.

    ``degeneracy`` is a model spec or an explicit QSeries in integer powers
    of q. The n-direction tail is bounded by the integral of the last row's
    power law; the N sum is a hard truncation (degeneracies grow faster than
    the weights decay), so the magnitude of its last column is reported.
    """
    if alpha_prime <= 0:
        raise DomainError("alpha' must be positive")
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    if isinstance(degeneracy, DegeneracySpec):
        rho_series = degeneracies(degeneracy)
    else:
        rho_series = degeneracy
    if rho_series.step != Fraction(1):
        raise DomainError("string series needs integer-power degeneracies")
    if N_max is None:
        N_max = rho_series.truncation_order
    if N_max > rho_series.truncation_order:
        raise DomainError("N_max exceeds the degeneracy expansion order")
    s = pt.s
    a, R = geom.a, geom.R
    sigma = s.real
    if sigma <= 0 and pt.t != 0:
        raise DivergenceError("undamped oscillatory series (sigma = 0)")
    rho = np.array(rho_series.coeffs[: N_max + 1], dtype=float)
    Ns = np.nonzero(rho)[0]
    if len(Ns) == 0:
        return StringSeries(0j, 0.0, 0.0)
    n = np.arange(0, n_max + 1, dtype=float)
    base = (a * (n[:, None] + A) / R) ** 2 + a * a * Ns[None, :] / alpha_prime
    if np.any(base == 0):
        raise DomainError("zero-energy mode: the (n, N) = (-A, 0) term is singular")
    logb = np.log(base)
    terms = rho[Ns][None, :] * np.exp(-s / 2 * logb)
    value = complex(terms.sum())
    last_row = float(np.abs(terms[-1]).sum())
    p = sigma / a  # row magnitudes fall like n^(-sigma/a)
    n_tail = last_row * n_max / (p - 1) if p > 1 else math.inf
    last_col = float(np.abs(terms[:, -1]).sum()) if 0 < N_max == Ns[-1] else 0.0
    return StringSeries(value, n_tail, last_col)
