"""Statistical mechanics of the log-dispersion gas.

One-particle energies are eps_n = log(a n/R + 1)/a, so e^(-beta eps_n) =
(a n/R + 1)^(-beta/a). The n = 0 mode has zero energy; grand partition
functions run over n >= 1 (at R = a these are the factors n + 1 >= 2 of the
multiplicative partition function). Counting and thermodynamics follow.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, asdict
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .dirichlet import LerchArgs, hurwitz_zeta, lerch_phi
from .errors import ConvergenceError, DivergenceError, DomainError, PoleError, ResourceError
from .greens import Geometry, SPoint, green_case4
from .numerics import as_complex, cpow

STATISTICS = ("fermi", "bose")


@dataclass(frozen=True)
class ThermoState:
    f: float
    U: float
    P: float
    N: float


@dataclass(frozen=True)
class FactorizationReport:
    n: int
    mode: str
    count: int
    listing: tuple[tuple[int, ...], ...]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["listing"] = [list(m) for m in self.listing]
        return d


def one_particle_z(beta: float, geom: Geometry) -> float:
    """(R/a)^(beta/a) zeta_H(beta/a, R/a), continued past the pole at beta = a."""
    if beta == geom.a:
        raise PoleError("one-particle partition function has a pole at beta = a")
    ratio = geom.R / geom.a
    b = beta / geom.a
    return (ratio ** b * hurwitz_zeta(b, ratio)).real


# ------------------------------------------------------------ tail sums

def _sum_with_tail(f: Callable[[np.ndarray], np.ndarray], start: int, n_direct: int) -> float:
    """sum_{n >= start} f(n) for smooth, eventually monotone f.

    Direct sum up to N = start + n_direct - 1, then Euler-Maclaurin for the
    rest: int_N^inf f + f(N)/2 - f'(N)/12 + f'''(N)/720, derivatives by
    finite differences on the scale of N.
    """
    n_last = start + n_direct
    n = np.arange(start, n_last, dtype=float)
    head = math.fsum(f(n)[::-1])
    N = float(n_last)
    tail_int, err = quad(lambda v: float(f(np.array([v]))[0]), N, math.inf,
                         epsabs=0.0, epsrel=1e-13, limit=500)
    h = N / 50.0
    p = f(np.array([N - 2 * h, N - h, N, N + h, N + 2 * h]))
    d1 = (p[0] - 8 * p[1] + 8 * p[3] - p[4]) / (12 * h)
    d3 = (-p[0] + 2 * p[1] - 2 * p[3] + p[4]) / (2 * h ** 3)
    return head + tail_int + p[2] / 2 - d1 / 12 + d3 / 720


def _levels(geom: Geometry) -> Callable[[np.ndarray], np.ndarray]:
    ratio = geom.a / geom.R
    return lambda n: ratio * n + 1.0


def grand_log_z(statistics: str, beta: float, mu: float = 0.0, geom: Geometry | None = None,
                method: str = "series", terms: int | None = None, tol: float = 1e-17) -> float:
    """log of the grand partition function over modes n >= 1.

    series: sum_m (+-)^(m+1)/m e^(beta mu m) (R/a)^(beta m/a) zeta_H(beta m/a, R/a + 1)
    (the + sign pattern alternates for fermi). direct_product: the mode sum
    of log(1 +- e^(-beta(eps_n - mu))) with an Euler-Maclaurin tail.
    """
    geom = geom or Geometry(1.0, 1.0)
    if statistics not in STATISTICS:
        raise DomainError(f"statistics must be one of {STATISTICS}")
    if method not in ("series", "direct_product"):
        raise DomainError("method must be 'series' or 'direct_product'")
    a, R = geom.a, geom.R
    if beta <= a:
        raise DivergenceError(f"grand partition function diverges for beta <= a (beta={beta})")
    b = beta / a
    ratio = R / a
    if statistics == "bose" and (1 + 1 / ratio) ** -b * math.exp(beta * mu) >= 1:
        raise DivergenceError("bose occupation of the lowest mode exceeds one")
    if method == "series":
        if terms is not None and terms < 1:
            raise DomainError("terms must be >= 1")
        total = 0.0
        m_cap = terms if terms is not None else 10_000
        for m in range(1, m_cap + 1):
            term = (ratio ** (b * m) * hurwitz_zeta(b * m, ratio + 1.0)).real
            term *= math.exp(beta * mu * m) / m
            if statistics == "fermi" and m % 2 == 0:
                term = -term
            total += term
            if terms is None and abs(term) < tol * abs(total):
                return total
        if terms is None:
            raise ConvergenceError("series in m did not converge")
        return total
    lev = _levels(geom)
    fug = math.exp(beta * mu)
    sgn = 1.0 if statistics == "fermi" else -1.0

    def f(n):
        u = fug * lev(n) ** -b
        return sgn * np.log1p(sgn * u)

    return _sum_with_tail(f, 1, terms or 4000)


def thermodynamics(beta: float, geom: Geometry | None = None, terms: int = 4000,
                   alpha: float = 0.0) -> ThermoState:
    """Free energy, energy, pressure and occupation of the Fermi gas.

    f = log Z / beta, U = -d log Z/d beta, P = (1/2 pi) dU/dR (volume 2 pi R),
    N = sum_{n>=0} 1/(e^alpha + (a n/R + 1)^(beta/a)). ``alpha`` is the
    fugacity exponent, 0 by default.
    """
    geom = geom or Geometry(1.0, 1.0)
    a, R = geom.a, geom.R
    if beta <= a:
        raise DivergenceError(f"thermodynamic sums diverge for beta <= a (beta={beta})")
    b = beta / a
    lev = _levels(geom)
    logz = _sum_with_tail(lambda n: np.log1p(lev(n) ** -b), 1, terms)

    def u_term(n):
        v = lev(n)
        return np.log(v) / (1.0 + v ** b) / a

    def p_term(n):
        v = lev(n)
        return n / (v * (1.0 + v ** b)) * (b * np.log(v) / (1.0 + v ** -b) - 1.0)

    def n_term(n):
        return 1.0 / (math.exp(alpha) + lev(n) ** b)

    with np.errstate(over="ignore"):  # v**b overflows harmlessly to inf when cold
        U = _sum_with_tail(u_term, 1, terms)
        P = _sum_with_tail(p_term, 1, terms) / (2 * math.pi * R * R)
        N = _sum_with_tail(n_term, 0, terms)
    return ThermoState(f=logz / beta, U=U, P=P, N=N)


def thermal_green(x: float, t: float, sigma: float, beta: float, geom: Geometry | None = None,
                  m_max: int = 3) -> complex:
    """sum_{|m| <= m_max} (-1)^m g4(x, s_m), s_m = (sigma + m beta + i t)/a.

    At R = a, x = t = 0 this is sum_m (-1)^m zeta((sigma + m beta)/a).
    """
    geom = geom or Geometry(1.0, 1.0)
    if m_max < 0:
        raise DomainError("m_max must be >= 0")
    a = geom.a
    at_origin = x % geom.L == 0
    total = 0j
    for m in range(-m_max, m_max + 1):
        sig = sigma + m * beta
        if at_origin and t == 0 and abs(sig - a) < 1e-14 * a:
            raise PoleError(f"thermal term m={m} hits the pole: beta = (a - sigma)/m")
        try:
            term = green_case4(x, SPoint(t, sig, a), geom)
        except PoleError as e:
            raise PoleError(f"thermal term m={m} hits the pole: beta = (a - sigma)/m") from e
        total += term if m % 2 == 0 else -term
    return total


# ------------------------------------------------------------ counting

def _factorizations(n: int, min_factor: int, distinct: bool) -> list[list[int]]:
    out = []
    d = min_factor
    while d * d <= n:
        if n % d == 0:
            nxt = d + 1 if distinct else d
            for rest in _factorizations(n // d, nxt, distinct):
                out.append(rest + [d])
        d += 1
    if n >= min_factor:
        out.append([n])
    return out


def count_factorizations(n: int, mode: str = "distinct", ceiling: int = 10**6) -> FactorizationReport:
    """Unordered factorizations of n into factors >= 2.

    mode "distinct" forbids repeated factors (Fermi states), "with_repeats"
    allows them (Bose states). Multisets are listed in descending order.
    """
    if mode not in ("distinct", "with_repeats"):
        raise DomainError("mode must be 'distinct' or 'with_repeats'")
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise DomainError("n must be an integer >= 2")
    if n > ceiling:
        raise ResourceError(f"n={n} exceeds the enumeration ceiling {ceiling}")
    raw = _factorizations(int(n), 2, mode == "distinct")
    listing = sorted((tuple(sorted(m, reverse=True)) for m in raw),
                     key=lambda m: (-len(m), [-f for f in m]))
    return FactorizationReport(int(n), mode, len(listing), tuple(listing))


def multiplicative_z(beta: float, statistics: str = "fermi", n_max: int = 500) -> float:
    """sum_{n=1}^{n_max} (number of factorizations of n) n^(-beta/a) at a = R = 1."""
    mode = "distinct" if statistics == "fermi" else "with_repeats"
    total = 1.0
    for n in range(2, n_max + 1):
        total += count_factorizations(n, mode).count * n ** -beta
    return total


# ------------------------------------------------------------ oscillator

def log_oscillator_z(beta, mu=0.0, a_omega: float = 2.0, a: float = 1.0) -> complex:
    """sum_n (a omega (n + 1/2) + 1)^(-beta/a) e^(-mu n).

    Equals (a omega)^(-beta/a) phi(x, beta/a, 1/(a omega) + 1/2) with
    e^(2 pi i x) = e^(-mu). Re(mu) = 0 uses the Lerch continuation,
    Re(mu) > 0 the geometrically convergent sum.
    """
    beta = as_complex(beta)
    mu = as_complex(mu)
    if not (a > 0 and a_omega > 0):
        raise DomainError("a and a*omega must be positive")
    if mu.real < 0:
        raise DomainError("Re(mu) must be >= 0")
    s = beta / a
    alpha = 1.0 / a_omega + 0.5
    pref = cpow(a_omega, -s)
    if mu.real == 0:
        x = -mu.imag / (2 * math.pi)
        if (x % 1.0) == 0 and s == 1:
            raise PoleError("oscillator partition function has a pole at beta = a when mu = 0")
        return pref * lerch_phi(LerchArgs(x, s, alpha))
    total = 0j
    n = 0
    while True:
        term = cmath.exp(-s * math.log(n + alpha) - mu * n)
        total += term
        if abs(term) < 1e-17 * abs(total) or n > 10**6:
            break
        n += 1
    return pref * total


def oscillator_period(q0: float, p0: float, m: float, omega: float, a: float) -> float:
    """Classical period (2 pi/omega) e^(aE), e^(aE) = a(p0^2/2m + m omega^2 q0^2/2) + 1."""
    if not (m > 0 and omega > 0 and a >= 0):
        raise DomainError("m, omega must be positive and a non-negative")
    return 2 * math.pi / omega * (a * (p0 * p0 / (2 * m) + m * omega ** 2 * q0 * q0 / 2) + 1.0)
