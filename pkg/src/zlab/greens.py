"""Two-point functions of the log-dispersion fermion (and its scalar cousin).

All amplitudes are the 2 pi-stripped lowercase g. Times enter through
s = (sigma + i t)/a, the mixing length sigma acting as imaginary time.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dirichlet import DEFAULT_POLICY, EvalPolicy, LerchArgs, hurwitz_zeta, lerch_phi, riemann_zeta
from .errors import DomainError, PoleError
from .numerics import as_complex, cexpm1, cpow, gamma, incomplete_gamma_upper, log_gamma

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Geometry:
    """Circle of radius R, short-distance scale a and gauge shift R q A1."""

    R: float
    a: float
    gauge_shift: float = 0.0

    def __post_init__(self):
        if not (self.R > 0 and self.a > 0):
            raise DomainError("R and a must be positive")

    @property
    def L(self) -> float:
        return TWO_PI * self.R

    @property
    def alpha(self) -> float:
        return self.R / self.a + self.gauge_shift


@dataclass(frozen=True)
class SPoint:
    """Time t and mixing length sigma; sigma < 0 is accepted as analytic continuation."""

    t: float
    sigma: float
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError("a must be positive")
        if not (math.isfinite(self.t) and math.isfinite(self.sigma)):
            raise DomainError("t and sigma must be finite")

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t) / self.a

    @classmethod
    def from_s(cls, s, a: float = 1.0) -> "SPoint":
        s = as_complex(s)
        return cls(t=s.imag * a, sigma=s.real * a, a=a)


def green_case1(x: float, pt: SPoint) -> complex:
    """Linear dispersion: g1 = i/(x - t + i sigma)."""
    den = complex(x - pt.t, pt.sigma)
    if den == 0:
        raise PoleError("g1 is singular on the light cone x = t at sigma = 0")
    return 1j / den


def green_case2(x: float, pt: SPoint, geom: Geometry) -> complex:
    """Linear dispersion on the circle: (1/R)/(1 - e^(i(x - t + i sigma)/R))."""
    z = complex(x - pt.t, pt.sigma) / geom.R
    den = -cexpm1(1j * z)
    if pt.sigma == 0 and abs(den) < 1e-13:
        raise PoleError("g2 is singular where x - t is a multiple of 2 pi R at sigma = 0")
    return 1.0 / (geom.R * den)


def green_case3(x: float, pt: SPoint) -> complex:
    """Log dispersion E = log(ap + 1)/a on the line.

    g3 = (1/a) e^(-ix/a) (-ix/a)^(s-1) Gamma(1 - s, -ix/a).
    """
    if x == 0:
        raise DomainError("g3 needs x != 0")
    a = pt.a
    s = pt.s
    w = -1j * x / a
    return cmath.exp(-1j * x / a + (s - 1) * cmath.log(w)) * incomplete_gamma_upper(1 - s, w) / a


def green_case3p(x: float, pt: SPoint) -> complex:
    """Pure log dispersion E = log(ap)/a: (1/a)(-ix/a)^(s-1) e^(-ix/a) Gamma(1 - s)."""
    if x == 0:
        raise DomainError("g3' needs x != 0")
    a = pt.a
    s = pt.s
    return cmath.exp((s - 1) * cmath.log(-1j * x / a) - 1j * x / a) * gamma(1 - s) / a


def green_case4(x: float, pt: SPoint, geom: Geometry,
                policy: EvalPolicy = DEFAULT_POLICY) -> complex:
    """Log dispersion on the circle: (1/R)(R/a)^s phi(x/(2 pi R), s, R/a)."""
    s = pt.s
    ratio = geom.R / geom.a
    phi = lerch_phi(LerchArgs(x / geom.L, s, ratio), policy)
    return cpow(ratio, s) * phi / geom.R


def green_gauge(x: float, pt: SPoint, geom: Geometry,
                policy: EvalPolicy = DEFAULT_POLICY) -> complex:
    """Circle amplitude with a constant gauge potential.

    (1/R)(R/a)^s e^(i x A/R) phi(x/(2 pi R), s, R/a + A) with A = geom.gauge_shift.
    """
    alpha = geom.alpha
    if not alpha > 0:
        raise DomainError("shifted alpha must be positive")
    s = pt.s
    ratio = geom.R / geom.a
    phi = lerch_phi(LerchArgs(x / geom.L, s, alpha), policy)
    phase = cmath.exp(1j * x * geom.gauge_shift / geom.R) if geom.gauge_shift else 1.0
    return cpow(ratio, s) * phase * phi / geom.R


def green_case4p(x: float, s, geom: Geometry) -> complex:
    """Circle amplitude at t + ia from the (E, p) integral form.

    (1/a) e^(2 pi i R/a) e^(-ix/a) (2 pi R/a)^(s-1) e^(i pi (s-1)/2)
        Gamma(1 - s) phi(R/a, 1 - s, 1 - x/(2 pi R))
    """
    s = as_complex(s)
    a, R = geom.a, geom.R
    alpha = 1.0 - x / geom.L
    if not alpha > 0:
        raise DomainError("need x < 2 pi R")
    phi = lerch_phi(LerchArgs(R / a, 1 - s, alpha))
    pref = cmath.exp(2j * math.pi * R / a - 1j * x / a + (s - 1) * math.log(TWO_PI * R / a)
                     + 1j * math.pi * (s - 1) / 2)
    return pref * gamma(1 - s) * phi / a


def closed_form_case4p(x: str, s, a: float, variant: str = "derived") -> complex:
    """Closed forms of the t + ia circle amplitude at R = a, x in {zero, pi_a}.

    variant="derived" reduces the integral form (green_case4p) with the zeta
    functional equation: x=0: zeta(s)/(1 - e^(-i pi s));
    x=pi a: eta(s)/(1 - e^(-i pi s)), both over a.
    variant="printed" gives the printed endpoints zeta(s)/sin(pi s/2) and
    (1/2)(2^(1-s) - 1) zeta(s)/(1 - e^(i pi s)), both over a.
    """
    s = as_complex(s)
    if not a > 0:
        raise DomainError("a must be positive")
    if x not in ("zero", "pi_a"):
        raise DomainError("x must be 'zero' or 'pi_a'")
    if variant not in ("derived", "printed"):
        raise DomainError("variant must be 'derived' or 'printed'")
    if s == 1:
        raise PoleError("zeta pole at s = 1")
    z = riemann_zeta(s)
    if variant == "derived":
        den = -cexpm1(-1j * math.pi * s)
        if s.imag == 0 and s.real % 2 == 0:
            raise PoleError("1 - e^(-i pi s) vanishes at even integers")
        fac = 1.0 if x == "zero" else 1 - cpow(2.0, 1 - s)
        return fac * z / (den * a)
    if x == "zero":
        den = cmath.sin(math.pi * s / 2)
        if den == 0 or (s.imag == 0 and s.real % 2 == 0):
            raise PoleError("sin(pi s/2) vanishes")
        return z / (den * a)
    den = -cexpm1(1j * math.pi * s)
    if s.imag == 0 and s.real % 2 == 0:
        raise PoleError("1 - e^(i pi s) vanishes at even integers")
    return 0.5 * (cpow(2.0, 1 - s) - 1) * z / (den * a)


# ----------------------------------------------------------- periodization

class Periodized(NamedTuple):
    value: complex
    tail_estimate: float
    cutoff: int


def _terms(base: str, y: np.ndarray, pt: SPoint) -> np.ndarray:
    if base == "case1":
        return 1j / ((y - pt.t) + 1j * pt.sigma)
    a = pt.a
    s = pt.s
    if np.any(y == 0):
        raise DomainError("g3' needs x != 0")
    w = -1j * y / a
    return np.exp((s - 1) * np.log(w) - 1j * y / a) * (gamma(1 - s) / a)


def _ring(base: str, x: float, n: int, pt: SPoint, geom: Geometry) -> float:
    y = np.array([x - geom.L * n, x + geom.L * n])
    g = _terms(base, y, pt)
    return float(abs(g.sum())) if base == "case1" else float(np.abs(g).sum())


def _tail(base: str, x: float, n: int, pt: SPoint, geom: Geometry) -> float:
    """Power-law tail bound from the rings at n/2 and n."""
    if n < 2:
        return math.inf
    r1 = _ring(base, x, n // 2, pt, geom)
    r2 = _ring(base, x, n, pt, geom)
    if r2 == 0:
        return 0.0
    p = math.log(r1 / r2) / math.log(n / (n // 2))
    if p <= 1:
        return math.inf
    return n * r2 / (p - 1)


def periodize_with_tail(base: str, x: float, pt: SPoint, geom: Geometry,
                        cutoff: int | None = None, tail_tol: float = 1e-10,
                        max_cutoff: int = 10**6, zero_mode: bool = True) -> Periodized:
    """Sum of the line amplitude over the images x - 2 pi R n, |n| <= cutoff.

    base is "case1" (images pair up and the symmetric sum converges) or
    "case3p" (absolutely convergent for Re(s) < 0). Without a cutoff the
    smallest power of two whose tail bound is below tail_tol is used,
    capped at max_cutoff.

    The symmetric image sum of i/y is (i/2R) cot(y/2R), which differs from the
    circle mode sum by the constant 1/(2R): the n = 0 Fourier mode enters the
    mode sum fully and the symmetric sum only by half. With zero_mode the
    constant is restored so case1 reproduces green_case2.
    """
    if base not in ("case1", "case3p"):
        raise DomainError("base must be 'case1' or 'case3p'")
    if cutoff is None:
        cutoff = 64
        while cutoff < max_cutoff and _tail(base, x, cutoff, pt, geom) > tail_tol:
            cutoff *= 2
        cutoff = min(cutoff, max_cutoff)
    if cutoff < 0:
        raise DomainError("cutoff must be >= 0")
    n = np.arange(-cutoff, cutoff + 1, dtype=float)
    g = _terms(base, x - geom.L * n, pt)
    # pair n with -n before summing to keep the symmetric cancellation exact
    mid = cutoff
    total = g[mid] + np.sum(g[mid + 1:][::-1] + g[:mid])
    if base == "case1" and zero_mode:
        total += 0.5 / geom.R
    tail = _tail(base, x, cutoff, pt, geom) if cutoff else math.inf
    return Periodized(complex(total), tail, cutoff)


def periodize(base: str, x: float, pt: SPoint, geom: Geometry, cutoff: int | None = None,
              tail_tol: float = 1e-10, zero_mode: bool = True) -> complex:
    """Periodized value; warns when the tail estimate exceeds 1e-6."""
    res = periodize_with_tail(base, x, pt, geom, cutoff, tail_tol, zero_mode=zero_mode)
    if res.cutoff and res.tail_estimate > 1e-6:
        warnings.warn(f"periodization tail estimate {res.tail_estimate:.3g} exceeds 1e-6",
                      RuntimeWarning, stacklevel=2)
    return res.value


# ------------------------------------------------------------------ scalar

def scalar_two_point(x: float, pt: SPoint, geom: Geometry, variant: str = "dt_field",
                     n_max: int = 1000, include_zero_mode: bool = False) -> complex:
    """Truncated scalar mode sum sum_n w_n (a n/R + 1)^(-s) e^(i n x/R).

    variant "field": w_n = 1/(2 E_n) with E_n = log(a n/R + 1)/a, n >= 1.
    variant "dt_field": w_n = 1/2, n >= 0.
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    if variant not in ("field", "dt_field"):
        raise DomainError("variant must be 'field' or 'dt_field'")
    if variant == "field" and include_zero_mode:
        raise PoleError("the n = 0 scalar mode has E = 0 and a divergent 1/(2E) weight")
    s = pt.s
    start = 1 if variant == "field" else 0
    n = np.arange(start, n_max + 1, dtype=float)
    u = geom.a * n / geom.R + 1.0
    terms = np.exp(-s * np.log(u) + 1j * n * x / geom.R)
    if variant == "field":
        terms = terms * (geom.a / (2.0 * np.log(u)))
    else:
        terms = terms * 0.5
    return complex(np.sum(terms[::-1]))


def scalar_dt_closed(x: float, pt: SPoint, geom: Geometry) -> complex:
    """(1/2)(R/a)^s phi(x/(2 pi R), s, R/a), the resummed dt_field variant."""
    return 0.5 * geom.R * green_case4(x, pt, geom)


# ----------------------------------------------------- periodized waves

def _wave_raw(s: complex, x: float, geom: Geometry) -> complex:
    u = x / geom.L
    h1 = hurwitz_zeta(1 - s, u)
    h2 = hurwitz_zeta(1 - s, 1 - u)
    sign = cmath.exp(1j * math.pi * (s - 1))
    pref = cmath.exp((s - 1) * math.log(geom.L / geom.a) + (1 - s) * 1j * math.pi / 2)
    return pref * (h1 + sign * h2) * gamma(1 - s)


def periodized_wavefunction(pt: SPoint, x: float, geom: Geometry) -> complex:
    """Images of the pure-log wavefunction summed over the circle.

    (2 pi R/a)^(s-1) (zeta_H(1-s, u) + (-1)^(s-1) zeta_H(1-s, 1-u)) i^(1-s) Gamma(1-s),
    u = x/(2 pi R), principal branches. At positive integers s the Gamma pole
    is removable and the value is the symmetric limit, taken by Richardson
    extrapolation.
    """
    s = pt.s
    u = x / geom.L
    if not 0 < u < 1:
        raise DomainError("need 0 < x/(2 pi R) < 1")
    if s == 1:
        raise PoleError("s = 1 excluded")
    if s.imag == 0 and s.real >= 1 and s.real == round(s.real):
        def sym(h):
            return 0.5 * (_wave_raw(s + h, x, geom) + _wave_raw(s - h, x, geom))
        h = 1e-3
        # symmetric average has error c2 h^2 + c4 h^4
        a1, a2, a3 = sym(h), sym(h / 2), sym(h / 4)
        r1 = (4 * a2 - a1) / 3
        r2 = (4 * a3 - a2) / 3
        return (16 * r2 - r1) / 15
    return _wave_raw(s, x, geom)
