"""Critical-line zeros, theta-integral and duality identities."""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, asdict
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .cli.table import ordered_map
from .dirichlet import LerchArgs, dirichlet_function, lerch_phi, riemann_zeta, theta_combination
from .errors import DomainError, ToleranceError
from .greens import Geometry, SPoint
from .numerics import QuadratureSpec, adaptive_integrate, cpow, gamma, log_gamma

LOG_PI = math.log(math.pi)


@dataclass(frozen=True)
class ZeroRecord:
    t: float
    refinement_error: float
    index: int

    def to_dict(self) -> dict:
        return {"index": self.index, "t": self.t, "err": self.refinement_error}


def riemann_siegel_theta(t: float) -> float:
    """Im log Gamma(1/4 + i t/2) - (t/2) log pi, continuous in t."""
    return log_gamma(complex(0.25, t / 2)).imag - t / 2 * LOG_PI


def hardy_function(t: float) -> float:
    """Z(t) = e^(i theta(t)) zeta(1/2 + i t), real on the critical line."""
    z = cmath.exp(1j * riemann_siegel_theta(t)) * riemann_zeta(complex(0.5, t))
    if abs(z.imag) > 1e-10 * max(1.0, abs(z.real)):
        raise ToleranceError("Hardy function left the real axis", z.real, abs(z.imag))
    return z.real


def _bisect(t0: float, t1: float, z0: float, z1: float) -> tuple[float, float]:
    root = brentq(hardy_function, t0, t1, xtol=1e-12, rtol=4 * np.finfo(float).eps)
    # brentq stops once the bracket is below xtol; report that width
    return root, max(1e-12, 4 * np.finfo(float).eps * abs(root))


def find_zeros(t_lo: float, t_hi: float, step: float = 0.05, threads: int | None = None,
               check_count: bool = True) -> list[ZeroRecord]:
    """Sign changes of the Hardy function on a step grid, refined by Brent bisection.

    Zeros whose pair falls inside one grid cell are missed; the zero count
    from the argument principle flags that with a RuntimeWarning.
    """
    if not 0 <= t_lo < t_hi:
        raise DomainError("need 0 <= t_lo < t_hi")
    if not 0 < step <= 0.5:
        raise DomainError("step must be in (0, 0.5]")
    n = max(1, int(math.ceil((t_hi - t_lo) / step)))
    grid = np.linspace(t_lo, t_hi, n + 1)
    zs = ordered_map(hardy_function, list(grid), threads)
    brackets = [(grid[i], grid[i + 1], zs[i], zs[i + 1]) for i in range(n)
                if zs[i] == 0.0 or zs[i] * zs[i + 1] < 0]
    refined = ordered_map(lambda b: _bisect(*b) if b[2] != 0.0 else (b[0], 0.0), brackets, threads)
    out = [ZeroRecord(float(t), float(err), i + 1) for i, (t, err) in enumerate(refined)]
    if check_count:
        expected = _count_between(t_lo, t_hi)
        if expected is not None and expected != len(out):
            warnings.warn(f"zero count {expected} disagrees with {len(out)} located zeros "
                          "(close pair missed; reduce step)", RuntimeWarning, stacklevel=2)
    return out


def _count_between(t_lo: float, t_hi: float) -> int | None:
    try:
        lo = zero_count(t_lo) if t_lo > 0 else 0
        return zero_count(t_hi) - lo
    except DomainError:
        return None


def _arg_zeta_on_line(T: float, step: float = 0.01) -> float:
    """arg zeta(1/2 + iT), continued from s = 2 along 2 -> 2 + iT -> 1/2 + iT."""
    # On Re s = 2, |zeta - 1| < 1, so the principal argument is the continuous one.
    arg = cmath.phase(riemann_zeta(complex(2.0, T)))
    n = int(math.ceil(1.5 / step))
    prev = arg
    for sig in np.linspace(2.0, 0.5, n + 1)[1:]:
        ph = cmath.phase(riemann_zeta(complex(sig, T)))
        d = (ph - prev + math.pi) % (2 * math.pi) - math.pi
        arg += d
        prev = ph
    return arg


def zero_count(T: float) -> int:
    """Number of zeros with 0 < Im rho <= T: theta(T)/pi + 1 + arg zeta(1/2 + iT)/pi."""
    if T <= 0:
        raise DomainError("T must be positive")
    if abs(riemann_zeta(complex(0.5, T))) < 1e-9:
        raise DomainError(f"T={T} sits on a zero ordinate")
    val = riemann_siegel_theta(T) / math.pi + 1 + _arg_zeta_on_line(T) / math.pi
    return int(round(val))


# ------------------------------------------------------------ theta integral

class ThetaIntegral(NamedTuple):
    quadrature: complex
    closed_form: complex
    error: float


def theta_integral_closed(s) -> complex:
    """int_0^inf C^(s/2-1)(theta3 - theta2 - theta4) dC = 2 (2^s - 1)(2^(1-s) - 1) pi^(-s/2) Gamma(s/2) zeta(s).

    (2^(1-s) - 1) zeta = -eta keeps the value finite at s = 1.
    """
    s = complex(s)
    eta = dirichlet_function("eta", s)
    return -2 * (cpow(2.0, s) - 1) * cpow(math.pi, -s / 2) * gamma(s / 2) * eta


def theta_integral_zeta(s, spec: QuadratureSpec | None = None) -> ThetaIntegral:
    """Quadrature of the theta combination in the strip, against its closed form."""
    s = complex(s)
    if s.real <= 0:
        raise DomainError("theta integral converges only for Re(s) > 0")
    spec = spec or QuadratureSpec(abs_tol=1e-12, rel_tol=1e-10, max_refinements=2000)

    def g(phi: float) -> complex:
        if abs(phi) > 700.0:
            return 0j
        fc = theta_combination(math.exp(phi))
        return cmath.exp(s * phi / 2) * fc if fc != 0.0 else 0j

    res = adaptive_integrate(g, -math.inf, math.inf, spec)
    return ThetaIntegral(res.value, theta_integral_closed(s), res.error)


# ------------------------------------------------------------ duality

@dataclass(frozen=True)
class DualityMap:
    R1: float
    x1: float
    R2: float
    x2: float
    sigma_rule: str = "sigma' = sigma'' = a - sigma, t' = t'' = -t"

    def to_dict(self) -> dict:
        return asdict(self)


def duality_map(x: float, geom: Geometry) -> DualityMap:
    """Primed and double-primed circles: R' = a x/(2 pi R), x' = x, R'' = a - R', x'' = 2 pi R - x."""
    R, a = geom.R, geom.a
    if not 0 < x < geom.L:
        raise DomainError("x must lie in (0, 2 pi R)")
    r1 = a * x / (2 * math.pi * R)
    return DualityMap(R1=r1, x1=x, R2=a - r1, x2=2 * math.pi * R - x)


def duality_residual(x: float, pt: SPoint, geom: Geometry) -> float:
    """|LHS - RHS| of the circle duality.

    LHS = sum_n (n + R/a)^(s-1) e^(i n x/R). RHS = (2 pi)^(-s) Gamma(s) times
    e^(i pi s/2 - i x/a) sum_n (n + R'/a)^(-s) e^(-i n x'/R') plus
    e^(-i pi s/2 + 2 pi i (R/a)(1 - R'/a)) sum_n (n + 1 - R'/a)^(-s) e^(i n 2 pi R/a),
    with R'/a = x/(2 pi R).
    """
    R, a = geom.R, geom.a
    if R > a:
        raise DomainError("duality pairing needs R <= a")
    d = duality_map(x, geom)
    s = pt.s
    ratio = R / a
    u = d.R1 / a  # = x/(2 pi R)
    lhs = lerch_phi(LerchArgs(x / geom.L, 1 - s, ratio))
    pref = (2 * math.pi) ** (-s) * gamma(s)
    t1 = cmath.exp(1j * math.pi * s / 2 - 1j * x / a) * lerch_phi(LerchArgs(-ratio, s, u))
    t2 = cmath.exp(-1j * math.pi * s / 2 + 2j * math.pi * ratio * (1 - u)) * lerch_phi(LerchArgs(ratio, s, 1 - u))
    return abs(lhs - pref * (t1 + t2))
