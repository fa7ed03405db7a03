"""Transition probabilities between Boltzmann-mixed states.

The initial state carries energy weights e^(-sigma E/2); the detector sits
half way round the circle (x = L/2, or x = pi a on the line). Probabilities
are |amplitude|^2 divided by the squared state norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from .cli.table import ScanTable, ordered_map
from .dirichlet import dirichlet_function, hurwitz_zeta, riemann_zeta
from .errors import DomainError, EvaluationError, PoleError
from .greens import Geometry, SPoint, green_case1, green_case2, green_case3, green_case3p, green_case4

CASES = ("c1", "c2", "c3", "c3p", "c4", "partial")


@dataclass(frozen=True)
class MixingSpec:
    """Which dispersion case, the mixing length sigma and the geometry.

    ``N`` is the number of states kept for case "partial".
    """

    case_id: str
    sigma: float
    geom: Geometry = field(default_factory=lambda: Geometry(1.0, 1.0))
    N: int | None = None

    def __post_init__(self):
        if self.case_id not in CASES:
            raise DomainError(f"unknown case {self.case_id!r}")
        if self.case_id == "partial" and (self.N is None or self.N < 2):
            raise DomainError("partial sums need N >= 2")
        if self.sigma < 0:
            raise DomainError("sigma must be >= 0")

    @property
    def unmixed(self) -> bool:
        return self.sigma == 0


@dataclass(frozen=True)
class ProbabilityRow:
    t: float
    p: float


def _partial_norm(n: int, sigma_over_a: float) -> float:
    k = np.arange(1, n + 1, dtype=float)
    return float(np.sum(k ** -sigma_over_a))


def mixing_norm(spec: MixingSpec) -> float:
    """State norm z(sigma) for the case; continued analytically where needed."""
    g = spec.geom
    a, R, sigma = g.a, g.R, spec.sigma
    c = spec.case_id
    if c == "c1":
        if sigma == 0:
            raise PoleError("c1 norm 1/sigma diverges at sigma = 0")
        return 1.0 / sigma
    if c == "c2":
        if sigma == 0:
            raise PoleError("c2 norm diverges at sigma = 0")
        return 1.0 / -math.expm1(-sigma / R)
    if c == "c3":
        if sigma == a:
            raise PoleError("c3 norm 1/(sigma - a) has a pole at sigma = a")
        return 1.0 / (sigma - a)
    if c == "c3p":
        return 1.0 / a
    if c == "c4":
        if sigma == a:
            raise PoleError("c4 norm has a pole at sigma = a")
        ratio = R / a
        return (ratio ** (sigma / a) * hurwitz_zeta(sigma / a, ratio)).real
    return _partial_norm(spec.N, sigma / a)


def transition_prob_partial(N: int, sigma_over_a: float, t_over_a: float) -> float:
    """|sum_{k=1}^N (-1)^k k^(-s)|^2 / (sum_k k^(-sigma/a))^2 with s = (sigma + i t)/a."""
    if N < 2:
        raise DomainError("N must be >= 2")
    k = np.arange(1, N + 1, dtype=float)
    logk = np.log(k)
    sign = np.where(k % 2 == 1, -1.0, 1.0)
    amp = np.sum(sign * np.exp(-sigma_over_a * logk) * np.exp(-1j * t_over_a * logk))
    z = np.sum(np.exp(-sigma_over_a * logk))
    return float(abs(amp) ** 2 / z ** 2)


def transition_prob_two_state(sigma_over_a: float, t_over_a: float) -> float:
    """Closed form for N = 2: 1 - sin^2(2 theta) cos^2(t log sqrt 2), tan theta = 2^(-sigma/2)."""
    theta = math.atan(2.0 ** (-sigma_over_a / 2))
    return 1.0 - math.sin(2 * theta) ** 2 * math.cos(t_over_a * math.log(2) / 2) ** 2


def transition_prob(spec: MixingSpec, t: float) -> float:
    """Probability at time t for the case in ``spec``."""
    g = spec.geom
    a, R, sigma = g.a, g.R, spec.sigma
    c = spec.case_id
    if c == "partial":
        return transition_prob_partial(spec.N, sigma / a, t / a)
    if c == "c1":
        if sigma == 0:
            return 1.0 if t == math.pi * a else 0.0
        return sigma * sigma / ((math.pi * a - t) ** 2 + sigma * sigma)
    if c == "c2":
        x = math.pi * R
        if sigma == 0:
            return 1.0 if (x - t) % (2 * math.pi * R) == 0 else 0.0
        num = -math.expm1(-sigma / R)
        return abs(num * R * green_case2(x, SPoint(t, sigma, a), g)) ** 2
    z = mixing_norm(spec)
    pt = SPoint(t, sigma, a)
    if c == "c3":
        return abs(green_case3(math.pi * a, pt)) ** 2 / z ** 2
    if c == "c3p":
        return abs(green_case3p(math.pi * a, pt)) ** 2 / z ** 2
    # c4: mode sum R g4 at x = L/2
    if R == a:
        amp = dirichlet_function("eta", pt.s)
    else:
        amp = R * green_case4(math.pi * R, pt, g)
    return abs(amp) ** 2 / z ** 2


def scan(spec: MixingSpec, t_grid, threads: int | None = None) -> ScanTable:
    """Probability on a time grid; failures become per-row error strings."""
    ts = [float(t) for t in t_grid]
    if not ts:
        raise DomainError("empty t grid")

    def row(t):
        try:
            return (t, transition_prob(spec, t), "")
        except EvaluationError as e:
            return (t, None, f"{e.kind}: {e}")

    meta = {"case": spec.case_id, "sigma": spec.sigma, "R": spec.geom.R, "a": spec.geom.a}
    if spec.N is not None:
        meta["N"] = spec.N
    return ScanTable(("t", "p", "error"), ordered_map(row, ts, threads), meta)


# ------------------------------------------------------------ time averages

def _eta_sq_over(t: np.ndarray, sigma: float, x: float, geom: Geometry) -> np.ndarray:
    a = geom.a
    out = np.empty(len(t))
    for i, ti in enumerate(t):
        pt = SPoint(float(ti), sigma, a)
        if geom.R == a and x == math.pi * a:
            v = dirichlet_function("eta", pt.s)
        else:
            v = geom.R * green_case4(x, pt, geom)
        out[i] = abs(v) ** 2
    return out


def time_averaged_prob(T: float, sigma: float, x: float | None = None, geom: Geometry | None = None,
                       steps: int = 2000, norm: str = "sigma") -> float:
    """Average over t in [a, T] of |amplitude|^2 divided by a norm.

    norm="sigma": z(sigma)^2, i.e. zeta(sigma/a)^2 at R = a.
    norm="two_sigma": z(2 sigma), the normalization used by the mean-square
    asymptotics. Composite Simpson on ``steps`` uniform intervals; the
    average divides by T - a so that T -> a reduces to the single point.
    """
    geom = geom or Geometry(1.0, 1.0)
    a = geom.a
    if x is None:
        x = math.pi * geom.R
    if T < a:
        raise DomainError("T must be >= a")
    if steps < 100:
        raise DomainError("steps must be >= 100")
    if norm not in ("sigma", "two_sigma"):
        raise DomainError("norm must be 'sigma' or 'two_sigma'")
    ratio = geom.R / a
    if norm == "sigma":
        if sigma == a:
            raise PoleError("norm pole at sigma = a")
        den = (ratio ** (sigma / a) * hurwitz_zeta(sigma / a, ratio)).real ** 2
    else:
        if 2 * sigma == a:
            raise PoleError("norm pole at sigma = a/2")
        den = (ratio ** (2 * sigma / a) * hurwitz_zeta(2 * sigma / a, ratio)).real
    if T == a:
        return float(_eta_sq_over(np.array([a]), sigma, x, geom)[0] / den)
    t = np.linspace(a, T, steps + 1)
    vals = _eta_sq_over(t, sigma, x, geom)
    return float(simpson(vals, x=t) / (T - a) / den)


def lerch_mean_square_asymptotic(T: float, sigma: float, x: float | None = None,
                                 alpha: float = 1.0, a: float = 1.0,
                                 leading_only: bool = False) -> float:
    """Two leading terms of the normalized mean square of phi(x/L, s, R/a).

    1 + zeta_H(2 - 2 sigma/a, x/L) / ((2 - 2 sigma/a) zeta_H(2 sigma/a, alpha)) (T/(2 pi a))^(1 - 2 sigma/a)
    with alpha = R/a and L = 2 pi R. The lower-order B terms are omitted.
    """
    u = sigma / a
    if not 0.5 < u < 1:
        raise DomainError("needs 1/2 < sigma/a < 1")
    if leading_only:
        return 1.0
    R = alpha * a
    if x is None:
        x = math.pi * R
    frac = (x / (2 * math.pi * R)) % 1.0
    if frac == 0:
        raise DomainError("x must not be a multiple of L")
    num = hurwitz_zeta(2 - 2 * u, frac).real
    den = hurwitz_zeta(2 * u, alpha).real
    return 1.0 + num / ((2 - 2 * u) * den) * (T / (2 * math.pi * a)) ** (1 - 2 * u)


# --------------------------------------------------------------- RH scans

def rh_scan(sigma_grid, t_grid, a: float = 1.0, threads: int | None = None
            ) -> tuple[ScanTable, float, tuple[float, float]]:
    """Case-4 probability on a (sigma, t) product grid plus its global minimum."""
    sigmas = [float(s) for s in sigma_grid]
    ts = [float(t) for t in t_grid]
    if not sigmas or not ts:
        raise DomainError("grids must be nonempty")
    geom = Geometry(a, a)
    pts = [(s, t) for s in sigmas for t in ts]

    def row(p):
        s, t = p
        try:
            return (s, t, transition_prob(MixingSpec("c4", s, geom), t), "")
        except EvaluationError as e:
            return (s, t, None, f"{e.kind}: {e}")

    rows = ordered_map(row, pts, threads)
    table = ScanTable(("sigma", "t", "p", "error"), rows, {"a": a, "case": "c4"})
    best = min((r for r in rows if r[2] is not None), key=lambda r: r[2], default=None)
    if best is None:
        return table, math.nan, (math.nan, math.nan)
    return table, best[2], (best[0], best[1])


def susy_potential(sigma_over_a: float, y: float) -> float:
    """|zeta(sigma + i y)|^2."""
    s = complex(sigma_over_a, y)
    if s == 1:
        raise PoleError("zeta pole at s = 1")
    return abs(riemann_zeta(s)) ** 2
