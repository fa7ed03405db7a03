"""Foundation numerics: log-gamma, incomplete gamma, quadrature and exact q-series.

Complex values are carried as the builtin ``complex``. Powers are always taken
on the principal branch, ``z**w = exp(w * log z)``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

from scipy import integrate

from .errors import ConvergenceError, DomainError, PoleError, ToleranceError

ComplexValue = complex

LOG_2PI = math.log(2.0 * math.pi)
EULER_GAMMA = 0.57721566490153286060651209


def as_complex(z) -> complex:
    """Coerce numbers and (re, im) pairs to ``complex``."""
    if isinstance(z, (tuple, list)):
        re, im = z
        return complex(float(re), float(im))
    return complex(z)


def is_finite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


def cpow(base: complex, expo: complex) -> complex:
    """Principal-branch power. ``0**w`` is 0 for Re w > 0."""
    base = complex(base)
    if base == 0:
        if complex(expo).real > 0:
            return 0j
        raise PoleError("zero raised to a power with nonpositive real part")
    return cmath.exp(complex(expo) * cmath.log(base))



def cexpm1(w) -> complex:
    """e^w - 1 without cancellation for small |w|."""
    w = complex(w)
    x, y = w.real, w.imag
    re = math.expm1(x) * math.cos(y) - 2.0 * math.sin(y / 2) ** 2
    return complex(re, math.exp(x) * math.sin(y))


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


# ---------------------------------------------------------------- Bernoulli

@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n with B_1 = -1/2."""
    if n < 0:
        raise DomainError("Bernoulli index must be nonnegative")
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2 == 1:
        return Fraction(0)
    # B_n = -1/(n+1) * sum_{k<n} C(n+1,k) B_k
    total = Fraction(0)
    for k in range(n):
        total += math.comb(n + 1, k) * bernoulli(k)
    return -total / (n + 1)


_STIRLING = [float(bernoulli(2 * k) / (2 * k * (2 * k - 1))) for k in range(1, 13)]


# ---------------------------------------------------------------- log-gamma

def log_gamma(z) -> complex:
    """Principal branch of log Gamma(z).

    Stirling series after shifting Re z above 12 with the recurrence. The
    imaginary part is continuous off the negative real axis.
    """
    z = as_complex(z)
    if not is_finite(z):
        raise DomainError(f"log_gamma of non-finite argument {z!r}")
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z.real:g}")
    shift = max(0, math.ceil(12.0 - z.real))
    if shift:
        logs = [cmath.log(z + k) for k in range(shift)]
        corr = complex(math.fsum(v.real for v in logs), math.fsum(v.imag for v in logs))
        w = z + shift
    else:
        corr = 0j
        w = z
    lw = cmath.log(w)
    res = (w - 0.5) * lw - w + 0.5 * LOG_2PI
    inv = 1.0 / w
    inv2 = inv * inv
    term = inv
    for c in _STIRLING:
        res += c * term
        term *= inv2
    return res - corr


def gamma(z) -> complex:
    """Gamma(z) through ``log_gamma``."""
    return cmath.exp(log_gamma(z))


def rgamma(z) -> complex:
    """1/Gamma(z); zero at the poles of Gamma."""
    z = as_complex(z)
    if _is_nonpositive_integer(z):
        return 0j
    return cmath.exp(-log_gamma(z))


# -------------------------------------------------------- incomplete gamma

def lower_incomplete_gamma(b, x, tol: float = 1e-16, max_terms: int = 100000) -> complex:
    """gamma(b, x) = x^b e^{-x} sum_n x^n / (b)_{n+1} (principal branch)."""
    b = as_complex(b)
    x = as_complex(x)
    if _is_nonpositive_integer(b):
        raise PoleError("lower incomplete gamma undefined for b a nonpositive integer")
    if x == 0:
        if b.real > 0:
            return 0j
        raise DomainError("lower incomplete gamma at x=0 needs Re(b) > 0")
    term = 1.0 / b
    total = term
    n = 0
    while True:
        n += 1
        term *= x / (b + n)
        total += term
        if abs(term) <= tol * abs(total) and n > abs(x):
            break
        if n > max_terms:
            raise ConvergenceError("lower incomplete gamma series did not converge")
    return cmath.exp(b * cmath.log(x) - x) * total


def _upper_cf(b: complex, x: complex, tol: float, max_iter: int) -> complex | None:
    """Legendre continued fraction, modified Lentz. None if not converged."""
    tiny = 1e-300
    f = x + 1.0 - b
    if f == 0:
        f = tiny
    c = f
    d = 0j
    for i in range(1, max_iter + 1):
        an = -i * (i - b)
        bn = x + 2 * i + 1.0 - b
        d = bn + an * d
        if d == 0:
            d = tiny
        c = bn + an / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < tol:
            return cmath.exp(b * cmath.log(x) - x) / f
    return None


def _upper_nonpositive_integer(m: int, x: complex) -> complex:
    """Gamma(-m, x) from the E1 series and downward recurrence."""
    # E1(x) = -gamma - log x - sum (-x)^k / (k k!)
    total = 0j
    term = 1 + 0j
    k = 0
    while True:
        k += 1
        term *= -x / k
        add = term / k
        total += add
        if abs(add) < 1e-17 * max(abs(total), 1e-300) and k > abs(x):
            break
        if k > 10000:
            raise ConvergenceError("E1 series did not converge")
    val = -EULER_GAMMA - cmath.log(x) - total
    for j in range(1, m + 1):
        bb = -j
        val = (val - cmath.exp(bb * cmath.log(x) - x)) / bb
    return val


def incomplete_gamma_upper(b, x, tol: float = 1e-15) -> complex:
    """Upper incomplete gamma Gamma(b, x) on the principal branch.

    Continued fraction when |x| > max(1.5, |b| + 1), otherwise (or on
    failure) Gamma(b) minus the lower series. Gamma(b, 0) = Gamma(b) when Re b > 0.
    """
    b = as_complex(b)
    x = as_complex(x)
    if x == 0:
        if b.real > 0:
            return gamma(b)
        raise DomainError("Gamma(b, 0) diverges for Re(b) <= 0")
    if abs(x) > max(1.5, abs(b) + 1.0):
        val = _upper_cf(b, x, tol, 20000)
        if val is not None:
            return val
    if _is_nonpositive_integer(b):
        if abs(x) < 40:
            return _upper_nonpositive_integer(int(-b.real), x)
        raise ConvergenceError("incomplete gamma: both strategies failed")
    try:
        return gamma(b) - lower_incomplete_gamma(b, x)
    except ConvergenceError as exc:
        raise ConvergenceError(
            f"incomplete gamma: continued fraction and series both failed at b={b}, x={x}"
        ) from exc


# ---------------------------------------------------------------- quadrature

@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-11
    rel_tol: float = 1e-11
    max_refinements: int = 500
    transform: str = "none"

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_refinements < 1:
            raise DomainError("max_refinements must be >= 1")
        if self.transform not in ("none", "exp_substitution"):
            raise DomainError(f"unknown transform {self.transform!r}")


class QuadResult(NamedTuple):
    value: complex
    error: float


def _quad_real(g, lo, hi, spec: QuadratureSpec, points) -> tuple[float, float, bool]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        kwargs = dict(epsabs=spec.abs_tol / 2, epsrel=spec.rel_tol,
                      limit=spec.max_refinements, full_output=1)
        if points is not None and math.isfinite(lo) and math.isfinite(hi):
            kwargs["points"] = points
        out = integrate.quad(g, lo, hi, **kwargs)
    val, err = out[0], out[1]
    # roundoff warnings are judged by the error estimate alone
    ok = len(out) == 3 or "roundoff" in str(out[3])
    return val, err, ok


def adaptive_integrate(f: Callable[[float], complex], lo: float, hi: float,
                       spec: QuadratureSpec = QuadratureSpec(),
                       points: Sequence[float] | None = None) -> QuadResult:
    """Integrate a complex-valued f over [lo, hi] (hi may be +inf).

    Adaptive Gauss-Kronrod (QUADPACK) on the real and imaginary parts. With
    ``transform='exp_substitution'`` the variable C = e^phi is used, which
    needs lo >= 0. Raises ToleranceError carrying the best estimate when the
    reported error exceeds max(abs_tol, rel_tol*|result|).
    """
    if spec.transform == "exp_substitution":
        if lo < 0:
            raise DomainError("exp substitution needs lo >= 0")
        a = -math.inf if lo == 0 else math.log(lo)
        b = math.inf if hi == math.inf else math.log(hi)

        def g(phi: float) -> complex:
            if phi > 709.0:
                return 0j
            c = math.exp(phi)
            if c == 0.0 or not math.isfinite(c):
                return 0j
            return complex(f(c)) * c

        pts = None if points is None else [math.log(p) for p in points if p > 0]
    else:
        a, b, g, pts = lo, hi, (lambda v: complex(f(v))), points

    cache: dict[float, complex] = {}

    def ev(v: float) -> complex:
        r = cache.get(v)
        if r is None:
            r = g(v)
            cache[v] = r
        return r

    re, err_re, ok_re = _quad_real(lambda v: ev(v).real, a, b, spec, pts)
    im, err_im, ok_im = _quad_real(lambda v: ev(v).imag, a, b, spec, pts)
    value = complex(re, im)
    error = math.hypot(err_re, err_im)
    bound = max(spec.abs_tol, spec.rel_tol * abs(value))
    if not (ok_re and ok_im) or error > bound or not is_finite(value):
        raise ToleranceError(
            f"quadrature tolerance not met (error {error:.3g} > {bound:.3g})", value, error)
    return QuadResult(value, error)


# ---------------------------------------------------------------- q-series

@dataclass(frozen=True)
class QSeries:
    """Truncated power series with exact integer coefficients.

    ``coeffs[k]`` multiplies q^(k*step).
    """

    coeffs: tuple[int, ...]
    step: Fraction = field(default=Fraction(1))

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        object.__setattr__(self, "step", Fraction(self.step))
        if not self.coeffs:
            raise DomainError("QSeries needs at least one coefficient")
        if self.step <= 0:
            raise DomainError("QSeries step must be positive")

    @property
    def truncation_order(self) -> int:
        return len(self.coeffs) - 1

    def _compatible(self, other: "QSeries") -> int:
        if not isinstance(other, QSeries):
            return NotImplemented
        if other.step != self.step:
            raise DomainError("QSeries with different step cannot be combined")
        return min(self.truncation_order, other.truncation_order)

    def __add__(self, other: "QSeries") -> "QSeries":
        n = self._compatible(other)
        return QSeries(tuple(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs)), self.step)

    def __sub__(self, other: "QSeries") -> "QSeries":
        n = self._compatible(other)
        return QSeries(tuple(a - b for a, b in zip(self.coeffs[: n + 1], other.coeffs)), self.step)

    def __neg__(self) -> "QSeries":
        return QSeries(tuple(-c for c in self.coeffs), self.step)

    def __mul__(self, other: "QSeries") -> "QSeries":
        n = self._compatible(other)
        a, b = self.coeffs, other.coeffs
        out = [0] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if ai:
                for j in range(n + 1 - i):
                    out[i + j] += ai * b[j]
        return QSeries(tuple(out), self.step)

    def inverse(self) -> "QSeries":
        """Exact reciprocal; needs constant term +1 or -1."""
        c0 = self.coeffs[0]
        if c0 not in (1, -1):
            raise DomainError("exact inverse needs a unit constant term")
        n = self.truncation_order
        out = [0] * (n + 1)
        out[0] = c0
        for k in range(1, n + 1):
            s = sum(self.coeffs[j] * out[k - j] for j in range(1, k + 1))
            out[k] = -s * c0
        return QSeries(tuple(out), self.step)

    def __truediv__(self, other: "QSeries") -> "QSeries":
        self._compatible(other)
        return self * other.inverse()

    def shift(self, k: int) -> "QSeries":
        """Multiply by q^(k*step), keeping the truncation order."""
        n = self.truncation_order
        return QSeries(((0,) * k + self.coeffs)[: n + 1], self.step)

    def coefficient(self, power) -> int:
        """Coefficient of q^power (power in natural q units)."""
        k = Fraction(power) / self.step
        if k.denominator != 1 or k < 0 or k > self.truncation_order:
            if k.denominator == 1 and k >= 0:
                raise DomainError("power beyond truncation order")
            return 0
        return self.coeffs[int(k)]


def _divisor_weights(order: int, sign: str) -> list[int]:
    """Coefficients of u d/du log prod(1 -/+ u^n), n >= 1, without the exponent."""
    w = [0] * (order + 1)
    for d in range(1, order + 1):
        for k in range(d, order + 1, d):
            m = k // d
            if sign == "minus":
                w[k] -= d
            else:
                w[k] += d if m % 2 == 1 else -d
    return w


def eta_product_expand(sign: str, exponent: int, half_powers: bool, order: int,
                       leading_q: bool = False) -> QSeries:
    """Exact coefficients of [q] * prod_{n>=1} (1 +/- q^(n*step))^exponent.

    ``sign`` is 'plus' or 'minus'; ``half_powers`` selects step 1/2 (expansion
    in q^(1/2)); ``leading_q`` multiplies by q. Coefficients run to
    (q^step)^order. Uses the logarithmic-derivative recurrence, so large
    orders stay quadratic.
    """
    if sign not in ("plus", "minus"):
        raise DomainError("sign must be 'plus' or 'minus'")
    if order < 0:
        raise DomainError("order must be >= 0")
    step = Fraction(1, 2) if half_powers else Fraction(1)
    w = _divisor_weights(order, sign)
    a = [0] * (order + 1)
    a[0] = 1
    for n in range(1, order + 1):
        s = sum(w[k] * a[n - k] for k in range(1, n + 1)) * exponent
        q, r = divmod(s, n)
        if r:
            raise ArithmeticError("non-integral q-series coefficient")
        a[n] = q
    series = QSeries(tuple(a), step)
    if leading_q:
        series = series.shift(int(1 / step))
    return series
