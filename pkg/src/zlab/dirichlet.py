"""Lerch, Hurwitz and Dirichlet-type zeta functions with several representations.

Conventions:
    phi(x, s, alpha) = sum_{n>=0} (n + alpha)^(-s) e^(2 pi i n x)
    zeta_H(s, alpha) = phi(0, s, alpha)
    eta(s) = phi(1/2, s, 1) = -(2^(1-s) - 1) zeta(s)
    lambda(s) = (1 - 2^(-s)) zeta(s)
    beta(s) = 2^(-s) phi(1/2, s, 1/2)
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, PoleError
from .numerics import (
    QuadratureSpec,
    adaptive_integrate,
    as_complex,
    bernoulli,
    cpow,
    gamma,
    incomplete_gamma_upper,
    rgamma,
)

TWO_PI = 2.0 * math.pi
METHODS = ("series", "euler_maclaurin", "functional_equation", "integral", "theta_integral", "auto")
KINDS = ("zeta", "eta", "lambda", "beta")


@dataclass(frozen=True)
class EvalPolicy:
    method: str = "auto"
    max_terms: int = 100000
    em_order: int = 8
    tail_tol: float = 1e-15

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")
        if self.em_order % 2 or not 2 <= self.em_order <= 20:
            raise DomainError("em_order must be even, 2..20")
        if not self.tail_tol > 0:
            raise DomainError("tail_tol must be positive")


DEFAULT_POLICY = EvalPolicy()


@dataclass(frozen=True)
class LerchArgs:
    x: float
    s: complex
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "x", _reduce_twist(float(self.x)))
        object.__setattr__(self, "s", as_complex(self.s))
        object.__setattr__(self, "alpha", float(self.alpha))
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")


def _reduce_twist(x: float) -> float:
    r = x % 1.0
    return 0.0 if r == 1.0 else r


def _phase(n: int, x: float) -> complex:
    """e^(2 pi i n x) with the product reduced mod 1 first."""
    return cmath.exp(2j * math.pi * ((n * x) % 1.0))


# ------------------------------------------------------ Euler-Maclaurin core

@lru_cache(maxsize=64)
def _em_coeffs(order: int) -> tuple[float, ...]:
    return tuple(float(bernoulli(2 * m) / math.factorial(2 * m)) for m in range(1, order + 1))


def _hurwitz_em(s: complex, alpha: float, em_order: int) -> complex:
    if s == 1:
        raise PoleError("zeta_H(s, alpha) has a simple pole at s = 1")
    m_shift = max(15, math.ceil(abs(s)))
    terms = [cmath.exp(-s * math.log(n + alpha)) for n in range(m_shift)]
    direct = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    w = m_shift + alpha
    wpow = cmath.exp(-s * math.log(w))
    res = direct + w * wpow / (s - 1) + 0.5 * wpow
    poch = s
    inv_w2 = 1.0 / (w * w)
    t = wpow / w
    for m, c in enumerate(_em_coeffs(em_order), start=1):
        res += c * poch * t
        poch *= (s + 2 * m - 1) * (s + 2 * m)
        t *= inv_w2
    return res


@lru_cache(maxsize=4096)
def _zeta_even(n: int) -> float:
    """zeta(2n) for n >= 1, exact from Bernoulli numbers."""
    b = bernoulli(2 * n)
    return float(abs(b) * (2 * math.pi) ** (2 * n) / (2 * math.factorial(2 * n)))


@lru_cache(maxsize=4096)
def _twist_sums(xr: float, kmax: int) -> tuple[complex, ...]:
    """S_k = sum_{j != 0} (2 pi i (j - xr))^(-k-1) for k = 0..kmax, |xr| <= 1/2."""
    out = []
    # k = 0: symmetric sum, (1/(2 pi i)) (1/x - pi cot(pi x))
    if abs(xr) < 0.1:
        acc = 0.0
        p = xr
        for m in range(40):
            acc += p * _zeta_even(m + 1)
            p *= xr * xr
            if abs(p) < 1e-18:
                break
        s0 = 2.0 * acc
    else:
        s0 = 1.0 / xr - math.pi / math.tan(math.pi * xr)
    out.append(s0 / (2j * math.pi))
    for k in range(1, kmax + 1):
        h1 = _hurwitz_em(complex(k + 1), 1.0 - xr, 8).real
        h2 = _hurwitz_em(complex(k + 1), 1.0 + xr, 8).real
        out.append((h1 + (-1) ** (k + 1) * h2) / (2j * math.pi) ** (k + 1))
    return tuple(out)


def _lerch_em(x: float, s: complex, alpha: float, em_order: int) -> complex:
    """phi(x, s, alpha) for all s (x = 0 needs s != 1).

    Direct sum of M terms, then the tail sum_m z^m g(m) with g(m) = (m + w)^-s
    split as: the integral of z^m g(m) (an incomplete gamma), g(0)/2, and the
    expansion in derivatives of g weighted by the twisted Bernoulli-type sums
    S_k. For x = 0 this is the classical Euler-Maclaurin formula.
    """
    if x == 0.0:
        return _hurwitz_em(s, alpha, em_order)
    xr = x if x <= 0.5 else x - 1.0
    kmax = 2 * em_order
    m_shift = max(30, 2 * math.ceil(abs(s)))
    terms = [cmath.exp(-s * math.log(n + alpha)) * _phase(n, x) for n in range(m_shift)]
    direct = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    w = m_shift + alpha
    lw = math.log(w)
    wpow = cmath.exp(-s * lw)
    mu = 2j * math.pi * xr
    integral = cmath.exp(-mu * w + (s - 1) * cmath.log(-mu)) * incomplete_gamma_upper(1 - s, -mu * w)
    tail = integral + 0.5 * wpow
    sk = _twist_sums(xr, kmax)
    poch = 1 + 0j
    t = wpow
    for k in range(kmax + 1):
        tail += poch * t * sk[k]
        poch *= -(s + k)
        t /= w
    return direct + _phase(m_shift, x) * tail


# ------------------------------------------------------ other representations

def _levin_u(terms: list[complex]) -> complex:
    """Levin u-transform of the series with the given terms; best estimate."""
    beta = 1.0
    partial = []
    acc = 0j
    for a in terms:
        acc += a
        partial.append(acc)
    kmax = len(terms) - 1
    best = partial[-1]
    best_diff = math.inf
    prev = None
    for k in range(1, kmax + 1):
        num = 0j
        den = 0j
        for j in range(k + 1):
            c = (-1) ** j * math.comb(k, j) * ((j + beta) / (k + beta)) ** (k - 1)
            om = (j + beta) * terms[j]
            if om == 0:
                continue
            num += c * partial[j] / om
            den += c / om
        if den == 0:
            continue
        est = num / den
        if prev is not None:
            diff = abs(est - prev)
            if diff < best_diff:
                best_diff = diff
                best = est
        prev = est
    return best


def _lerch_series(x: float, s: complex, alpha: float, policy: EvalPolicy) -> complex:
    if x == 0.0 and s.real <= 1:
        raise DomainError("series representation needs Re(s) > 1 when x = 0")
    if x != 0.0 and s.real <= 0:
        raise DomainError("series representation needs Re(s) > 0")
    head = 8
    pre = sum(cmath.exp(-s * math.log(n + alpha)) * _phase(n, x) for n in range(head))
    n_terms = min(policy.max_terms, 24)
    terms = [cmath.exp(-s * math.log(n + alpha)) * _phase(n, x) for n in range(head, head + n_terms)]
    return pre + _levin_u(terms)


def _lerch_integral(x: float, s: complex, alpha: float) -> complex:
    """Mellin representation: Gamma(s) phi = int_0^inf w^(s-1) e^(-alpha w)/(1 - z e^-w) dw.

    Integrated in u = log w, where the integrand decays doubly exponentially
    to the right and like e^(Re(s) u) (or e^((Re(s)-1) u) for x = 0) to the left.
    """
    if x == 0.0 and s.real <= 1:
        raise DomainError("integral representation needs Re(s) > 1 when x = 0")
    if s.real <= 0:
        raise DomainError("integral representation needs Re(s) > 0")
    z = cmath.exp(2j * math.pi * x)

    def f(u: float) -> complex:
        if u > 700.0:
            return 0j
        w = math.exp(u)
        den = -math.expm1(-w) if x == 0.0 else 1.0 - z * math.exp(-w)
        arg = s * u - alpha * w
        if arg.real < -745.0:
            return 0j
        return cmath.exp(arg) / den

    spec = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-9, max_refinements=2000)
    val = adaptive_integrate(f, -math.inf, math.inf, spec).value
    return val * rgamma(s)


def _lerch_functional(x: float, s: complex, alpha: float, policy: EvalPolicy) -> complex:
    """phi(x, s, alpha) from the reflection s -> 1 - s."""
    inner = EvalPolicy("euler_maclaurin", policy.max_terms, policy.em_order, policy.tail_tol)
    return lerch_functional_rhs(x, 1 - s, alpha, inner)


def _shift_alpha(val: complex, x: float, s: complex, a0: float, k: int) -> complex:
    """phi(x, s, a0 + k) from phi(x, s, a0)."""
    if k == 0:
        return val
    head = sum(_phase(j, x) * cpow(a0 + j, -s) for j in range(k))
    return (val - head) * _phase(-k, x)


# ------------------------------------------------------------------ thetas

def _theta_direct(kind: str, tau: float, order: int) -> float:
    q = math.exp(-math.pi * tau)
    if kind == "theta3":
        total = 1.0
        for n in range(1, order + 1):
            t = q ** (n * n)
            total += 2 * t
            if t < 1e-17:
                break
        return total
    if kind == "theta4":
        total = 1.0
        for n in range(1, order + 1):
            t = q ** (n * n)
            total += 2 * (-1) ** n * t
            if t < 1e-17:
                break
        return total
    if kind == "theta2":
        total = 0.0
        for n in range(order + 1):
            t = q ** ((n + 0.5) ** 2)
            total += 2 * t
            if t < 1e-17 * total:
                break
        return total
    if kind == "theta1prime":
        total = 0.0
        for n in range(order + 1):
            t = (2 * n + 1) * q ** ((n + 0.5) ** 2)
            total += 2 * (-1) ** n * t
            if t < 1e-17 * abs(total):
                break
        return total
    raise DomainError(f"unknown theta kind {kind!r}")


def theta_function(kind: str, tau: float, order: int = 200) -> float:
    """Jacobi theta constant at argument 0 and nome e^(-pi tau).

    theta3 = sum_Z q^(n^2), theta4 its alternating form, theta2 the
    half-integer offsets, theta1prime = 2 sum (-1)^n (2n+1) q^((n+1/2)^2).
    For tau < 1 the modular transformation tau -> 1/tau is applied first.
    ``order`` caps the number of nome terms.
    """
    if not tau > 0:
        raise DomainError("tau must be positive")
    if tau >= 1.0:
        return _theta_direct(kind, tau, order)
    inv = 1.0 / tau
    if kind == "theta3":
        return _theta_direct("theta3", inv, order) / math.sqrt(tau)
    if kind == "theta4":
        return _theta_direct("theta2", inv, order) / math.sqrt(tau)
    if kind == "theta2":
        return _theta_direct("theta4", inv, order) / math.sqrt(tau)
    if kind == "theta1prime":
        return _theta_direct("theta1prime", inv, order) * tau ** -1.5
    raise DomainError(f"unknown theta kind {kind!r}")


def _odd_square_sum(tau: float) -> float:
    """sum over odd n >= 1 of e^(-pi tau n^2)."""
    q = math.exp(-math.pi * tau)
    total = 0.0
    n = 1
    while True:
        t = q ** (n * n)
        total += t
        if t < 1e-18 * total or t == 0.0:
            return total
        n += 2


def theta_combination(tau: float) -> float:
    """theta3 - theta2 - theta4 at nome e^(-pi tau), free of cancellation.

    The combination is invariant up to tau^(-1/2) under tau -> 1/tau.
    """
    if not tau > 0:
        raise DomainError("tau must be positive")
    if tau < 1.0:
        return theta_combination(1.0 / tau) / math.sqrt(tau)
    return 4.0 * _odd_square_sum(tau) - _theta_direct("theta2", tau, 200)


def _theta3_minus_one(tau: float) -> float:
    if tau >= 1.0:
        return _theta_direct("theta3", tau, 200) - 1.0
    return _theta_direct("theta3", 1.0 / tau, 200) / math.sqrt(tau) - 1.0


def _theta_mellin(f, s: complex) -> complex:
    """int_0^inf c^(s/2 - 1) f(c) dc, integrated in phi = log c."""
    def g(phi: float) -> complex:
        if abs(phi) > 700.0:
            return 0j
        fc = f(math.exp(phi))
        if fc == 0.0:
            return 0j
        return cmath.exp(s * phi / 2) * fc

    spec = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-12, max_refinements=2000)
    return adaptive_integrate(g, -math.inf, math.inf, spec).value


def _zeta_theta(s: complex) -> complex:
    # int_0^inf tau^(s/2-1) (theta3 - 1) dtau = 2 pi^(-s/2) Gamma(s/2) zeta(s)
    if s.real <= 2:
        raise DomainError("theta representation of zeta restricted to Re(s) > 2")
    val = _theta_mellin(_theta3_minus_one, s)
    return 0.5 * val * cpow(math.pi, s / 2) * rgamma(s / 2)


def _eta_theta(s: complex) -> complex:
    # int tau^(s/2-1)(theta4 + theta2 - theta3) = 2 (2^s - 1) pi^(-s/2) Gamma(s/2) eta(s)
    if s.real <= 0:
        raise DomainError("theta representation of eta needs Re(s) > 0")
    if s == 0:
        raise PoleError("2^s - 1 vanishes at s = 0")
    val = -_theta_mellin(theta_combination, s)
    return val * cpow(math.pi, s / 2) * rgamma(s / 2) / (2 * (cpow(2.0, s) - 1))


# -------------------------------------------------------------- public ops

def lerch_phi(args: LerchArgs, policy: EvalPolicy = DEFAULT_POLICY) -> complex:
    """Lerch zeta phi(x, s, alpha) by the representation chosen in ``policy``.

    auto: Euler-Maclaurin continuation, except that Re(s) < -1 is mapped
    through the reflection formula to avoid cancellation.
    """
    x, s, alpha = args.x, args.s, args.alpha
    if x == 0.0 and s == 1:
        raise PoleError("phi(0, s, alpha) has a simple pole at s = 1")
    method = policy.method
    if method == "auto":
        method = "functional_equation" if s.real < -1 else "euler_maclaurin"
    if method == "euler_maclaurin":
        return _lerch_em(x, s, alpha, policy.em_order)
    if method == "series":
        return _lerch_series(x, s, alpha, policy)
    if method == "integral":
        return _lerch_integral(x, s, alpha)
    if method == "functional_equation":
        return _lerch_functional(x, s, alpha, policy)
    if method == "theta_integral":
        if x == 0.0 and alpha == 1.0:
            return _zeta_theta(s)
        if x == 0.5 and alpha == 1.0:
            return _eta_theta(s)
        raise DomainError("theta representation available for (x, alpha) = (0, 1) and (1/2, 1)")
    raise DomainError(f"unknown method {method!r}")


def hurwitz_zeta(s, alpha: float, policy: EvalPolicy = DEFAULT_POLICY) -> complex:
    """Hurwitz zeta zeta_H(s, alpha), continued to all s != 1."""
    s = as_complex(s)
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    if s == 1:
        raise PoleError("zeta_H(s, alpha) has a simple pole at s = 1")
    if policy.method == "euler_maclaurin" or (policy.method == "auto" and s.real >= -1):
        return _hurwitz_em(s, float(alpha), policy.em_order)
    return lerch_phi(LerchArgs(0.0, s, alpha), policy)


def riemann_zeta(s, policy: EvalPolicy = DEFAULT_POLICY) -> complex:
    return hurwitz_zeta(s, 1.0, policy)


def dirichlet_function(kind: str, s, policy: EvalPolicy = DEFAULT_POLICY) -> complex:
    """zeta, eta, lambda or beta at complex s."""
    s = as_complex(s)
    if kind not in KINDS:
        raise DomainError(f"unknown kind {kind!r}")
    if kind == "beta":
        return cpow(2.0, -s) * lerch_phi(LerchArgs(0.5, s, 0.5), policy)
    if kind == "eta":
        if policy.method == "theta_integral":
            return _eta_theta(s)
        if abs(s - 1) < 1e-4:
            return lerch_phi(LerchArgs(0.5, s, 1.0), policy)
        return -(cpow(2.0, 1 - s) - 1) * riemann_zeta(s, policy)
    if s == 1:
        raise PoleError(f"{kind} has a simple pole at s = 1")
    if policy.method == "theta_integral":
        z = _zeta_theta(s)
    else:
        z = riemann_zeta(s, policy)
    if kind == "zeta":
        return z
    return (1 - cpow(2.0, -s)) * z


def lerch_functional_rhs(x: float, s, alpha: float, policy: EvalPolicy = DEFAULT_POLICY) -> complex:
    """Right side of the reflection formula for phi(x, 1 - s, alpha).

    (2 pi)^-s Gamma(s) [e^(i pi s/2 - 2 pi i alpha x) phi(-alpha, s, x)
                        + e^(-i pi s/2 + 2 pi i alpha (1 - x)) phi(alpha, s, 1 - x)]
    valid for 0 < alpha <= 1. Larger alpha is reduced with the shift
    relation. For x = 0 the sums start at n = 1 (the Hurwitz formula).
    """
    s = as_complex(s)
    x = _reduce_twist(x)
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    k = max(0, math.ceil(alpha) - 1)
    a0 = alpha - k
    pref = gamma(s) * cmath.exp(-s * math.log(TWO_PI))
    if x == 0.0:
        t1 = cmath.exp(1j * math.pi * s / 2 - 2j * math.pi * a0) * lerch_phi(LerchArgs(-a0, s, 1.0), policy)
        t2 = cmath.exp(-1j * math.pi * s / 2 + 2j * math.pi * a0) * lerch_phi(LerchArgs(a0, s, 1.0), policy)
    else:
        t1 = cmath.exp(1j * math.pi * s / 2 - 2j * math.pi * a0 * x) * lerch_phi(LerchArgs(-a0, s, x), policy)
        t2 = cmath.exp(-1j * math.pi * s / 2 + 2j * math.pi * a0 * (1 - x)) * lerch_phi(LerchArgs(a0, s, 1 - x), policy)
    return _shift_alpha(pref * (t1 + t2), x, 1 - s, a0, k)


def lerch_functional_residual(args: LerchArgs) -> float:
    """|phi(x, 1 - s, alpha) - RHS| with both sides from Euler-Maclaurin."""
    em = EvalPolicy("euler_maclaurin")
    lhs = lerch_phi(LerchArgs(args.x, 1 - args.s, args.alpha), em)
    rhs = lerch_functional_rhs(args.x, args.s, args.alpha, em)
    return abs(lhs - rhs)


def completed_zeta(s) -> complex:
    """pi^(-s/2) Gamma(s/2) zeta(s)."""
    s = as_complex(s)
    return cpow(math.pi, -s / 2) * gamma(s / 2) * riemann_zeta(s)


def zeta_functional_residual(s) -> float:
    """|xi-type symmetric form at s minus the same at 1 - s|."""
    s = as_complex(s)
    return abs(completed_zeta(s) - completed_zeta(1 - s))
