"""zlab command line: every operation, emitting CSV or JSON data.

Exit codes: 0 success, 2 usage error, 3 evaluation error (JSON on stderr).
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from typing import Sequence

import numpy as np

from .. import __version__
from ..errors import EvaluationError
from .table import ScanTable, format_complex, ordered_map

EXIT_OK, EXIT_USAGE, EXIT_EVAL = 0, 2, 3


# ------------------------------------------------------------ parsing

def parse_complex(text: str) -> complex:
    """'0.5+14.1347i', '-2i', '3' -> complex."""
    t = text.strip().replace(" ", "")
    try:
        if t.endswith("i"):
            return complex(t[:-1] + "j")
        return complex(float(t))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def parse_range(text: str) -> np.ndarray:
    """'lo:hi:step' inclusive of hi; a bare number is a one-point range."""
    parts = text.split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
    if len(vals) == 1:
        return np.array(vals)
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("range must be lo:hi:step")
    lo, hi, step = vals
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError("range needs step > 0 and hi >= lo")
    n = int(round((hi - lo) / step))
    return lo + step * np.arange(n + 1)


def _span(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) < 2:
        raise argparse.ArgumentTypeError("range must be lo:hi")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None


# ------------------------------------------------------------ commands

def _geom(ns):
    from ..greens import Geometry
    return Geometry(ns.R, ns.a, getattr(ns, "gauge_shift", 0.0))


def _one(columns, row, meta) -> ScanTable:
    return ScanTable(tuple(columns), [tuple(row)], meta)


def cmd_eval(ns):
    from ..dirichlet import EvalPolicy, LerchArgs, dirichlet_function, hurwitz_zeta, lerch_phi
    policy = EvalPolicy(method=ns.method, em_order=ns.em_order, tail_tol=ns.tol)
    if ns.kind == "lerch":
        v = lerch_phi(LerchArgs(ns.x, ns.s, ns.alpha), policy)
    elif ns.kind == "hurwitz":
        v = hurwitz_zeta(ns.s, ns.alpha, policy)
    else:
        v = dirichlet_function(ns.kind, ns.s, policy)
    meta = {"kind": ns.kind, "s": format_complex(ns.s), "method": ns.method, "x": ns.x, "alpha": ns.alpha}
    return _one(("kind", "s", "value"), (ns.kind, ns.s, v), meta)


def cmd_green(ns):
    from .. import greens as G
    geom = _geom(ns)
    pt = G.SPoint(ns.t, ns.sigma, ns.a)
    c = ns.case
    if c == "1":
        v = G.green_case1(ns.x, pt)
    elif c == "2":
        v = G.green_case2(ns.x, pt, geom)
    elif c == "3":
        v = G.green_case3(ns.x, pt)
    elif c == "3p":
        v = G.green_case3p(ns.x, pt)
    elif c == "4":
        v = G.green_case4(ns.x, pt, geom)
    elif c == "4p":
        v = G.green_case4p(ns.x, pt.s, geom)
    else:
        v = G.green_gauge(ns.x, pt, geom)
    meta = {"case": c, "x": ns.x, "t": ns.t, "sigma": ns.sigma, "R": ns.R, "a": ns.a,
            "gauge_shift": ns.gauge_shift}
    return _one(("case", "x", "t", "sigma", "g"), (c, ns.x, ns.t, ns.sigma, v), meta)


_CASE_IDS = {"1": "c1", "2": "c2", "3": "c3", "3p": "c3p", "4": "c4", "partial": "partial"}


def cmd_transition(ns):
    from ..transitions import MixingSpec, scan
    case = _CASE_IDS.get(ns.case, ns.case)
    spec = MixingSpec(case, ns.sigma, _geom(ns), ns.N)
    return scan(spec, ns.t, ns.threads)


def cmd_partition(ns):
    from ..statmech import grand_log_z
    geom = _geom(ns)

    def row(b):
        try:
            return (float(b), grand_log_z(ns.statistics, float(b), ns.mu, geom, ns.method, ns.terms), "")
        except EvaluationError as e:
            return (float(b), None, f"{e.kind}: {e}")

    meta = {"statistics": ns.statistics, "mu": ns.mu, "R": ns.R, "a": ns.a, "method": ns.method,
            "terms": ns.terms}
    return ScanTable(("beta", "log_z", "error"), ordered_map(row, ns.beta, ns.threads), meta)


def cmd_thermo(ns):
    from ..statmech import thermodynamics
    geom = _geom(ns)

    def row(b):
        try:
            st = thermodynamics(float(b), geom, ns.terms)
            return (float(b), float(st.f), float(st.U), float(st.P), float(st.N), "")
        except EvaluationError as e:
            return (float(b), None, None, None, None, f"{e.kind}: {e}")

    meta = {"R": ns.R, "a": ns.a, "terms": ns.terms}
    return ScanTable(("beta", "f", "U", "P", "N", "error"), ordered_map(row, ns.beta, ns.threads), meta)


def cmd_thermal_green(ns):
    from ..statmech import thermal_green
    v = thermal_green(ns.x, ns.t, ns.sigma, ns.beta, _geom(ns), ns.m_max)
    meta = {"x": ns.x, "t": ns.t, "sigma": ns.sigma, "beta": ns.beta, "R": ns.R, "a": ns.a,
            "m_max": ns.m_max}
    return _one(("x", "t", "sigma", "beta", "g"), (ns.x, ns.t, ns.sigma, ns.beta, v), meta)


def cmd_factorize(ns):
    from ..statmech import count_factorizations
    rep = count_factorizations(ns.n, ns.mode)
    if ns.format == "json":
        return json.dumps(rep.to_dict()) + "\n"
    rows = [(i + 1, len(m), "*".join(str(f) for f in m)) for i, m in enumerate(rep.listing)]
    return ScanTable(("index", "particles", "factors"), rows,
                     {"n": rep.n, "mode": rep.mode, "count": rep.count})


def cmd_zeros(ns):
    from ..zeros import find_zeros
    lo, hi = ns.range
    zs = find_zeros(lo, hi, ns.step, ns.threads)
    rows = [(z.index, z.t, z.refinement_error) for z in zs]
    return ScanTable(("index", "t", "err"), rows, {"range": f"{lo}:{hi}", "step": ns.step})


def cmd_rh_scan(ns):
    from ..transitions import rh_scan
    table, pmin, (s, t) = rh_scan(ns.sigma, ns.t, ns.a, ns.threads)
    table.meta.update({"min_p": repr(pmin), "argmin_sigma": repr(s), "argmin_t": repr(t)})
    return table


def cmd_susy(ns):
    from ..transitions import susy_potential

    def row(y):
        try:
            return (float(y), susy_potential(ns.sigma, float(y)), "")
        except EvaluationError as e:
            return (float(y), None, f"{e.kind}: {e}")

    return ScanTable(("y", "V", "error"), ordered_map(row, ns.y, ns.threads), {"sigma": ns.sigma})


def cmd_duality_check(ns):
    from ..greens import Geometry, SPoint
    from ..zeros import duality_map, duality_residual
    rows = []
    if ns.random:
        rng = random.Random(ns.seed)
        for _ in range(ns.random):
            R = rng.uniform(0.2, 1.0) * ns.a
            geom = Geometry(R, ns.a)
            x = rng.uniform(0.05, 0.95) * geom.L
            s = complex(rng.uniform(0.1, 0.9), rng.uniform(-10, 10))
            pt = SPoint.from_s(s, ns.a)
            d = duality_map(x, geom)
            rows.append((R, x, s, d.R1, d.R2, duality_residual(x, pt, geom)))
    else:
        geom = _geom(ns)
        x = math.pi * ns.a if ns.x is None else ns.x
        pt = SPoint.from_s(ns.s, ns.a)
        d = duality_map(x, geom)
        rows.append((ns.R, x, ns.s, d.R1, d.R2, duality_residual(x, pt, geom)))
    meta = {"a": ns.a, "seed": ns.seed, "random": ns.random}
    return ScanTable(("R", "x", "s", "R1", "R2", "residual"), rows, meta)


def cmd_theta_zeta(ns):
    from ..numerics import QuadratureSpec
    from ..zeros import theta_integral_zeta
    # --tol is a series tail tolerance; quadrature cannot go below ~1e-12
    spec = QuadratureSpec(abs_tol=1e-12, rel_tol=max(ns.tol, 1e-10), max_refinements=2000)
    r = theta_integral_zeta(ns.s, spec)
    return _one(("s", "quadrature", "closed_form", "error"), (ns.s, r.quadrature, r.closed_form, r.error),
                {"s": format_complex(ns.s)})


def cmd_qseries(ns):
    from ..strings import DegeneracySpec, degeneracies
    q = degeneracies(DegeneracySpec(ns.model, ns.order))
    rows = [(str(k * q.step), c) for k, c in enumerate(q.coeffs)]
    return ScanTable(("power", "coefficient"), rows, {"model": ns.model, "order": ns.order})


def cmd_ramanujan(ns):
    from ..strings import ramanujan_F, ramanujan_functional_residual
    F = ramanujan_F(ns.s, ns.n_max)
    res, tol = ramanujan_functional_residual(ns.s, ns.n_max)
    return _one(("s", "F", "tail", "bound", "fe_residual", "fe_tolerance"),
                (ns.s, F.value, F.tail, F.bound, res, tol), {"s": format_complex(ns.s), "n_max": ns.n_max})


def cmd_string_green(ns):
    from ..greens import SPoint
    from ..strings import DegeneracySpec, string_green_series
    pt = SPoint(ns.t, ns.sigma, ns.a)
    r = string_green_series(pt, _geom(ns), DegeneracySpec(ns.model, ns.order), ns.alpha_prime,
                            ns.A, ns.n_max, ns.N_max)
    meta = {"model": ns.model, "order": ns.order, "t": ns.t, "sigma": ns.sigma, "R": ns.R, "a": ns.a,
            "alpha_prime": ns.alpha_prime, "A": ns.A, "n_max": ns.n_max, "N_max": ns.N_max}
    return _one(("t", "sigma", "value", "n_tail", "last_column"),
                (ns.t, ns.sigma, r.value, r.n_tail, r.last_column), meta)


def cmd_osc_z(ns):
    from ..statmech import log_oscillator_z
    v = log_oscillator_z(ns.beta, ns.mu, ns.a_omega, ns.a)
    meta = {"beta": format_complex(ns.beta), "mu": format_complex(ns.mu), "a_omega": ns.a_omega, "a": ns.a}
    return _one(("beta", "mu", "z"), (ns.beta, ns.mu, v), meta)


# ------------------------------------------------------------ parser

def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--format", choices=("csv", "json"), default=d("csv"))
    parser.add_argument("--out", default=d(None), help="write output to FILE instead of stdout")
    parser.add_argument("--tol", type=float, default=d(1e-15), help="series tail tolerance")
    parser.add_argument("--threads", type=int, default=d(None), help="worker threads (env ZLAB_THREADS)")
    parser.add_argument("--seed", type=int, default=d(0), help="seed for randomized checks")


def _geom_args(p, R=1.0, gauge=False):
    p.add_argument("--R", type=float, default=R)
    p.add_argument("--a", type=float, default=1.0)
    if gauge:
        p.add_argument("--gauge-shift", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zlab", description=__doc__.splitlines()[0], allow_abbrev=False)
    parser.add_argument("--version", action="version", version=f"zlab {__version__}")
    _globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_, allow_abbrev=False)
        _globals(p, suppress=True)
        p.set_defaults(fn=fn)
        return p

    p = add("eval", cmd_eval, "evaluate zeta, eta, lambda, beta, hurwitz or lerch")
    p.add_argument("kind", choices=("zeta", "eta", "lambda", "beta", "hurwitz", "lerch"))
    p.add_argument("s", type=parse_complex)
    p.add_argument("--x", type=float, default=0.0, help="Lerch twist")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--method", default="auto",
                   choices=("auto", "series", "euler_maclaurin", "functional_equation", "integral",
                            "theta_integral"))
    p.add_argument("--em-order", type=int, default=8)

    p = add("green", cmd_green, "one Green's function value")
    p.add_argument("--case", required=True, choices=("1", "2", "3", "3p", "4", "4p", "gauge"))
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=0.0)
    _geom_args(p, gauge=True)

    p = add("transition", cmd_transition, "transition probability scan over t")
    p.add_argument("--case", required=True, choices=tuple(_CASE_IDS) + tuple(_CASE_IDS.values()))
    p.add_argument("--N", type=int, default=None, help="states kept for --case partial")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--t", type=parse_range, required=True, help="lo:hi:step")
    _geom_args(p)

    p = add("partition", cmd_partition, "grand log Z over a beta range")
    p.add_argument("--statistics", choices=("fermi", "bose"), default="fermi")
    p.add_argument("--beta", type=parse_range, required=True)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--method", choices=("series", "direct_product"), default="series")
    p.add_argument("--terms", type=int, default=None)
    _geom_args(p)

    p = add("thermo", cmd_thermo, "f, U, P, N over a beta range")
    p.add_argument("--beta", type=parse_range, required=True)
    p.add_argument("--terms", type=int, default=4000)
    _geom_args(p)

    p = add("thermal-green", cmd_thermal_green, "thermal Green's function")
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--m-max", type=int, default=3)
    _geom_args(p)

    p = add("factorize", cmd_factorize, "unordered factorizations of n")
    p.add_argument("n", type=int)
    p.add_argument("--mode", choices=("distinct", "with_repeats"), default="distinct")

    p = add("zeros", cmd_zeros, "zeta zeros on the critical line")
    p.add_argument("--range", type=_span, required=True, help="lo:hi")
    p.add_argument("--step", type=float, default=0.05)

    p = add("rh-scan", cmd_rh_scan, "case-4 probability over a sigma x t grid")
    p.add_argument("--sigma", type=parse_range, required=True)
    p.add_argument("--t", type=parse_range, required=True)
    p.add_argument("--a", type=float, default=1.0)

    p = add("susy", cmd_susy, "|zeta(sigma + iy)|^2 over y")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--y", type=parse_range, required=True)

    p = add("duality-check", cmd_duality_check, "circle duality residuals")
    p.add_argument("--x", type=float, default=None, help="default pi a")
    p.add_argument("--s", type=parse_complex, default=complex(0.3, 2.0))
    p.add_argument("--random", type=int, default=0, help="number of random draws (uses --seed)")
    _geom_args(p)

    p = add("theta-zeta", cmd_theta_zeta, "theta-integral quadrature vs closed form")
    p.add_argument("s", type=parse_complex)

    for name in ("qseries",):
        p = add(name, cmd_qseries, "exact degeneracy coefficients")
        p.add_argument("--model", choices=("heterotic12", "ramanujan_tau", "open_fermionic"),
                       default="ramanujan_tau")
        p.add_argument("--order", type=int, default=10)

    p = add("ramanujan", cmd_ramanujan, "Ramanujan F(s) with functional-relation residual")
    p.add_argument("s", type=parse_complex)
    p.add_argument("--n-max", type=int, default=200)

    p = add("string-green", cmd_string_green, "string-modified Green's series")
    p.add_argument("--model", choices=("heterotic12", "ramanujan_tau", "open_fermionic"),
                   default="ramanujan_tau")
    p.add_argument("--order", type=int, default=20)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--alpha-prime", type=float, default=1.0)
    p.add_argument("--A", type=float, default=0.0)
    p.add_argument("--n-max", type=int, default=200)
    p.add_argument("--N-max", type=int, default=None)
    _geom_args(p)

    p = add("osc-z", cmd_osc_z, "logarithmic oscillator partition function")
    p.add_argument("--beta", type=parse_complex, required=True)
    p.add_argument("--mu", type=parse_complex, default=0j)
    p.add_argument("--a-omega", type=float, default=2.0)
    p.add_argument("--a", type=float, default=1.0)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        result = ns.fn(ns)
    except EvaluationError as e:
        sys.stderr.write(json.dumps(e.to_dict()) + "\n")
        return EXIT_EVAL
    except (ValueError, TypeError) as e:
        sys.stderr.write(json.dumps({"error": "usage", "message": str(e)}) + "\n")
        return EXIT_USAGE
    text = result if isinstance(result, str) else result.render(ns.format)
    _emit(text, ns.out)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
