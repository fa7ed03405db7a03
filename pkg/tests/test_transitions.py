from __future__ import annotations

import math
import random

import mpmath
import numpy as np
import pytest

from zlab.errors import DomainError, PoleError
from zlab.greens import Geometry
from zlab.transitions import (
    MixingSpec,
    lerch_mean_square_asymptotic,
    mixing_norm,
    rh_scan,
    scan,
    susy_potential,
    time_averaged_prob,
    transition_prob,
    transition_prob_partial,
    transition_prob_two_state,
)

FIRST_ZERO = 14.134725141734693
PERIOD = 2 * math.pi / math.log(2)


def c4_oracle(sigma: float, t: float) -> float:
    """|eta(s)|^2 / zeta(sigma)^2 in extended precision."""
    with mpmath.workdps(30):
        s = mpmath.mpc(sigma, t)
        return float(abs(mpmath.altzeta(s)) ** 2 / mpmath.zeta(sigma) ** 2)


class TestMixingSpec:
    def test_unknown_case(self):
        with pytest.raises(DomainError):
            MixingSpec("c5", 0.5)

    def test_partial_needs_N(self):
        with pytest.raises(DomainError):
            MixingSpec("partial", 0.5)
        with pytest.raises(DomainError):
            MixingSpec("partial", 0.5, N=1)

    def test_negative_sigma(self):
        with pytest.raises(DomainError):
            MixingSpec("c1", -0.1)

    def test_unmixed(self):
        assert MixingSpec("c4", 0.0).unmixed


class TestNorms:
    def test_c4_norm(self):
        assert mixing_norm(MixingSpec("c4", 0.75)) == pytest.approx(float(mpmath.zeta(0.75)), rel=1e-12)

    def test_c4_pole(self):
        with pytest.raises(PoleError):
            mixing_norm(MixingSpec("c4", 1.0))

    @pytest.mark.parametrize("case", ["c1", "c2"])
    def test_sigma_zero_poles(self, case):
        with pytest.raises(PoleError):
            mixing_norm(MixingSpec(case, 0.0))

    def test_c3_pole(self):
        with pytest.raises(PoleError):
            mixing_norm(MixingSpec("c3", 1.0))

    def test_partial(self):
        assert mixing_norm(MixingSpec("partial", 1.0, N=3)) == pytest.approx(1 + 1 / 2 + 1 / 3)


class TestProbabilities:
    @pytest.mark.parametrize("case", ["c1", "c2", "c3", "c4"])
    def test_unit_interval(self, case):
        rng = random.Random(3)
        for _ in range(60):
            # continued norms (sigma < a) do not bound the amplitude; see the figure grid below
            lo = 1.05 if case in ("c3", "c4") else 0.05
            sigma = rng.uniform(lo, 3.0)
            p = transition_prob(MixingSpec(case, sigma, Geometry(1.0, 1.0)), rng.uniform(-40, 40))
            assert -1e-12 <= p <= 1 + 1e-12

    @pytest.mark.parametrize("case", ["c3", "c4"])
    def test_figure_grid_bounded(self, case):
        spec = MixingSpec(case, 0.75)
        assert all(0 <= transition_prob(spec, t) <= 1 + 1e-9 for t in np.linspace(0, 50, 201))

    def test_c3p_not_bounded(self):
        # the pure-log norm 1/a does not dominate the amplitude
        assert transition_prob(MixingSpec("c3p", 0.75), 0.0) > 1

    def test_continued_norm_not_bounded(self):
        assert max(transition_prob(MixingSpec("c4", 0.1), t) for t in np.linspace(0, 40, 81)) > 1

    def test_c1_peak(self):
        assert transition_prob(MixingSpec("c1", 0.75), math.pi) == 1.0

    def test_c1_unmixed(self):
        assert transition_prob(MixingSpec("c1", 0.0), math.pi) == 1.0
        assert transition_prob(MixingSpec("c1", 0.0), 1.0) == 0.0

    def test_c2_peak_and_minimum(self):
        g = Geometry(1.0, 1.0)
        spec = MixingSpec("c2", 0.75, g)
        assert transition_prob(spec, math.pi) == pytest.approx(1.0, rel=1e-14)
        q = math.exp(-0.75)
        assert transition_prob(spec, 0.0) == pytest.approx(((1 - q) / (1 + q)) ** 2, rel=1e-13)

    def test_c4_at_rest(self):
        p = transition_prob(MixingSpec("c4", 0.75), 0.0)
        assert p == pytest.approx(c4_oracle(0.75, 0.0), rel=1e-10)
        assert p == pytest.approx(0.0358, abs=5e-5)

    @pytest.mark.parametrize("sigma, t", [(0.75, 3.0), (0.5, 14.0), (1.5, -7.5), (2.5, 40.0)])
    def test_c4_oracle(self, sigma, t):
        assert transition_prob(MixingSpec("c4", sigma), t) == pytest.approx(c4_oracle(sigma, t), rel=1e-9)

    def test_c4_off_unit_radius(self):
        g = Geometry(2.0, 1.0)
        p = transition_prob(MixingSpec("c4", 1.5, g), 2.0)
        # direct mode sum with alternating phases e^(i n pi)
        n = np.arange(0, 200001, dtype=float)
        amp = np.sum(((-1.0) ** n) * np.exp(-complex(1.5, 2.0) * np.log(n / 2 + 1)))
        z = float(mpmath.zeta(1.5, 2.0)) * 2.0 ** 1.5
        assert p == pytest.approx(abs(amp) ** 2 / z ** 2, rel=1e-4)


class TestTwoState:
    def test_closed_form_matches_partial(self):
        rng = random.Random(7)
        for _ in range(1000):
            sigma, t = rng.uniform(0, 4), rng.uniform(-100, 100)
            assert abs(transition_prob_partial(2, sigma, t) - transition_prob_two_state(sigma, t)) < 1e-13

    @pytest.mark.parametrize("t", [0.0, 1.3, 17.0, 49.9])
    def test_periodicity(self, t):
        p0 = transition_prob_two_state(0.75, t)
        assert transition_prob_two_state(0.75, t + PERIOD) == pytest.approx(p0, abs=1e-14)
        assert transition_prob_partial(2, 0.75, t + PERIOD) == pytest.approx(p0, abs=1e-14)

    def test_minimum_ratio(self):
        r = 2 ** -0.75
        assert transition_prob_two_state(0.75, 0.0) == pytest.approx(((1 - r) / (1 + r)) ** 2, rel=1e-13)

    def test_partial_N_small(self):
        with pytest.raises(DomainError):
            transition_prob_partial(1, 0.5, 0.0)


class TestScans:
    @pytest.mark.parametrize("N", [4, 16])
    def test_partial_positive(self, N):
        table = scan(MixingSpec("partial", 0.75, N=N), np.arange(0, 50.001, 0.05))
        assert min(r[1] for r in table.rows) > 0

    def test_c4_positive(self):
        table = scan(MixingSpec("c4", 0.75), np.arange(0, 50.001, 0.05))
        assert len(table.rows) == 1001
        assert min(r[1] for r in table.rows) > 1e-4

    def test_row_errors(self):
        table = scan(MixingSpec("c1", 0.0, Geometry(1.0, 1.0)), [1.0])
        assert table.rows[0][1] == 0.0
        table = scan(MixingSpec("c4", 1.0), [0.0, 1.0])
        assert all(r[1] is None and r[2].startswith("pole") for r in table.rows)

    def test_empty_grid(self):
        with pytest.raises(DomainError):
            scan(MixingSpec("c4", 0.75), [])

    def test_threads_deterministic(self):
        grid = np.linspace(0, 20, 41)
        a = scan(MixingSpec("c4", 0.75), grid, threads=1)
        b = scan(MixingSpec("c4", 0.75), grid, threads=4)
        assert a.rows == b.rows

    def test_rh_scan(self):
        table, pmin, where = rh_scan([0.6, 0.75, 0.9], np.linspace(0, 30, 61))
        assert pmin > 0
        assert len(table.rows) == 183
        assert where[0] in (0.6, 0.75, 0.9)

    def test_rh_scan_empty(self):
        with pytest.raises(DomainError):
            rh_scan([], [1.0])


class TestSusy:
    def test_vanishes_at_zero(self):
        assert susy_potential(0.5, FIRST_ZERO) < 1e-8

    def test_positive_off_line(self):
        ys = np.linspace(0, 30, 301)
        assert min(susy_potential(0.0, y) for y in ys) > 1e-4

    def test_value(self):
        assert susy_potential(2.0, 0.0) == pytest.approx((math.pi ** 2 / 6) ** 2, rel=1e-14)

    def test_pole(self):
        with pytest.raises(PoleError):
            susy_potential(1.0, 0.0)


class TestTimeAverage:
    def test_point_limit(self):
        v = time_averaged_prob(1.0, 0.75)
        assert v == pytest.approx(transition_prob(MixingSpec("c4", 0.75), 1.0), rel=1e-12)

    def test_against_quadrature(self):
        T = 20.0
        v = time_averaged_prob(T, 1.5, steps=4000)
        with mpmath.workdps(20):
            ref = mpmath.quad(lambda t: abs(mpmath.altzeta(mpmath.mpc(1.5, t))) ** 2, [1, 5, 10, 15, T])
            ref = float(ref / (T - 1) / mpmath.zeta(1.5) ** 2)
        assert v == pytest.approx(ref, rel=1e-8)

    def test_asymptotic_two_sigma(self):
        v = time_averaged_prob(500.0, 0.75, norm="two_sigma", steps=20000)
        pred = lerch_mean_square_asymptotic(500.0, 0.75)
        assert abs(v - pred) < 0.1 * pred

    def test_domain(self):
        with pytest.raises(DomainError):
            time_averaged_prob(0.5, 0.75)
        with pytest.raises(DomainError):
            time_averaged_prob(10.0, 0.75, norm="other")
        with pytest.raises(PoleError):
            time_averaged_prob(10.0, 0.5, norm="two_sigma")

    def test_asymptotic_domain(self):
        with pytest.raises(DomainError):
            lerch_mean_square_asymptotic(500.0, 0.4)
        assert lerch_mean_square_asymptotic(500.0, 0.75, leading_only=True) == 1.0


class TestPartialLimit:
    @pytest.mark.parametrize("sigma, t", [(3.0, 0.0), (3.0, 5.0), (4.0, 12.0)])
    def test_partial_tends_to_c4(self, sigma, t):
        p_inf = transition_prob(MixingSpec("c4", sigma), t)
        p_n = transition_prob_partial(20000, sigma, t)
        assert p_n == pytest.approx(p_inf, rel=1e-6)
