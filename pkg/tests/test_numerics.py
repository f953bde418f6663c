import math

import numpy as np
import pytest

from casimir.constants import ZETA3
from casimir.numerics import (ConvergenceError, QuadratureSettings,
                              adaptive_quad, euler_maclaurin,
                              guarded_derivative, matsubara_sum)

TIGHT = QuadratureSettings(rel_tol=1e-9)

# (integrand, lo, hi, exact) battery of analytically known integrals
BATTERY = [
    (lambda y: y * y / np.expm1(y), 1e-12, 60.0, 2.0 * ZETA3),
    (lambda y: y**3 * np.exp(-y), 0.0, 60.0, 6.0),
    (lambda y: np.ones_like(y), 0.0, 1.0, 1.0),
    (lambda y: np.sin(y), 0.0, math.pi, 2.0),
    (lambda y: y**3, 0.0, 1.0, 0.25),
    (lambda y: np.exp(-y), 0.0, 10.0, 1.0 - math.exp(-10.0)),
    (lambda y: 1.0 / y, 1.0, 2.0, math.log(2.0)),
    (lambda y: y**1.5, 0.0, 1.0, 0.4),
    (lambda y: np.cos(y) ** 2, 0.0, 2.0 * math.pi, math.pi),
    (lambda y: y**4 * np.exp(-y), 0.0, 60.0, 24.0),
]


class TestAdaptiveQuad:
    @pytest.mark.parametrize("idx", range(len(BATTERY)))
    def test_known_integrals(self, idx):
        f, lo, hi, exact = BATTERY[idx]
        val, err = adaptive_quad(f, lo, hi, TIGHT)
        assert val == pytest.approx(exact, rel=1e-8)

    def test_error_estimate_bounds_truth(self):
        covered = 0
        for f, lo, hi, exact in BATTERY:
            val, err = adaptive_quad(f, lo, hi, TIGHT)
            if abs(val - exact) <= max(err, 1e-15 * abs(exact)):
                covered += 1
        assert covered >= 0.95 * len(BATTERY)

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            adaptive_quad(lambda y: y, 1.0, 1.0)

    def test_budget_exhaustion_carries_partial(self):
        settings = QuadratureSettings(rel_tol=1e-10, max_subdivisions=2)
        with pytest.raises(ConvergenceError) as excinfo:
            adaptive_quad(lambda y: np.sin(40.0 * y) ** 2 + y**8, 0.0, 6.0,
                          settings)
        assert excinfo.value.partial is not None
        assert excinfo.value.error_estimate > 0

    def test_non_finite_integrand_rejected(self):
        def f(y):
            with np.errstate(divide="ignore"):
                return 1.0 / (y - 0.5234)

        with pytest.raises(ValueError):
            adaptive_quad(f, 0.0, 1.0, TIGHT)

    def test_seeds_equivalent(self):
        f = BATTERY[1][0]
        v1, _ = adaptive_quad(f, 0.0, 60.0, TIGHT)
        v2, _ = adaptive_quad(f, 0.0, 60.0, TIGHT, seeds=(1.0, 5.0, 20.0))
        assert v1 == pytest.approx(v2, rel=1e-9)


class TestMatsubaraSum:
    def test_half_weight_indicator(self):
        val, diag = matsubara_sum(lambda m: 1.0 if m == 0 else 0.0,
                                  QuadratureSettings())
        assert val == 0.5

    def test_geometric(self):
        val, diag = matsubara_sum(lambda m: math.exp(-m), TIGHT)
        assert val == pytest.approx(0.5 + 1.0 / (math.e - 1.0), rel=1e-8)
        assert diag.last_term_fraction < TIGHT.rel_tol

    def test_min_m_prevents_early_stop(self):
        # three leading zeros would satisfy the stop rule without min_m
        def term(m):
            return 0.0 if m < 5 else math.exp(-(m - 5))

        val, _ = matsubara_sum(term, TIGHT, min_m=8)
        exact = 1.0 / (1.0 - math.exp(-1.0))
        assert val == pytest.approx(exact, rel=1e-8)

    def test_budget_error(self):
        settings = QuadratureSettings(matsubara_m_max=50)
        with pytest.raises(ConvergenceError) as excinfo:
            matsubara_sum(lambda m: 1.0 / (m + 1.0), settings)
        assert excinfo.value.diagnostics is not None

    def test_schedule_independent_reduction(self):
        # simulate out-of-order term evaluation: precompute in a shuffled
        # order, then hand the cached values to the engine
        rng = np.random.default_rng(11)
        order = rng.permutation(400)
        cache = {}
        for m in order:
            cache[int(m)] = math.exp(-0.05 * m) * math.cos(0.3 * m)
        direct, _ = matsubara_sum(lambda m: math.exp(-0.05 * m) * math.cos(0.3 * m),
                                  TIGHT)
        cached, _ = matsubara_sum(lambda m: cache.get(m, math.exp(-0.05 * m)
                                                      * math.cos(0.3 * m)), TIGHT)
        assert direct == cached


class TestEulerMaclaurin:
    EXACT = 0.5 + 1.0 / (math.e - 1.0)

    def test_exponential_with_supplied_derivatives(self):
        val = euler_maclaurin(lambda m: math.exp(-m), TIGHT, k_terms=2,
                              odd_derivatives=[-1.0, -1.0])
        assert val == pytest.approx(self.EXACT, abs=1e-4)

    def test_exponential_with_fd_derivatives(self):
        val = euler_maclaurin(lambda m: math.exp(-m), TIGHT, k_terms=2)
        assert val == pytest.approx(self.EXACT, abs=1e-4)

    def test_error_decreases_with_order(self):
        errors = []
        for k in (1, 2, 3):
            val = euler_maclaurin(lambda m: math.exp(-m), TIGHT, k_terms=k,
                                  odd_derivatives=[-1.0, -1.0, -1.0])
            errors.append(abs(val - self.EXACT))
        assert errors[0] > errors[1] > errors[2]

    def test_vanishing_derivatives_reduce_to_integral(self):
        f = lambda m: math.exp(-m * m)
        settings = QuadratureSettings(rel_tol=1e-10)
        val = euler_maclaurin(f, settings, k_terms=2, odd_derivatives=[0.0, 0.0])
        fvec = lambda xs: np.exp(-np.atleast_1d(xs) ** 2)
        integral, _ = adaptive_quad(fvec, 0.0, 16.0, settings)
        assert val == pytest.approx(integral, rel=1e-9)
        assert val == pytest.approx(math.sqrt(math.pi) / 2.0, rel=1e-9)

    def test_k_terms_validation(self):
        with pytest.raises(ValueError):
            euler_maclaurin(lambda m: math.exp(-m), TIGHT, k_terms=5)


class TestGuardedDerivative:
    def test_parabola(self):
        val, err = guarded_derivative(lambda x: x * x, 3.0, 0.5)
        assert val == pytest.approx(6.0, abs=1e-8)

    def test_sine_at_origin(self):
        # Richardson leaves an O(h^4) residual, so the step must be small
        val, err = guarded_derivative(math.sin, 0.0, 0.02)
        assert val == pytest.approx(1.0, abs=1e-8)

    def test_error_estimate_reasonable(self):
        val, err = guarded_derivative(lambda x: math.exp(2 * x), 0.4, 0.2)
        assert abs(val - 2.0 * math.exp(0.8)) <= max(err, 1e-10)

    def test_non_finite_raises(self):
        with pytest.raises(ValueError):
            guarded_derivative(lambda x: float("nan"), 0.0, 0.1)

    def test_bad_scale(self):
        with pytest.raises(ValueError):
            guarded_derivative(math.sin, 0.0, 0.0)


class TestSettings:
    def test_rel_tol_bounds(self):
        with pytest.raises(ValueError):
            QuadratureSettings(rel_tol=0.5)
        with pytest.raises(ValueError):
            QuadratureSettings(rel_tol=1e-13)

    def test_y_max_floor(self):
        with pytest.raises(ValueError):
            QuadratureSettings(y_max=10.0)

    def test_scaled_clamps(self):
        s = QuadratureSettings(rel_tol=1e-11).scaled(1e-6)
        assert s.rel_tol > 1e-12
