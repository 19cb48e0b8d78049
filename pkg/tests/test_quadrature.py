import numpy as np
import pytest
from scipy.integrate import quad

from mgt_spectral import QuadResult, adaptive_quadrature
from mgt_spectral.errors import QuadratureFailure


class TestGaussKronrod:
    def test_polynomial_exact(self):
        # a single K15 panel integrates degree <= 22 polynomials exactly
        res = adaptive_quadrature(lambda x: 7 * x**6 - 3 * x**2 + 1, -1.0, 2.0,
                                  1e-12, min_intervals=1)
        exact = 2.0**7 - (-1.0) ** 7 - (2.0**3 - (-1.0) ** 3) + 3.0
        assert res.value == pytest.approx(exact, rel=1e-14)

    def test_matches_quadpack(self):
        for fn, a, b in [
            (lambda x: np.exp(-x * x), 0.0, 6.0),
            (lambda x: np.sin(10 * x) ** 2 * np.exp(-x), 0.0, 20.0),
            (lambda x: 1.0 / (1.0 + x * x), 0.0, 50.0),
        ]:
            res = adaptive_quadrature(fn, a, b, 1e-11)
            ref, _ = quad(fn, a, b, limit=500)
            assert res.value == pytest.approx(ref, abs=1e-9)

    def test_oscillatory_with_width_cap(self):
        t = 2000.0
        fn = lambda x: np.sin(t * x) ** 2 * np.exp(-x * x)
        res = adaptive_quadrature(fn, 0.0, 5.0, 1e-10, max_width=np.pi / (4 * t))
        # sin^2 averages to 1/2 at large t
        assert res.value == pytest.approx(0.5 * np.sqrt(np.pi) / 2.0, rel=1e-4)

    def test_zero_width(self):
        res = adaptive_quadrature(lambda x: x, 1.0, 1.0, 1e-10)
        assert res == QuadResult(0.0, 0.0, 0, 0)

    def test_budget_exhaustion(self):
        with pytest.raises(QuadratureFailure):
            adaptive_quadrature(lambda x: np.sin(1e5 * x), 0.0, 1.0, 1e-300,
                                node_budget=3000)

    def test_width_cap_beyond_budget(self):
        with pytest.raises(QuadratureFailure):
            adaptive_quadrature(lambda x: x, 0.0, 1.0, 1e-6, max_width=1e-9,
                                node_budget=1000)

    def test_deterministic(self):
        fn = lambda x: np.cos(37.0 * x) ** 2 / (1.0 + x)
        a = adaptive_quadrature(fn, 0.0, 10.0, 1e-11)
        b = adaptive_quadrature(fn, 0.0, 10.0, 1e-11)
        assert a.value == b.value and a.n_nodes == b.n_nodes

    def test_initial_edges_respected(self):
        sharp = lambda x: np.where(x < 1.0, 0.0, 1.0)
        res = adaptive_quadrature(sharp, 0.0, 2.0, 1e-9, initial_edges=[1.0])
        assert res.value == pytest.approx(1.0, abs=1e-9)

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            adaptive_quadrature(lambda x: x, 1.0, 0.0, 1e-9)
        with pytest.raises(ValueError):
            adaptive_quadrature(lambda x: x, 0.0, 1.0, -1e-9)
