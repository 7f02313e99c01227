"""
Tests for the hyperbolic local volatility function and the Euler scheme.
"""

import math

import numpy as np
import pytest

from src.errors import DimensionError, DomainError
from src.models.params import Construction, HlvParams, OptionSpec, OptionStyle
from src.paths.construction import TimeGrid, incremental_path
from src.paths.hlv import euler_log_path, euler_log_paths, local_vol, log_local_vol
from src.pricing.engine import mc_price
from src.sequences.uniform_sources import SobolStream


class TestLocalVol:
    """Tests for the absolute local volatility of the normalized spot."""

    def test_black_scholes_limit(self):
        """Test that beta = 1 gives nu * s."""
        s = np.linspace(0.1, 3.0, 30)
        np.testing.assert_allclose(local_vol(s, 0.3, 1.0), 0.3 * s, rtol=1e-14)

    @pytest.mark.parametrize("beta", [0.05, 0.2, 0.5, 0.8, 1.0])
    def test_at_the_money(self, beta):
        """Test that sigma(1) = nu for every beta."""
        assert local_vol(1.0, 0.3, beta) == pytest.approx(0.3, abs=1e-14)

    def test_reference_value(self):
        """Test nu=0.3, beta=0.5, s=0.5."""
        assert local_vol(0.5, 0.3, 0.5) == pytest.approx(0.2072949, abs=1e-7)

    def test_scalar_input_returns_float(self):
        """Test that a scalar argument gives a Python float."""
        assert isinstance(local_vol(1.2, 0.3, 0.5), float)

    @pytest.mark.parametrize("s", [0.0, -1.0, [1.0, 0.0]])
    def test_non_positive_spot(self, s):
        """Test that s <= 0 raises DomainError."""
        with pytest.raises(DomainError):
            local_vol(s, 0.3, 0.5)

    @pytest.mark.parametrize("beta", [0.01, 0.2, 0.5, 1.0])
    def test_positive_for_positive_spot(self, beta):
        """Test positivity over many orders of magnitude."""
        s = np.geomspace(1e-6, 1e3, 200)
        assert np.all(local_vol(s, 0.3, beta) > 0)


class TestLogLocalVol:
    """Tests for the relative volatility in log space."""

    def test_at_the_money(self):
        """Test that y = 0 gives nu."""
        assert log_local_vol(0.0, 0.3, 0.5) == pytest.approx(0.3, abs=1e-14)

    def test_black_scholes_limit(self):
        """Test that beta = 1 gives a flat nu."""
        y = np.linspace(-2.0, 2.0, 41)
        np.testing.assert_allclose(log_local_vol(y, 0.3, 1.0), 0.3, rtol=1e-14)

    def test_reference_value(self):
        """Test y = ln 0.5 with nu=0.3, beta=0.5."""
        assert log_local_vol(math.log(0.5), 0.3, 0.5) == pytest.approx(0.4145898, abs=1e-7)

    @pytest.mark.parametrize("beta", [0.2, 0.5, 0.9])
    def test_skew_is_monotone(self, beta):
        """Test that the relative volatility decreases in the spot for beta < 1."""
        y = np.log(np.linspace(0.5, 1.5, 101))
        assert np.all(np.diff(log_local_vol(y, 0.3, beta)) < 0)


class TestEulerScheme:
    """Tests for the log-space Euler-Maruyama paths."""

    def test_zero_noise_single_step(self):
        """Test W = 0, beta = 1, n = 1: S(T) = S0 exp((r - nu^2 / 2) T)."""
        params = HlvParams(nu=0.3, beta=1.0, rate=0.03, spot=100.0)
        grid = TimeGrid(maturity=1.0, steps=1)
        assert euler_log_path([0.0], params, grid)[0] == pytest.approx(98.5112, abs=1e-4)

    def test_deterministic_growth(self, deterministic_params):
        """Test that nu = 0 gives S0 e^{r t_i} whatever the Wiener path."""
        grid = TimeGrid(maturity=1.0, steps=8)
        w = incremental_path(np.random.default_rng(1).standard_normal(8), grid)
        expected = 100.0 * np.exp(0.03 * grid.knots[1:])
        np.testing.assert_allclose(euler_log_path(w, deterministic_params, grid), expected, rtol=1e-12)

    def test_geometric_brownian_motion_increments(self):
        """Test that beta = 1 log increments are (r - nu^2/2) dt + nu dW."""
        params = HlvParams(nu=0.25, beta=1.0, rate=0.02, spot=50.0)
        grid = TimeGrid(maturity=2.0, steps=16)
        w = incremental_path(np.random.default_rng(5).standard_normal(16), grid)
        y = euler_log_paths(w, params, grid)
        dy = np.diff(y, prepend=0.0)
        dw = np.diff(w, prepend=0.0)
        expected = (0.02 - 0.5 * 0.25 ** 2) * grid.dt + 0.25 * dw
        np.testing.assert_allclose(dy, expected, rtol=1e-10, atol=1e-14)

    def test_dimension_mismatch(self, desk_params):
        """Test that a path longer than the grid is rejected."""
        grid = TimeGrid(maturity=1.0, steps=4)
        with pytest.raises(DimensionError):
            euler_log_paths(np.zeros(5), desk_params, grid)

    @pytest.mark.parametrize("beta", [0.1, 0.5, 1.0])
    def test_positive_under_extreme_shocks(self, beta):
        """Test that huge Gaussian shocks still give finite positive prices."""
        params = HlvParams(nu=0.3, beta=beta)
        grid = TimeGrid(maturity=1.0, steps=16)
        z = np.array([[8.0] * 16, [-8.0] * 16, [8.0, -8.0] * 8])
        s = euler_log_path(incremental_path(z, grid), params, grid)
        assert np.all(np.isfinite(s)) and np.all(s > 0)

    def test_batch_matches_single_paths(self, desk_params):
        """Test that batching does not change any path."""
        grid = TimeGrid(maturity=1.0, steps=8)
        w = incremental_path(np.random.default_rng(9).standard_normal((3, 8)), grid)
        batch = euler_log_paths(w, desk_params, grid)
        for i in range(3):
            np.testing.assert_array_equal(batch[i], euler_log_paths(w[i], desk_params, grid))

    @pytest.mark.slow
    def test_discounted_spot_is_a_martingale(self, sobol_table):
        """Test E[S(T)] = S0 at r = 0 with 2^16 QMC paths."""
        params = HlvParams(nu=0.3, beta=0.5, rate=0.0, spot=100.0)
        spec = OptionSpec(strike=1e-6, maturity=1.0, fixings=256, style=OptionStyle.EUROPEAN_CALL)
        estimate = mc_price(spec, params, SobolStream(sobol_table, 256), Construction.BRIDGE, 1 << 16)
        assert abs((estimate.value + spec.strike) / params.spot - 1.0) <= 2e-3
