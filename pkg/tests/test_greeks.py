"""
Tests for finite-difference Greeks with and without path recycling.
"""

import math

import numpy as np
import pytest

from src.errors import ShiftDomainError
from src.models.params import GreekShifts, HlvParams, OptionSpec, OptionStyle, Quantity
from src.pricing.black_scholes import bs_european_call, bs_european_delta
from src.pricing.greeks import greeks, greeks_many
from src.sequences.uniform_sources import MersenneTwisterStream, SobolStream

SPOT_ONLY = [Quantity.PRICE, Quantity.DELTA, Quantity.GAMMA]


class TestGreekValues:
    """Tests for the Greek estimates."""

    def test_deterministic_model(self, sobol_table, deterministic_params):
        """Test nu = 0 with a deep in-the-money strike: Delta = e^{-rT} x_bar, Gamma = 0."""
        spec = OptionSpec(strike=50.0, fixings=4)
        shifts = GreekShifts(spot_shift=1.0, nu_shift=0.01, beta_shift=0.005)
        report = greeks(
            spec, deterministic_params, SobolStream(sobol_table, 4), "bridge", 16, shifts, quantities=SPOT_ONLY
        )
        x_bar = math.exp(0.03 * 5 / 8)
        assert report.delta == pytest.approx(math.exp(-0.03) * x_bar, abs=1e-9)
        assert report.gamma == pytest.approx(0.0, abs=1e-8)
        assert report.price == pytest.approx(math.exp(-0.03) * (100.0 * x_bar - 50.0), rel=1e-12)
        assert report.vega_nu is None and report.vega_beta is None

    def test_far_out_of_the_money(self, sobol_table, desk_params):
        """Test that K = 1e6 gives zero price and zero Greeks."""
        report = greeks(OptionSpec(strike=1e6, fixings=8), desk_params, SobolStream(sobol_table, 8), "bridge", 256)
        assert report.price == 0.0
        assert report.delta == 0.0
        assert report.gamma == 0.0
        assert report.vega_nu == 0.0
        assert report.vega_beta == 0.0

    def test_european_black_scholes_limit(self, sobol_table):
        """Test Delta and nu-Vega of a one-step European call at beta = 1."""
        params = HlvParams(nu=0.3, beta=1.0, rate=0.03, spot=100.0)
        spec = OptionSpec(strike=100.0, maturity=1.0, fixings=1, style=OptionStyle.EUROPEAN_CALL)
        report = greeks(
            spec, params, SobolStream(sobol_table, 1), "incremental", 1 << 16,
            quantities=[*SPOT_ONLY, Quantity.VEGA_NU],
        )
        d1 = (0.03 + 0.045) / 0.3
        assert report.price == pytest.approx(bs_european_call(100.0, 100.0, 0.03, 0.3, 1.0), rel=1e-3)
        assert abs(report.delta - bs_european_delta(100.0, 100.0, 0.03, 0.3, 1.0)) <= 5e-3
        assert report.vega_nu == pytest.approx(100.0 * math.exp(-0.5 * d1 * d1) / math.sqrt(2 * math.pi), abs=0.05)
        assert report.vega_beta is None

    def test_strikes_together_match_single(self, sobol_table, desk_params):
        """Test that Greeks for several strikes equal separate runs."""
        specs = [OptionSpec(strike=k, fixings=8) for k in (90.0, 110.0)]
        together = greeks_many(specs, desk_params, SobolStream(sobol_table, 8), "bridge", 512)
        for spec, report in zip(specs, together):
            alone = greeks(spec, desk_params, SobolStream(sobol_table, 8), "bridge", 512)
            assert alone.delta == pytest.approx(report.delta, rel=1e-10)
            assert alone.vega_beta == pytest.approx(report.vega_beta, rel=1e-10)

    @pytest.mark.slow
    def test_gamma_positive_at_the_money(self, sobol_table, desk_params):
        """Test convexity of the Asian call in the spot."""
        report = greeks(
            OptionSpec(strike=100.0, fixings=64), desk_params, SobolStream(sobol_table, 64), "bridge", 1 << 14
        )
        assert report.gamma > 0
        assert 0 < report.delta < 1


class TestShiftDomain:
    """Tests for bumps leaving the parameter domain."""

    def test_beta_at_upper_bound(self, sobol_table):
        """Test that beta = 1 cannot be bumped up."""
        params = HlvParams(beta=1.0)
        with pytest.raises(ShiftDomainError) as exc_info:
            greeks(OptionSpec(strike=100.0, fixings=4), params, SobolStream(sobol_table, 4), "bridge", 16)
        assert "parameter shift" in str(exc_info.value)

    def test_beta_at_upper_bound_without_beta_vega(self, sobol_table):
        """Test that spot Greeks remain available at beta = 1."""
        params = HlvParams(beta=1.0)
        report = greeks(
            OptionSpec(strike=100.0, fixings=4), params, SobolStream(sobol_table, 4), "bridge", 64,
            quantities=SPOT_ONLY,
        )
        assert report.vega_beta is None

    def test_spot_shift_too_large(self, sobol_table, desk_params):
        """Test that S0 - h <= 0 is rejected."""
        shifts = GreekShifts(spot_shift=150.0, nu_shift=0.003, beta_shift=0.005)
        with pytest.raises(ShiftDomainError):
            greeks(OptionSpec(strike=100.0, fixings=4), desk_params, SobolStream(sobol_table, 4), "bridge", 16, shifts)

    def test_nu_shift_too_large(self, sobol_table, desk_params):
        """Test that nu - e <= 0 is rejected."""
        shifts = GreekShifts(spot_shift=1.0, nu_shift=0.5, beta_shift=0.005)
        with pytest.raises(ShiftDomainError):
            greeks(OptionSpec(strike=100.0, fixings=4), desk_params, SobolStream(sobol_table, 4), "bridge", 16, shifts)


class TestPathRecycling:
    """Tests for point consumption and reproducibility."""

    def test_recycled_run_is_reproducible(self, sobol_table, desk_params):
        """Test that replaying the same points gives identical Greeks."""
        stream = SobolStream(sobol_table, 8)
        spec = OptionSpec(strike=100.0, fixings=8)
        first = greeks(spec, desk_params, stream.snapshot(), "bridge", 512)
        second = greeks(spec, desk_params, stream.snapshot(), "bridge", 512)
        assert first.model_dump() == second.model_dump()

    def test_recycling_consumes_n_points(self, sobol_table, desk_params):
        """Test that all bumps share one block of N points."""
        stream = SobolStream(sobol_table, 8)
        greeks(OptionSpec(strike=100.0, fixings=8), desk_params, stream, "bridge", 200)
        assert stream.cursor == 201

    def test_independent_blocks_consume_one_block_per_evaluation(self, sobol_table, desk_params):
        """Test seven blocks for all quantities and three for spot Greeks only."""
        spec = OptionSpec(strike=100.0, fixings=8)
        full = SobolStream(sobol_table, 8)
        greeks(spec, desk_params, full, "bridge", 200, recycle=False)
        assert full.cursor == 1 + 7 * 200
        spot_only = SobolStream(sobol_table, 8)
        greeks(spec, desk_params, spot_only, "bridge", 200, recycle=False, quantities=SPOT_ONLY)
        assert spot_only.cursor == 1 + 3 * 200

    def test_thread_count_does_not_change_result(self, desk_params):
        """Test bit-identical Greeks for one and three workers."""
        spec = OptionSpec(strike=100.0, fixings=8)
        one = greeks(spec, desk_params, MersenneTwisterStream(8, seed=4), "bridge", 600, chunk_size=64, workers=1)
        three = greeks(spec, desk_params, MersenneTwisterStream(8, seed=4), "bridge", 600, chunk_size=64, workers=3)
        assert one.model_dump() == three.model_dump()

    @pytest.mark.slow
    def test_recycling_reduces_delta_variance(self, desk_params):
        """Test that recycled Delta varies at least five times less across runs."""
        spec = OptionSpec(strike=100.0, fixings=64)
        n_paths = 1 << 12
        base = MersenneTwisterStream(64, seed=20240611)
        recycled, independent = [], []
        for run in range(10):
            block = base.partition(run, 3 * n_paths)
            recycled.append(
                greeks(spec, desk_params, block.snapshot(), "incremental", n_paths, quantities=SPOT_ONLY).delta
            )
            independent.append(
                greeks(spec, desk_params, block, "incremental", n_paths, quantities=SPOT_ONLY, recycle=False).delta
            )
        assert np.std(independent) >= 5.0 * np.std(recycled)
