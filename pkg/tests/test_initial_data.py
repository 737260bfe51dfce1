"""
Tests for bump, attractant and Barenblatt initial data.
"""
import numpy as np
import pytest

from chemofront.core.errors import DomainError
from chemofront.core.model import ModelParams, make_grid
from chemofront.initial_data import (
    BumpSpec,
    aggregating_v0,
    barenblatt_u0,
    bump_u0,
    constant_v0,
    hypothesis_shrinking,
    shrinking_threshold,
)


@pytest.fixture
def grid():
    return make_grid(1, False, 1.0, 200)


class TestBumpSpec:
    """Test defaults and validation of the bump description."""

    def test_resolved_defaults(self):
        spec = BumpSpec(R0=0.5, mu=2.0)
        assert spec.width == pytest.approx(0.1)
        assert spec.floor == pytest.approx(0.5 * 2.0 * 0.7 ** 2)
        assert spec.exponent(ModelParams(m=3.0)) == pytest.approx(0.5)

    def test_canonical_exponent(self):
        params = ModelParams(m=2.0)
        assert BumpSpec().is_canonical(params)
        assert not BumpSpec(d0=2.0).is_canonical(params)

    def test_rejects_subcanonical_exponent(self):
        with pytest.raises(ValueError, match='d0'):
            BumpSpec(d0=0.5).validate(ModelParams(m=2.0))

    def test_rejects_wide_annulus(self):
        with pytest.raises(ValueError, match='delta'):
            BumpSpec(R0=0.5, delta=0.6).validate()

    def test_to_dict_round_trip(self):
        spec = BumpSpec(K0=2.0, R0=0.3, mu=1.5)
        assert BumpSpec(**spec.to_dict()) == spec


class TestBump:
    """Test the algebraic bump u0."""

    def test_matches_formula(self, grid):
        spec = BumpSpec(K0=2.0, R0=0.5)
        u0 = bump_u0(grid, spec, ModelParams(m=3.0))
        expected = 2.0 * np.clip(0.25 - grid.centers ** 2, 0.0, None) ** 0.5
        assert np.allclose(u0, expected)

    def test_compact_support(self, grid):
        u0 = bump_u0(grid, BumpSpec(R0=0.5), ModelParams())
        assert np.all(u0[np.abs(grid.centers) >= 0.5] == 0.0)
        assert u0.max() <= 0.25

    def test_off_center(self, grid):
        u0 = bump_u0(grid, BumpSpec(R0=0.3, x0=0.4), ModelParams())
        assert grid.centers[np.argmax(u0)] == pytest.approx(0.4, abs=grid.dx)

    def test_support_must_fit(self, grid):
        with pytest.raises(DomainError):
            bump_u0(grid, BumpSpec(R0=0.5, x0=0.6), ModelParams())


class TestAttractant:
    """Test the aggregating and constant attractants."""

    def test_quadratic_inside_structure_ball(self, grid):
        spec = BumpSpec(R0=0.5, mu=1.0, delta=0.1)
        v0 = aggregating_v0(grid, spec)
        r = np.abs(grid.centers)
        inside = r <= 0.6
        assert np.allclose(v0[inside], spec.floor - 0.5 * r[inside] ** 2)

    def test_flat_outside_blend(self, grid):
        v0 = aggregating_v0(grid, BumpSpec(R0=0.5, mu=1.0, delta=0.1))
        outside = v0[np.abs(grid.centers) >= 0.7]
        assert np.ptp(outside) == pytest.approx(0.0, abs=1e-12)
        assert v0.min() >= 0.0

    def test_nonincreasing_in_radius(self, grid):
        v0 = aggregating_v0(grid, BumpSpec(R0=0.5, mu=1.0, delta=0.1))
        right = v0[grid.centers > 0]
        assert np.all(np.diff(right) <= 1e-15)

    def test_floor_too_small(self, grid):
        with pytest.raises(ValueError, match='v_floor'):
            aggregating_v0(grid, BumpSpec(R0=0.5, mu=1.0, v_floor=0.01))

    def test_constant(self, grid):
        assert np.all(constant_v0(grid, 2.0) == 2.0)
        with pytest.raises(ValueError):
            constant_v0(grid, -1.0)


class TestShrinkingHypothesis:
    """Test the initial-shrinking threshold."""

    def test_threshold_canonical(self):
        assert shrinking_threshold(ModelParams(m=2.0), BumpSpec(K0=1.0, R0=1.0)) == pytest.approx(8.0)

    def test_above_threshold(self):
        satisfied, margin = hypothesis_shrinking(ModelParams(m=2.0, chi=9.0),
                                                 BumpSpec(K0=1.0, R0=1.0, mu=1.0))
        assert satisfied
        assert margin == pytest.approx(1.0)

    def test_at_threshold_is_not_enough(self):
        satisfied, margin = hypothesis_shrinking(ModelParams(m=2.0, chi=8.0),
                                                 BumpSpec(K0=1.0, R0=1.0, mu=1.0))
        assert not satisfied
        assert margin == pytest.approx(0.0)

    def test_noncanonical_spread(self):
        # R0 > 1 with d0 > d raises the threshold by R0^{2(d0-d)}
        spec = BumpSpec(K0=1.0, R0=0.9, d0=2.0, delta=0.1)
        assert shrinking_threshold(ModelParams(m=2.0), spec) == pytest.approx(8.0)
        spec = BumpSpec(K0=1.0, R0=1.5, d0=2.0, delta=0.1)
        assert shrinking_threshold(ModelParams(m=2.0), spec) == pytest.approx(8.0 * 1.5 ** 2)


class TestBarenblattStart:
    """Test the Barenblatt initial profile."""

    def test_profile_at_zero(self):
        grid = make_grid(1, False, 6.0, 120)
        u0 = barenblatt_u0(grid, ModelParams(m=2.0))
        assert np.allclose(u0, np.clip(1.0 - grid.centers ** 2 / 12.0, 0.0, None))

    def test_support_must_fit(self):
        with pytest.raises(DomainError):
            barenblatt_u0(make_grid(1, False, 3.0, 60), ModelParams(m=2.0))
