"""
Tests for model parameters, grids and discrete operators.
"""
import math

import numpy as np
import pytest

from chemofront.core.errors import GridMismatchError
from chemofront.core.model import (
    ModelParams,
    State,
    grad_max,
    holder_quotient,
    integrate,
    lap_max,
    laplacian,
    linf,
    make_grid,
)


class TestModelParams:
    """Test parameter invariants."""

    def test_defaults(self):
        params = ModelParams()
        assert params.m == 2.0
        assert params.dim == 1
        assert params.d == 1.0

    def test_canonical_exponent(self):
        assert ModelParams(m=3.0).d == pytest.approx(0.5)

    @pytest.mark.parametrize('m', [1.0, 0.5])
    def test_rejects_nondegenerate_exponent(self, m):
        with pytest.raises(ValueError, match='m must be > 1'):
            ModelParams(m=m)

    def test_rejects_negative_chi(self):
        with pytest.raises(ValueError):
            ModelParams(chi=-1.0)

    def test_multi_dim_requires_radial(self):
        with pytest.raises(ValueError, match='radial'):
            ModelParams(dim=2)
        assert ModelParams(dim=2, radial=True).dim == 2

    def test_copy_revalidates(self):
        params = ModelParams(chi=1.0)
        assert params.copy(chi=2.0).chi == 2.0
        assert params.chi == 1.0
        with pytest.raises(ValueError):
            params.copy(m=0.9)


class TestGrid:
    """Test grid construction and geometry."""

    def test_line_spacing(self):
        grid = make_grid(1, False, 1.0, 10)
        assert grid.dx == pytest.approx(0.2)
        assert grid.centers[0] == pytest.approx(-0.9)
        assert grid.measure == pytest.approx(2.0)
        assert len(grid.face_areas) == 9

    @pytest.mark.parametrize('dim', [1, 2, 3])
    def test_radial_shell_volumes_are_exact(self, dim):
        grid = make_grid(dim, True, 2.0, 50)
        assert grid.measure == pytest.approx(grid.exact_measure, rel=1e-12)
        assert np.all(grid.centers > 0)

    def test_too_few_cells(self):
        with pytest.raises(ValueError, match='n_cells'):
            make_grid(1, False, 1.0, 4)

    def test_radial_distance_needs_origin(self):
        grid = make_grid(1, True, 1.0, 16)
        with pytest.raises(ValueError):
            grid.distance_from(0.5)

    def test_boundary_distance(self):
        grid = make_grid(1, False, 1.0, 16)
        assert grid.boundary_distance(0.25) == pytest.approx(1.25)


class TestDiscreteOperators:
    """Test integrals, norms and the finite-volume Laplacian."""

    @pytest.fixture
    def grid(self):
        return make_grid(1, False, 1.0, 100)

    def test_integrate_constant(self, grid):
        assert integrate(np.full(grid.n_cells, 3.0), grid) == pytest.approx(6.0)

    def test_integrate_wrong_length(self, grid):
        with pytest.raises(GridMismatchError):
            integrate(np.ones(grid.n_cells + 1), grid)

    def test_linf(self):
        assert linf(np.array([1.0, -4.0, 2.0])) == 4.0
        assert linf(np.array([])) == 0.0

    def test_grad_max_of_linear_field(self, grid):
        assert grad_max(3.0 * grid.centers, grid) == pytest.approx(3.0)

    def test_laplacian_of_constant_vanishes(self, grid):
        assert lap_max(np.full(grid.n_cells, 2.5), grid) == pytest.approx(0.0, abs=1e-12)

    def test_laplacian_of_quadratic(self, grid):
        lap = laplacian(grid.centers ** 2, grid)
        assert np.allclose(lap[1:-1], 2.0, atol=1e-8)

    @pytest.mark.parametrize('dim', [1, 2, 3])
    def test_laplacian_conserves(self, dim):
        grid = make_grid(dim, True, 1.0, 64)
        values = np.cos(3.0 * grid.centers) + grid.centers
        assert np.dot(laplacian(values, grid), grid.weights) == pytest.approx(0.0, abs=1e-9)

    def test_holder_quotient_of_linear_field(self, grid):
        values = grid.centers.copy()
        assert holder_quotient(values, grid, 1.0) == pytest.approx(1.0)
        assert holder_quotient(values, grid, 0.5) == pytest.approx(math.sqrt(grid.dx))


class TestState:
    """Test the field state container."""

    def test_copy_is_deep(self):
        state = State(u=np.ones(8), v=np.zeros(8))
        other = state.copy(t=1.0)
        other.u[0] = 5.0
        assert state.u[0] == 1.0
        assert other.t == 1.0

    def test_copy_unknown_field_goes_to_meta(self):
        state = State(u=np.ones(8), v=np.zeros(8)).copy(label='upper')
        assert state.meta['label'] == 'upper'

    def test_validate_negative_density(self):
        with pytest.raises(ValueError, match='negative'):
            State(u=-np.ones(8), v=np.zeros(8)).validate()

    def test_validate_length_mismatch(self):
        grid = make_grid(1, False, 1.0, 16)
        with pytest.raises(GridMismatchError):
            State(u=np.ones(8), v=np.ones(8)).validate(grid)
