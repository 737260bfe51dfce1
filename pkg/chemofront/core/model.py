"""
Model parameters, the cell-centered mesh and the field state.

Everything here is a plain value: grids and states are dataclasses holding
numpy arrays, and the norm/integral helpers are pure functions of them.
Radial grids use exact shell volumes as cell weights and sphere areas at the
faces, so the flux-form solver telescopes exactly.
"""
import copy
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from chemofront.core.errors import GridMismatchError

logger = logging.getLogger(__name__)

MIN_CELLS = 8

# Area of the unit sphere S^{N-1}; the N = 1 radial case is the half-line.
_SPHERE_AREA = {1: 1.0, 2: 2.0 * math.pi, 3: 4.0 * math.pi}


@dataclass(frozen=True)
class ModelParams:
    """
    Coefficients of the degenerate chemotaxis system.

    u_t = Δu^m − χ∇·(u∇v),  v_t = Δv − αuv, with no-flux boundaries.

    Attributes:
        m: Diffusion exponent, strictly greater than 1
        chi: Chemotactic coefficient χ
        alpha: Attractant consumption rate α
        dim: Spatial dimension N (1, 2 or 3)
        radial: Whether the problem is reduced to radial symmetry
    """

    m: float = 2.0
    chi: float = 0.0
    alpha: float = 1.0
    dim: int = 1
    radial: bool = False

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        """
        Check the parameter invariants.

        Raises:
            ValueError: If any coefficient is out of range
        """
        if not self.m > 1:
            raise ValueError(f"Diffusion exponent m must be > 1 (degenerate regime), got {self.m}")
        if self.chi < 0:
            raise ValueError(f"Chemotactic coefficient chi must be >= 0, got {self.chi}")
        if self.alpha < 0:
            raise ValueError(f"Consumption rate alpha must be >= 0, got {self.alpha}")
        if self.dim not in (1, 2, 3):
            raise ValueError(f"Dimension must be 1, 2 or 3, got {self.dim}")
        if self.dim > 1 and not self.radial:
            raise ValueError("Dimensions 2 and 3 are only supported with radial=True")

    @property
    def d(self) -> float:
        """Canonical profile exponent 1/(m−1)."""
        return 1.0 / (self.m - 1.0)

    def copy(self, **updates) -> 'ModelParams':
        """Return a validated copy with fields replaced."""
        values = {
            'm': self.m, 'chi': self.chi, 'alpha': self.alpha,
            'dim': self.dim, 'radial': self.radial,
        }
        values.update(updates)
        return ModelParams(**values)


@dataclass(frozen=True, eq=False)
class Grid:
    """
    Uniform cell-centered mesh with geometric weights.

    A 1D grid covers [−half_length, half_length]; a radial grid covers
    [0, half_length] with a reflecting face at r = 0 (no cell sits on it).

    Attributes:
        dim: Spatial dimension N
        radial: Whether coordinates are radii
        half_length: Domain radius or half-width R_Ω
        n_cells: Number of cells
        dx: Uniform cell width
        centers: Cell-center coordinates, shape (n_cells,)
        weights: Cell measures, shape (n_cells,)
        face_areas: Areas of the n_cells − 1 interior faces
    """

    dim: int
    radial: bool
    half_length: float
    n_cells: int
    dx: float
    centers: np.ndarray
    weights: np.ndarray
    face_areas: np.ndarray

    @property
    def measure(self) -> float:
        """Discrete measure of the domain (sum of the weights)."""
        return float(self.weights.sum())

    @property
    def exact_measure(self) -> float:
        """Analytic measure of the discretized domain."""
        if not self.radial:
            return 2.0 * self.half_length
        return _SPHERE_AREA[self.dim] * self.half_length ** self.dim / self.dim

    @property
    def left_edge(self) -> float:
        """Coordinate of the outer face on the negative side (or r = 0)."""
        return 0.0 if self.radial else -self.half_length

    def distance_from(self, x0: float = 0.0) -> np.ndarray:
        """
        Distance |x − x0| of every cell center.

        Args:
            x0: Center coordinate; must be 0 on radial grids

        Returns:
            Array of distances, shape (n_cells,)
        """
        if self.radial:
            if x0 != 0.0:
                raise ValueError(f"Radial grids are centered at the origin; got x0={x0}")
            return self.centers.copy()
        return np.abs(self.centers - x0)

    def boundary_distance(self, x0: float = 0.0) -> float:
        """Largest distance from x0 to the domain boundary (Ω ⊂ B_R(x0))."""
        if self.radial:
            return self.half_length
        return self.half_length + abs(x0)

    def __repr__(self) -> str:
        kind = f"radial N={self.dim}" if self.radial else "1D line"
        return f"Grid({kind}, half_length={self.half_length}, n_cells={self.n_cells}, dx={self.dx:.4g})"


@dataclass
class State:
    """
    Cell values of the density u and attractant v at time t.

    Attributes:
        u: Cell density, nonnegative
        v: Attractant concentration, nonnegative
        t: Current time
    """

    u: np.ndarray
    v: np.ndarray
    t: float = 0.0
    meta: dict = field(default_factory=dict)

    def copy(self, **updates) -> 'State':
        """
        Create a deep copy of this state with updated fields.

        Args:
            **updates: Fields to replace in the new state

        Returns:
            New State instance
        """
        new_state = copy.deepcopy(self)
        for key, value in updates.items():
            if hasattr(new_state, key):
                setattr(new_state, key, value)
            else:
                new_state.meta[key] = value
        return new_state

    def validate(self, grid: Optional[Grid] = None) -> None:
        """
        Check nonnegativity and matching lengths.

        Args:
            grid: Optional grid the fields must match

        Raises:
            GridMismatchError: If lengths disagree
            ValueError: If a field has negative entries
        """
        if len(self.u) != len(self.v):
            raise GridMismatchError(f"u has {len(self.u)} cells but v has {len(self.v)}")
        if grid is not None and len(self.u) != grid.n_cells:
            raise GridMismatchError(f"State has {len(self.u)} cells, grid has {grid.n_cells}")
        if np.any(self.u < 0):
            raise ValueError(f"Density u has negative entries (min {self.u.min():.3g})")
        if np.any(self.v < 0):
            raise ValueError(f"Attractant v has negative entries (min {self.v.min():.3g})")


def make_grid(dim: int = 1, radial: bool = False, half_length: float = 1.0,
              n_cells: int = 100) -> Grid:
    """
    Build a uniform cell-centered grid.

    Args:
        dim: Spatial dimension N ∈ {1, 2, 3}
        radial: Reduce to radial symmetry (required when dim > 1)
        half_length: Domain radius (radial) or half-width (1D)
        n_cells: Number of cells, at least 8

    Returns:
        Grid satisfying its invariants

    Raises:
        ValueError: On invalid dimension/radial combination or sizes

    Examples:
        >>> make_grid(1, False, 1.0, 10).dx
        0.2
    """
    if dim not in (1, 2, 3):
        raise ValueError(f"Dimension must be 1, 2 or 3, got {dim}")
    if dim > 1 and not radial:
        raise ValueError("Dimensions 2 and 3 require radial=True")
    if not half_length > 0:
        raise ValueError(f"half_length must be positive, got {half_length}")
    if int(n_cells) != n_cells or n_cells < MIN_CELLS:
        raise ValueError(f"n_cells must be an integer >= {MIN_CELLS}, got {n_cells}")
    n_cells = int(n_cells)

    if radial:
        dx = half_length / n_cells
        edges = dx * np.arange(n_cells + 1)
        centers = 0.5 * (edges[:-1] + edges[1:])
        area = _SPHERE_AREA[dim]
        weights = area * np.diff(edges ** dim) / dim
        face_areas = area * edges[1:-1] ** (dim - 1)
    else:
        dx = 2.0 * half_length / n_cells
        edges = -half_length + dx * np.arange(n_cells + 1)
        centers = 0.5 * (edges[:-1] + edges[1:])
        weights = np.full(n_cells, dx)
        face_areas = np.ones(n_cells - 1)

    grid = Grid(
        dim=dim, radial=radial, half_length=float(half_length), n_cells=n_cells,
        dx=dx, centers=centers, weights=weights, face_areas=face_areas,
    )
    logger.debug("Built %r", grid)
    return grid


def _check_length(values: np.ndarray, grid: Grid) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.n_cells,):
        raise GridMismatchError(f"Field has shape {values.shape}, grid expects ({grid.n_cells},)")
    return values


def integrate(values: np.ndarray, grid: Grid) -> float:
    """
    Discrete integral Σ field_i · weight_i over the domain.

    Raises:
        GridMismatchError: If the field length does not match the grid
    """
    values = _check_length(values, grid)
    return float(np.dot(values, grid.weights))


def linf(values: np.ndarray) -> float:
    """Maximum absolute cell value."""
    values = np.asarray(values, dtype=float)
    return float(np.max(np.abs(values))) if values.size else 0.0


def grad_max(values: np.ndarray, grid: Grid) -> float:
    """Maximum over interior faces of |field_{i+1} − field_i| / dx."""
    values = _check_length(values, grid)
    return float(np.max(np.abs(np.diff(values)))) / grid.dx


def face_gradient(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Difference quotients at the n_cells − 1 interior faces."""
    return np.diff(values) / grid.dx


def laplacian(values: np.ndarray, grid: Grid) -> np.ndarray:
    """
    Finite-volume Laplacian with zero flux through the outer faces.

    Args:
        values: Cell values
        grid: Grid supplying face areas and cell weights

    Returns:
        Cell-averaged Laplacian, shape (n_cells,)
    """
    values = _check_length(values, grid)
    flux = grid.face_areas * face_gradient(values, grid)
    divergence = np.zeros(grid.n_cells)
    divergence[:-1] += flux
    divergence[1:] -= flux
    return divergence / grid.weights


def lap_max(values: np.ndarray, grid: Grid) -> float:
    """Maximum absolute discrete Laplacian, the measured ‖Δv‖∞."""
    return linf(laplacian(values, grid))


def holder_quotient(values: np.ndarray, grid: Grid, exponent: float) -> float:
    """
    Discrete Hölder quotient max |f_{i+1} − f_i| / dx^exponent.

    A monitor only: bounded values under refinement are consistent with a
    uniform C^exponent bound.
    """
    values = _check_length(values, grid)
    return float(np.max(np.abs(np.diff(values)))) / grid.dx ** exponent
