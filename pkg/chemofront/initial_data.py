"""
Structured initial data.

Compactly supported algebraic bumps for the density, quadratic aggregating
profiles for the attractant, the Barenblatt source profile, and the threshold
that decides whether chemotaxis beats diffusion at t = 0.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from chemofront.analysis import BarenblattParams, barenblatt_eval, barenblatt_front_radius
from chemofront.core.errors import DomainError
from chemofront.core.model import Grid, ModelParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BumpSpec:
    """
    Parameters of the initial bump and of the aggregating attractant.

    Attributes:
        K0: Amplitude coefficient
        R0: Initial support radius
        d0: Bump exponent; None means the canonical 1/(m−1)
        x0: Bump center (0 on radial grids)
        mu: Aggregation strength μ
        delta: Annulus width δ; None means R0/5
        v_floor: Additive constant of v₀; None means μ(R0+2δ)²/2
    """

    K0: float = 1.0
    R0: float = 0.5
    d0: Optional[float] = None
    x0: float = 0.0
    mu: float = 0.0
    delta: Optional[float] = None
    v_floor: Optional[float] = None

    @property
    def width(self) -> float:
        """Resolved annulus width δ."""
        return self.delta if self.delta is not None else 0.2 * self.R0

    @property
    def floor(self) -> float:
        """Resolved v_floor."""
        if self.v_floor is not None:
            return self.v_floor
        return 0.5 * self.mu * (self.R0 + 2.0 * self.width) ** 2

    def exponent(self, params: ModelParams) -> float:
        """Resolved bump exponent d0."""
        return self.d0 if self.d0 is not None else params.d

    def is_canonical(self, params: ModelParams) -> bool:
        """Whether d0 equals 1/(m−1)."""
        return math.isclose(self.exponent(params), params.d, rel_tol=1e-12, abs_tol=0.0)

    def validate(self, params: Optional[ModelParams] = None, grid: Optional[Grid] = None) -> None:
        """
        Check the bump invariants.

        Raises:
            ValueError: If a coefficient is out of range
            DomainError: If the closed support ball leaves the domain
        """
        if not self.K0 > 0:
            raise ValueError(f"K0 must be positive, got {self.K0}")
        if not self.R0 > 0:
            raise ValueError(f"R0 must be positive, got {self.R0}")
        if self.mu < 0:
            raise ValueError(f"mu must be >= 0, got {self.mu}")
        if not 0 < self.width < self.R0:
            raise ValueError(f"delta must lie in (0, R0={self.R0}), got {self.width}")
        if params is not None and self.exponent(params) < params.d - 1e-12:
            raise ValueError(
                f"d0 must be >= 1/(m-1) = {params.d:.6g}, got {self.exponent(params)}"
            )
        if grid is not None:
            if grid.radial and self.x0 != 0.0:
                raise DomainError(f"Radial grids need x0 = 0, got {self.x0}")
            if not self.R0 + abs(self.x0) < grid.half_length:
                raise DomainError(
                    f"Bump ball B(x0={self.x0}, R0={self.R0}) is not strictly inside "
                    f"the domain of half-length {grid.half_length}"
                )

    def to_dict(self) -> dict:
        return {
            'K0': self.K0, 'R0': self.R0, 'd0': self.d0, 'x0': self.x0,
            'mu': self.mu, 'delta': self.delta, 'v_floor': self.v_floor,
        }


def bump_u0(grid: Grid, spec: BumpSpec, params: ModelParams) -> np.ndarray:
    """
    Sample u₀ = K0·[(R0² − |x − x0|²)₊]^{d0} at the cell centers.

    Raises:
        DomainError: If the bump is not strictly inside the domain

    Examples:
        >>> grid = make_grid(1, False, 2.0, 400)
        >>> u0 = bump_u0(grid, BumpSpec(K0=1.0, R0=1.0), ModelParams(m=2.0))
    """
    spec.validate(params, grid)
    r = grid.distance_from(spec.x0)
    base = np.clip(spec.R0 ** 2 - r ** 2, 0.0, None)
    return spec.K0 * base ** spec.exponent(params)


def _ramp_integral(r: np.ndarray, start: float, width: float) -> np.ndarray:
    """∫₀^r ρ·s(ρ) dρ for the cosine cutoff s: 1 before start, 0 after start + width."""
    k = math.pi / width
    inner = 0.5 * r ** 2
    phase = k * (r - start)
    ramp = (
        0.5 * start ** 2
        + 0.25 * (r ** 2 - start ** 2)
        + 0.5 * (r * np.sin(phase) / k + (np.cos(phase) - 1.0) / k ** 2)
    )
    end = start + width
    outer = 0.5 * start ** 2 + 0.25 * (end ** 2 - start ** 2) - 1.0 / k ** 2
    return np.where(r <= start, inner, np.where(r >= end, outer, ramp))


def aggregating_v0(grid: Grid, spec: BumpSpec) -> np.ndarray:
    """
    Quadratic aggregating attractant blended to a constant.

    v₀ = v_floor − μ|x − x0|²/2 on B_{R0+δ}(x0); the radial slope is then
    damped by a cosine ramp over [R0+δ, R0+2δ], leaving v₀ constant beyond,
    so the discrete normal derivative vanishes at the outer faces.

    Raises:
        ValueError: If v_floor is too small for v₀ to stay nonnegative
    """
    spec.validate(grid=grid)
    start = spec.R0 + spec.width
    if start + spec.width + abs(spec.x0) > grid.half_length:
        logger.warning(
            "Attractant blend [%.4g, %.4g] reaches past the domain edge %.4g",
            start, start + spec.width, grid.half_length - abs(spec.x0),
        )
    drop = spec.mu * float(_ramp_integral(np.array(start + spec.width), start, spec.width))
    if spec.floor < drop:
        raise ValueError(
            f"v_floor={spec.floor:.6g} is too small: v0 would reach {spec.floor - drop:.3g} < 0"
        )
    r = grid.distance_from(spec.x0)
    return spec.floor - spec.mu * _ramp_integral(r, start, spec.width)


def constant_v0(grid: Grid, value: float = 0.0) -> np.ndarray:
    """Spatially constant attractant."""
    if value < 0:
        raise ValueError(f"Attractant level must be >= 0, got {value}")
    return np.full(grid.n_cells, float(value))


def shrinking_threshold(params: ModelParams, spec: BumpSpec) -> float:
    """The χμ level 4m/(m−1)·K0^{m−1}·max{1, R0^{2((m−1)d0−1)}}."""
    m = params.m
    d0 = spec.exponent(params)
    spread = max(1.0, spec.R0 ** (2.0 * ((m - 1.0) * d0 - 1.0)))
    return 4.0 * m / (m - 1.0) * spec.K0 ** (m - 1.0) * spread


def hypothesis_shrinking(params: ModelParams, spec: BumpSpec) -> Tuple[bool, float]:
    """
    Margin of the initial-shrinking hypothesis.

    Returns:
        (satisfied, margin) with margin = χμ − threshold and satisfied ⇔ margin > 0
    """
    margin = params.chi * spec.mu - shrinking_threshold(params, spec)
    return margin > 0, margin


def barenblatt_u0(grid: Grid, params: ModelParams, t_offset: float = 0.0) -> np.ndarray:
    """
    Sample the Barenblatt profile B(·, t_offset) centered at the origin.

    Raises:
        DomainError: If the support at t_offset is not strictly inside the domain
    """
    if t_offset < 0:
        raise ValueError(f"t_offset must be >= 0, got {t_offset}")
    bp = BarenblattParams.from_model(params)
    radius = barenblatt_front_radius(t_offset, bp)
    if not radius < grid.half_length:
        raise DomainError(
            f"Barenblatt support radius {radius:.6g} at t={t_offset} does not fit "
            f"inside half-length {grid.half_length}"
        )
    return barenblatt_eval(grid.distance_from(0.0), t_offset, bp)
