"""
Self-similar comparison profiles and the certificates built on them.

g(x, t) = ε(τ+t)^σ [(η² − |x−x0|²/(τ+t)^β)₊]^d with d = 1/(m−1).
"""
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from chemofront.analysis import BarenblattParams
from chemofront.core.model import Grid, ModelParams

ROLES = ('upper', 'lower')
KINDS = ('shrinking', 'finite-speed', 'exact-speed-upper', 'exact-speed-lower', 'expanding')


@dataclass(frozen=True)
class SelfSimilarProfile:
    """
    Parameters (ε, τ, σ, β, η, d, x0) of a self-similar profile.

    The support at time t is the ball of radius η(τ+t)^{β/2} around x0.
    """

    epsilon: float
    tau: float
    sigma: float
    beta: float
    eta: float
    d: float
    x0: float = 0.0

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if not self.d > 0:
            raise ValueError(f"d must be positive, got {self.d}")

    def _elapsed(self, t: float) -> float:
        s = self.tau + t
        if not s > 0:
            raise ValueError(f"Profile undefined: tau + t = {s:.6g} <= 0")
        return s

    def support_radius(self, t: float) -> float:
        """η(τ+t)^{β/2}."""
        return self.eta * self._elapsed(t) ** (0.5 * self.beta)

    def support_speed(self, t: float) -> float:
        """d/dt of the support radius, η(β/2)(τ+t)^{β/2−1}."""
        return self.eta * 0.5 * self.beta * self._elapsed(t) ** (0.5 * self.beta - 1.0)

    def peak(self, t: float) -> float:
        """g(x0, t) = ε(τ+t)^σ η^{2d}."""
        return self.epsilon * self._elapsed(t) ** self.sigma * self.eta ** (2.0 * self.d)

    def to_dict(self) -> Dict[str, float]:
        return {
            'epsilon': self.epsilon, 'tau': self.tau, 'sigma': self.sigma,
            'beta': self.beta, 'eta': self.eta, 'd': self.d, 'x0': self.x0,
        }


def profile_eval(p: SelfSimilarProfile, x: Union[float, np.ndarray], t: float):
    """
    Evaluate g(x, t).

    Args:
        p: Profile parameters
        x: Coordinate(s); on radial grids pass radii with x0 = 0
        t: Time with τ + t > 0

    Raises:
        ValueError: If τ + t ≤ 0
    """
    s = p._elapsed(t)
    bracket = p.eta ** 2 - np.square(np.asarray(x, dtype=float) - p.x0) / s ** p.beta
    value = p.epsilon * s ** p.sigma * np.clip(bracket, 0.0, None) ** p.d
    return float(value) if np.ndim(value) == 0 else value


def profile_on_grid(p: SelfSimilarProfile, grid: Grid, t: float) -> np.ndarray:
    """g at the cell centers of a grid."""
    r = grid.distance_from(p.x0)
    return profile_eval(replace(p, x0=0.0), r, t)


def barenblatt_profile(params: ModelParams) -> SelfSimilarProfile:
    """
    The Barenblatt solution written as a self-similar profile.

    σ = −k, β = 2k/N, τ = 1, η² = 2mN/(k(m−1)), ε = (k(m−1)/(2mN))^{1/(m−1)}.
    """
    bp = BarenblattParams.from_model(params)
    m, N, k = bp.m, bp.N, bp.k
    ratio = k * (m - 1.0) / (2.0 * m * N)
    return SelfSimilarProfile(
        epsilon=ratio ** (1.0 / (m - 1.0)), tau=1.0, sigma=-k, beta=2.0 * k / N,
        eta=math.sqrt(1.0 / ratio), d=1.0 / (m - 1.0),
    )


@dataclass
class Certificate:
    """
    A profile with its role, validity window and verified margins.

    Attributes:
        kind: Which construction produced it
        role: 'upper' (dominates u) or 'lower' (dominated by u)
        profile: The comparison profile
        window: (t_start, t_end) of validity
        C1: Bound on ‖∇v‖∞ over the window
        C2: Bound on ‖Δv‖∞ over the window
        derived: Derived constants (t0, eps0, eps1, L, delta, ...)
        margins: Slack of every inequality of the construction
    """

    kind: str
    role: str
    profile: SelfSimilarProfile
    window: Tuple[float, float]
    C1: float = 0.0
    C2: float = 0.0
    derived: Dict[str, Any] = field(default_factory=dict)
    margins: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise ValueError(f"role must be one of {ROLES}, got '{self.role}'")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got '{self.kind}'")
        if not self.window[1] > self.window[0]:
            raise ValueError(f"Certificate window {self.window} is empty")

    @property
    def holds(self) -> bool:
        """True when every recorded margin is nonnegative."""
        return all(value >= 0 for value in self.margins.values())

    @property
    def worst(self) -> Tuple[Optional[str], float]:
        """Name and value of the smallest margin."""
        if not self.margins:
            return None, math.inf
        name = min(self.margins, key=self.margins.get)
        return name, self.margins[name]

    def copy(self, **updates) -> 'Certificate':
        return replace(self, **updates)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind,
            'role': self.role,
            'profile': self.profile.to_dict(),
            'window': {'start': self.window[0], 'end': self.window[1]},
            'C1': self.C1,
            'C2': self.C2,
            'derived': dict(self.derived),
            'margins': dict(self.margins),
            'holds': self.holds,
        }
