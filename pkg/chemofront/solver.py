"""
Explicit finite-volume solver for the degenerate chemotaxis system.

Face fluxes of u combine a central difference of w = u^m with an upwind
chemotactic flux; v is advanced by explicit diffusion and consumption.
Boundary faces carry no flux, so the mass of u telescopes exactly.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from chemofront.analysis import DEFAULT_REL_THRESHOLD, front_position
from chemofront.core.errors import CFLViolationError, EmptySupportError, NonFiniteStateError
from chemofront.core.model import (
    Grid, ModelParams, State, face_gradient, grad_max, integrate, lap_max, laplacian, linf,
)

logger = logging.getLogger(__name__)

TINY = 1e-300
CFL_SLACK = 1e-12

TRACE_COLUMNS = [
    't', 'mass_u', 'mass_v', 'linf_u', 'linf_v', 'gradmax_v',
    'front_rho', 'min_u', 'lapmax_v', 'steps',
]


@dataclass(frozen=True)
class StepControls:
    """
    Time-stepping controls.

    Attributes:
        cfl_diffusion: Safety factor of the diffusive limits
        cfl_advection: Safety factor of the chemotactic limit
        dt_max: Upper cap on the time step
        t_end: Final time
    """

    cfl_diffusion: float = 0.2
    cfl_advection: float = 0.4
    dt_max: float = 1.0
    t_end: float = 1.0

    def __post_init__(self) -> None:
        for name in ('cfl_diffusion', 'cfl_advection'):
            value = getattr(self, name)
            if not 0 < value <= 0.5:
                raise ValueError(f"{name} must lie in (0, 0.5], got {value}")
        if not self.dt_max > 0:
            raise ValueError(f"dt_max must be positive, got {self.dt_max}")
        if self.t_end < 0:
            raise ValueError(f"t_end must be >= 0, got {self.t_end}")

    def copy(self, **updates) -> 'StepControls':
        values = {
            'cfl_diffusion': self.cfl_diffusion, 'cfl_advection': self.cfl_advection,
            'dt_max': self.dt_max, 't_end': self.t_end,
        }
        values.update(updates)
        return StepControls(**values)


@dataclass
class SamplingPlan:
    """
    When to record observables and what to keep.

    Attributes:
        times: Explicit sample times
        every: Uniform sampling cadence
        keep_snapshots: Store (u, v) copies at every sample
        track_front: Record front_rho at every sample
        front_center: Center x0 the front distance is measured from
        rel_threshold: Relative front threshold
    """

    times: Optional[Sequence[float]] = None
    every: Optional[float] = None
    keep_snapshots: bool = True
    track_front: bool = True
    front_center: float = 0.0
    rel_threshold: float = DEFAULT_REL_THRESHOLD

    def resolve(self, t_start: float, t_end: float) -> np.ndarray:
        """Sorted unique sample times in (t_start, t_end], always ending at t_end."""
        targets = [t_end]
        if self.every is not None:
            if not self.every > 0:
                raise ValueError(f"Sampling cadence must be positive, got {self.every}")
            count = int(math.floor((t_end - t_start) / self.every + 1e-9))
            targets.extend(t_start + self.every * np.arange(1, count + 1))
        if self.times is not None:
            targets.extend(float(t) for t in self.times)
        grid = np.unique(np.asarray(targets, dtype=float))
        grid = grid[(grid > t_start) & (grid <= t_end)]
        # merge samples closer than round-off, keeping the later one so t_end survives
        keep = np.concatenate([np.diff(grid) > 1e-12 * max(1.0, abs(t_end)), [True]])
        return grid[keep]


@dataclass
class Trace:
    """
    Sampled history of a run.

    Attributes:
        times: Sample times, strictly increasing
        rows: One observables record per sample
        snapshots: State copies per sample (None where not kept)
        centers: Cell centers of the grid, for snapshot frames
        steps: Total number of solver steps taken
        max_support_growth: Largest number of cells {u > 0} gained in one step
    """

    times: List[float] = field(default_factory=list)
    rows: List[Dict[str, float]] = field(default_factory=list)
    snapshots: List[Optional[State]] = field(default_factory=list)
    centers: Optional[np.ndarray] = None
    steps: int = 0
    max_support_growth: int = 0

    def __len__(self) -> int:
        return len(self.times)

    def append(self, row: Dict[str, float], snapshot: Optional[State]) -> None:
        if self.times and row['t'] <= self.times[-1]:
            raise ValueError(f"Trace times must increase: {row['t']} after {self.times[-1]}")
        self.times.append(row['t'])
        self.rows.append(row)
        self.snapshots.append(snapshot)

    def to_frame(self) -> pd.DataFrame:
        """Observables as a DataFrame with the fixed trace column order."""
        return pd.DataFrame(self.rows, columns=TRACE_COLUMNS)

    def column(self, name: str) -> np.ndarray:
        return np.array([row[name] for row in self.rows], dtype=float)

    def snapshot_frame(self, index: int) -> pd.DataFrame:
        """Cell values x, u, v of one stored snapshot."""
        snap = self.snapshots[index]
        if snap is None:
            raise ValueError(f"No snapshot stored for sample {index} (t={self.times[index]})")
        return pd.DataFrame({'x': self.centers, 'u': snap.u, 'v': snap.v}, columns=['x', 'u', 'v'])

    def indices_in(self, t_start: float, t_end: float) -> List[int]:
        """Indices of stored snapshots with t_start ≤ t ≤ t_end."""
        slack = 1e-12 * max(1.0, abs(t_end))
        return [
            i for i, t in enumerate(self.times)
            if t_start - slack <= t <= t_end + slack and self.snapshots[i] is not None
        ]

    @property
    def final(self) -> Optional[State]:
        return self.snapshots[-1] if self.snapshots else None


def _geometric_factor(grid: Grid) -> float:
    """max_i (A_{i−½} + A_{i+½})·dx / (2·V_i), 1 on a uniform line."""
    areas = np.zeros(grid.n_cells + 1)
    areas[1:-1] = grid.face_areas
    return float(np.max((areas[:-1] + areas[1:]) * grid.dx / (2.0 * grid.weights)))


def _cfl_limit(state: State, params: ModelParams, grid: Grid, controls: StepControls) -> float:
    dx = grid.dx
    geom = _geometric_factor(grid)
    umax = float(np.max(state.u)) if state.u.size else 0.0
    diffusivity = max(params.m * umax ** (params.m - 1.0), 1.0)
    dt_u = controls.cfl_diffusion * dx ** 2 / diffusivity / geom
    dt_adv = controls.cfl_advection * dx / (params.chi * grad_max(state.v, grid) + TINY) / geom
    dt_v = controls.cfl_diffusion * dx ** 2 / geom
    dt_react = controls.cfl_diffusion / (params.alpha * umax + TINY)
    return min(dt_u, dt_adv, dt_v, dt_react)


def stable_dt(state: State, params: ModelParams, grid: Grid, controls: StepControls) -> float:
    """
    Largest step the explicit scheme accepts for this state.

    min(cfl_d·dx²/max(m·u_max^{m−1}, 1), cfl_a·dx/(χ·max|∇v| + tiny),
    cfl_d·dx², cfl_d/(α·u_max + tiny), dt_max), the first three divided by
    the radial geometric factor (1 on a line). The α·u_max term keeps the
    consumption term from driving v negative.
    """
    return min(_cfl_limit(state, params, grid, controls), controls.dt_max)


def _flux_divergence(u: np.ndarray, v: np.ndarray, params: ModelParams, grid: Grid) -> np.ndarray:
    w = u ** params.m
    velocity = params.chi * face_gradient(v, grid)
    upwind = np.where(velocity >= 0, u[:-1], u[1:])
    flux = grid.face_areas * (-face_gradient(w, grid) + velocity * upwind)
    divergence = np.zeros(grid.n_cells)
    divergence[:-1] += flux
    divergence[1:] -= flux
    return divergence / grid.weights


def step(state: State, params: ModelParams, grid: Grid, dt: float,
         controls: Optional[StepControls] = None, frozen_v: bool = False) -> State:
    """
    Advance both fields by one explicit step.

    Args:
        state: Current fields
        params: Model coefficients
        grid: Grid of the state
        dt: Step size, at most stable_dt (dt_max is not enforced here)
        controls: CFL factors used for the check (defaults if None)
        frozen_v: Keep v fixed and advance u only

    Returns:
        New State at t + dt

    Raises:
        CFLViolationError: If dt exceeds the stable step
    """
    controls = controls or StepControls()
    limit = _cfl_limit(state, params, grid, controls)
    if dt > limit * (1.0 + CFL_SLACK):
        raise CFLViolationError(f"dt={dt:.6g} exceeds the stable step {limit:.6g} at t={state.t:.6g}")

    u_new = state.u - dt * _flux_divergence(state.u, state.v, params, grid)
    if frozen_v:
        v_new = state.v.copy()
    else:
        v_new = state.v + dt * laplacian(state.v, grid) - dt * params.alpha * state.u * state.v
    return State(u=u_new, v=v_new, t=state.t + dt)


def _support_edges(u: np.ndarray) -> Optional[Tuple[int, int]]:
    positive = np.flatnonzero(u > 0)
    if positive.size == 0:
        return None
    return int(positive[0]), int(positive[-1])


def _support_growth(before: Optional[Tuple[int, int]], after: Optional[Tuple[int, int]]) -> int:
    if before is None or after is None:
        return 0
    return max(before[0] - after[0], after[1] - before[1], 0)


def observe(state: State, params: ModelParams, grid: Grid, sampling: SamplingPlan,
            steps: int) -> Dict[str, float]:
    """One trace row of observables."""
    rho = float('nan')
    if sampling.track_front:
        try:
            rho = front_position(state, grid, None, sampling.rel_threshold,
                                 m=params.m, x0=sampling.front_center)
        except EmptySupportError:
            logger.debug("Empty support at t=%.6g", state.t)
    return {
        't': state.t,
        'mass_u': integrate(state.u, grid),
        'mass_v': integrate(state.v, grid),
        'linf_u': linf(state.u),
        'linf_v': linf(state.v),
        'gradmax_v': grad_max(state.v, grid),
        'front_rho': rho,
        'min_u': float(np.min(state.u)),
        'lapmax_v': lap_max(state.v, grid),
        'steps': steps,
    }


def _check_finite(state: State, steps: int, t_before: float) -> None:
    for name in ('u', 'v'):
        if not np.all(np.isfinite(getattr(state, name))):
            raise NonFiniteStateError(steps, t_before, name)


def run(state: State, params: ModelParams, grid: Grid, controls: StepControls,
        sampling: Optional[SamplingPlan] = None, frozen_v: bool = False) -> Trace:
    """
    Integrate from state.t to controls.t_end.

    Steps are shortened to land exactly on each sample time, where one
    observables row (and optionally a snapshot) is recorded.

    Raises:
        NonFiniteStateError: If a step produces NaN or infinite values
    """
    sampling = sampling or SamplingPlan()
    state.validate(grid)
    if controls.t_end < state.t:
        raise ValueError(f"t_end={controls.t_end} is before the start time {state.t}")

    current = state.copy()
    targets = sampling.resolve(current.t, controls.t_end)
    trace = Trace(centers=grid.centers.copy())
    trace.append(observe(current, params, grid, sampling, 0),
                 current.copy() if sampling.keep_snapshots else None)
    logger.info("Run start: t=%.6g -> %.6g, %d samples, %r",
                current.t, controls.t_end, len(targets), grid)

    steps = 0
    edges = _support_edges(current.u)
    for target in targets:
        while current.t < target:
            dt = stable_dt(current, params, grid, controls)
            landing = current.t + dt >= target
            if landing:
                dt = target - current.t
            t_before = current.t
            current = step(current, params, grid, dt, controls, frozen_v)
            if landing:
                current.t = float(target)
            steps += 1
            _check_finite(current, steps, t_before)
            new_edges = _support_edges(current.u)
            trace.max_support_growth = max(trace.max_support_growth, _support_growth(edges, new_edges))
            edges = new_edges
        trace.append(observe(current, params, grid, sampling, steps),
                     current.copy() if sampling.keep_snapshots else None)

    trace.steps = steps
    if not sampling.keep_snapshots:
        trace.snapshots[-1] = current.copy()
    logger.info("Run finished: %d steps, t=%.6g, max support growth %d cell(s)/step",
                steps, current.t, trace.max_support_growth)
    return trace


def run_ordered_pair(lower: State, upper: State, params: ModelParams, grid: Grid,
                     controls: StepControls,
                     sampling: Optional[SamplingPlan] = None) -> Tuple[Trace, Trace]:
    """
    Advance two densities in lockstep against the same frozen attractant.

    Both runs take the minimum of their stable steps so they share every
    time level; v is held fixed at the value of ``upper``.
    """
    sampling = sampling or SamplingPlan()
    if not np.array_equal(lower.v, upper.v):
        raise ValueError("Ordered runs must share the same attractant field")
    states = [lower.copy(), upper.copy()]
    for item in states:
        item.validate(grid)
    targets = sampling.resolve(states[0].t, controls.t_end)
    traces = [Trace(centers=grid.centers.copy()) for _ in states]
    for item, trace in zip(states, traces):
        trace.append(observe(item, params, grid, sampling, 0), item.copy())

    steps = 0
    for target in targets:
        while states[0].t < target:
            dt = min(stable_dt(item, params, grid, controls) for item in states)
            landing = states[0].t + dt >= target
            if landing:
                dt = target - states[0].t
            t_before = states[0].t
            states = [step(item, params, grid, dt, controls, frozen_v=True) for item in states]
            steps += 1
            for item in states:
                if landing:
                    item.t = float(target)
                _check_finite(item, steps, t_before)
        for item, trace in zip(states, traces):
            trace.append(observe(item, params, grid, sampling, steps), item.copy())

    for trace in traces:
        trace.steps = steps
    logger.info("Ordered pair finished: %d lockstep steps", steps)
    return traces[0], traces[1]
