"""
Main Simulation class for chemofront.

This module provides the Simulation builder: each verb returns a new
Simulation with updated state, so runs can be configured by method
chaining or with the >> pipe operator.
"""
import logging
from dataclasses import replace
from pathlib import Path
from typing import TYPE_CHECKING, Optional, Sequence, Union

import numpy as np
import pandas as pd

from chemofront.core.model import Grid, ModelParams, State, make_grid
from chemofront.core.state import SimulationState
from chemofront.initial_data import aggregating_v0, barenblatt_u0, bump_u0, constant_v0
from chemofront.solver import Trace, run
from chemofront.utils.validation import validate_field

if TYPE_CHECKING:
    from chemofront.harness.config import ScenarioConfig

logger = logging.getLogger(__name__)


class Simulation:
    """
    Verb-based builder and runner for one chemotaxis simulation.

    Examples:
        Method chaining:
        >>> sim = (Simulation(ModelParams(m=2.0, chi=1.0))
        ...     .with_bump(K0=1.0, R0=0.5, mu=1.0)
        ...     .on_grid(half_length=1.0, n_cells=400)
        ...     .until(0.05)
        ...     .sample_every(0.005)
        ...     .run())

        Pipe operator:
        >>> from chemofront.verbs import with_bump, until, run
        >>> sim = ModelParams(chi=1.0) >> Simulation() >> with_bump(R0=0.5) >> until(0.05) >> run()

    Attributes:
        state (SimulationState): The current configuration and last trace
    """

    def __init__(self, params: Optional[ModelParams] = None,
                 state: Optional[SimulationState] = None):
        if state is not None:
            self.state = state
        else:
            self.state = SimulationState(params=params or ModelParams())

    def _copy(self, **updates) -> 'Simulation':
        return Simulation(state=self.state.copy(**updates))

    @classmethod
    def from_config(cls, config: 'ScenarioConfig') -> 'Simulation':
        """Simulation with the model, bump, grid, controls and sampling of a config."""
        return cls(state=SimulationState(
            params=config.model_params(),
            spec=config.bump_spec(),
            half_length=config.grid['half_length'],
            n_cells=config.grid['n_cells'],
            controls=config.step_controls(),
            sampling=config.sampling_plan(),
        ))

    # ============================================================
    # SETUP VERBS
    # ============================================================

    def with_model(self, **updates) -> 'Simulation':
        """
        Replace model coefficients.

        Examples:
            >>> Simulation().with_model(m=3.0, chi=2.0)
        """
        return self._copy(params=self.state.params.copy(**updates))

    def with_bump(self, **updates) -> 'Simulation':
        """Replace fields of the initial bump (K0, R0, d0, x0, mu, delta, v_floor)."""
        spec = replace(self.state.spec, **updates)
        return self._copy(spec=spec, initial='bump',
                          sampling=replace(self.state.sampling, front_center=spec.x0))

    def from_barenblatt(self, t_offset: float = 0.0) -> 'Simulation':
        """Start from the Barenblatt profile B(·, t_offset) with v ≡ 0."""
        return self._copy(initial='barenblatt', t_offset=t_offset,
                          attractant='constant', v_level=0.0)

    def with_fields(self, u0: Optional[Sequence[float]] = None,
                    v0: Optional[Sequence[float]] = None) -> 'Simulation':
        """Use explicit initial cell values instead of the generated ones."""
        updates = {}
        if u0 is not None:
            updates['u0'] = np.asarray(u0, dtype=float)
        if v0 is not None:
            updates['v0'] = np.asarray(v0, dtype=float)
        return self._copy(**updates)

    def aggregating_attractant(self) -> 'Simulation':
        """Quadratic attractant v₀ = v_floor − μ|x−x0|²/2 near the bump."""
        return self._copy(attractant='aggregating')

    def constant_attractant(self, level: float = 0.0) -> 'Simulation':
        """Spatially constant v₀."""
        return self._copy(attractant='constant', v_level=level)

    def freeze_attractant(self, frozen: bool = True) -> 'Simulation':
        """Hold v fixed at v₀ during the run."""
        return self._copy(frozen_v=frozen)

    def on_grid(self, half_length: Optional[float] = None,
                n_cells: Optional[int] = None) -> 'Simulation':
        """Set the domain half-length and/or resolution."""
        updates = {}
        if half_length is not None:
            updates['half_length'] = half_length
        if n_cells is not None:
            updates['n_cells'] = n_cells
        return self._copy(**updates)

    # ============================================================
    # TIME VERBS
    # ============================================================

    def until(self, t_end: float, **controls) -> 'Simulation':
        """
        Set the final time and optional step controls.

        Args:
            t_end: Final time
            **controls: cfl_diffusion, cfl_advection, dt_max
        """
        return self._copy(controls=self.state.controls.copy(t_end=t_end, **controls))

    def with_controls(self, **controls) -> 'Simulation':
        """Replace step controls without touching t_end unless given."""
        return self._copy(controls=self.state.controls.copy(**controls))

    def sample_every(self, every: float) -> 'Simulation':
        return self._copy(sampling=replace(self.state.sampling, every=every))

    def sample_at(self, times: Sequence[float]) -> 'Simulation':
        """Add explicit sample times (kept alongside any cadence)."""
        return self._copy(sampling=replace(self.state.sampling, times=list(times)))

    def keep_snapshots(self, keep: bool = True) -> 'Simulation':
        return self._copy(sampling=replace(self.state.sampling, keep_snapshots=keep))

    def track_front(self, center: Optional[float] = None,
                    rel_threshold: Optional[float] = None) -> 'Simulation':
        """
        Set where the traced front is measured from and its relative level.

        Args:
            center: Front center; the bump center x0 when None
            rel_threshold: Level as a fraction of max u, in (0, 1)
        """
        center = self.state.spec.x0 if center is None else center
        updates = {'front_center': center, 'track_front': True}
        if rel_threshold is not None:
            if not 0 < rel_threshold < 1:
                raise ValueError(f"rel_threshold must lie in (0, 1), got {rel_threshold}")
            updates['rel_threshold'] = rel_threshold
        return self._copy(sampling=replace(self.state.sampling, **updates))

    # ============================================================
    # EXECUTION
    # ============================================================

    def make_grid(self) -> Grid:
        return make_grid(self.state.params.dim, self.state.params.radial,
                         self.state.half_length, self.state.n_cells)

    def initial_state(self, grid: Optional[Grid] = None) -> State:
        """
        Build (u₀, v₀) on the grid.

        Raises:
            DomainError: If the initial support does not fit the domain
            GridMismatchError: If an explicit field has the wrong length
        """
        st = self.state
        st.validate()
        grid = grid or self.make_grid()
        if st.u0 is not None:
            u = validate_field(st.u0, grid.n_cells, 'u0')
        elif st.initial == 'barenblatt':
            u = barenblatt_u0(grid, st.params, st.t_offset)
        else:
            u = bump_u0(grid, st.spec, st.params)
        if st.v0 is not None:
            v = validate_field(st.v0, grid.n_cells, 'v0')
        elif st.attractant == 'constant':
            v = constant_v0(grid, st.v_level)
        else:
            v = aggregating_v0(grid, st.spec)
        return State(u=u, v=v, t=0.0)

    def run(self) -> 'Simulation':
        """
        Run the solver and store the trace.

        Returns:
            New Simulation whose state carries the trace
        """
        grid = self.make_grid()
        state = self.initial_state(grid)
        trace = run(state, self.state.params, grid, self.state.controls,
                    self.state.sampling, frozen_v=self.state.frozen_v)
        return self._copy(trace=trace)

    @property
    def trace(self) -> Trace:
        if self.state.trace is None:
            raise ValueError("Simulation has not been run yet (use run())")
        return self.state.trace

    def frame(self) -> pd.DataFrame:
        """Observables of the last run as a DataFrame."""
        return self.trace.to_frame()

    def save(self, out_dir: Union[str, Path], snapshots: bool = True) -> 'Simulation':
        """
        Write trace.csv (and snapshots/) for the last run.

        Returns:
            Self for potential chaining
        """
        from chemofront.backends.csv_backend import CsvBackend

        backend = CsvBackend()
        backend.write_trace(self.trace, out_dir)
        if snapshots:
            backend.write_snapshots(self.trace, out_dir)
        logger.info("Saved run to %s", out_dir)
        return self

    # ============================================================
    # PIPE OPERATOR SUPPORT
    # ============================================================

    def __call__(self, params: ModelParams) -> 'Simulation':
        """Allow Simulation()(params) as an alternative to params >> Simulation()."""
        return self.__rrshift__(params)

    def __rshift__(self, other):
        """
        Support for >> with the Simulation on the left.

        This allows: Simulation() >> until(1.0)
        """
        if callable(other):
            return other(self)
        return NotImplemented

    def __rrshift__(self, other):
        """
        Support for >> with the Simulation on the right.

        This allows: ModelParams(chi=1.0) >> Simulation()
        """
        if isinstance(other, ModelParams):
            return self._copy(params=other)
        if callable(other):
            return other(self)
        return NotImplemented

    def __repr__(self) -> str:
        st = self.state
        status = f"{len(st.trace)} samples" if st.trace is not None else 'not run'
        return (f"Simulation(m={st.params.m}, chi={st.params.chi}, initial='{st.initial}', "
                f"n_cells={st.n_cells}, t_end={st.controls.t_end}, {status})")
