"""
Verb functions for use with the >> operator.

Each verb returns a function of one Simulation; they are alternatives to
method chaining.

Examples:
    >>> from chemofront import ModelParams, Simulation
    >>> from chemofront.verbs import with_bump, on_grid, until, sample_every, run
    >>>
    >>> sim = (ModelParams(m=2.0, chi=1.0)
    ...     >> Simulation()
    ...     >> with_bump(K0=1.0, R0=0.5, mu=1.0)
    ...     >> on_grid(n_cells=400)
    ...     >> until(0.05)
    ...     >> sample_every(0.005)
    ...     >> run())
"""
from pathlib import Path
from typing import Optional, Sequence, Union


# ============================================================
# SETUP VERBS
# ============================================================

def with_model(**updates):
    """Replace model coefficients."""
    def _apply(sim):
        return sim.with_model(**updates)
    return _apply


def with_bump(**updates):
    """Replace fields of the initial bump."""
    def _apply(sim):
        return sim.with_bump(**updates)
    return _apply


def from_barenblatt(t_offset: float = 0.0):
    """Start from the Barenblatt profile."""
    def _apply(sim):
        return sim.from_barenblatt(t_offset)
    return _apply


def with_fields(u0: Optional[Sequence[float]] = None, v0: Optional[Sequence[float]] = None):
    """Use explicit initial cell values."""
    def _apply(sim):
        return sim.with_fields(u0, v0)
    return _apply


def aggregating_attractant():
    def _apply(sim):
        return sim.aggregating_attractant()
    return _apply


def constant_attractant(level: float = 0.0):
    def _apply(sim):
        return sim.constant_attractant(level)
    return _apply


def freeze_attractant(frozen: bool = True):
    """Hold v fixed during the run."""
    def _apply(sim):
        return sim.freeze_attractant(frozen)
    return _apply


def on_grid(half_length: Optional[float] = None, n_cells: Optional[int] = None):
    """Set the domain half-length and/or resolution."""
    def _apply(sim):
        return sim.on_grid(half_length, n_cells)
    return _apply


# ============================================================
# TIME VERBS
# ============================================================

def until(t_end: float, **controls):
    """Set the final time and optional step controls."""
    def _apply(sim):
        return sim.until(t_end, **controls)
    return _apply


def with_controls(**controls):
    """Replace step controls (cfl_diffusion, cfl_advection, dt_max, t_end)."""
    def _apply(sim):
        return sim.with_controls(**controls)
    return _apply


def sample_every(every: float):
    def _apply(sim):
        return sim.sample_every(every)
    return _apply


def sample_at(times: Sequence[float]):
    def _apply(sim):
        return sim.sample_at(times)
    return _apply


def keep_snapshots(keep: bool = True):
    def _apply(sim):
        return sim.keep_snapshots(keep)
    return _apply


def track_front(center: Optional[float] = None, rel_threshold: Optional[float] = None):
    """Choose the front center and relative threshold recorded in the trace."""
    def _apply(sim):
        return sim.track_front(center, rel_threshold)
    return _apply


# ============================================================
# EXECUTION VERBS
# ============================================================

def run():
    """Run the solver."""
    def _apply(sim):
        return sim.run()
    return _apply


def save(out_dir: Union[str, Path], snapshots: bool = True):
    """Write trace.csv and snapshots for the last run."""
    def _apply(sim):
        return sim.save(out_dir, snapshots)
    return _apply
