"""
chemofront - free-boundary experiments for degenerate chemotaxis.

Simulates u_t = Δu^m − χ∇·(u∇v), v_t = Δv − αuv with no-flux boundaries,
tracks the support front, and builds self-similar comparison profiles whose
inequality systems are checked by direct substitution.

Quick Start:
    Method chaining style:
    >>> from chemofront import ModelParams, Simulation
    >>> sim = (Simulation(ModelParams(m=2.0, chi=6.0))
    ...     .with_bump(K0=1.0, R0=0.5, mu=1.0)
    ...     .until(0.05)
    ...     .run())
    >>> sim.frame()[['t', 'front_rho']]

    Pipe operator style:
    >>> from chemofront.verbs import with_bump, until, run
    >>> sim = ModelParams(chi=6.0) >> Simulation() >> with_bump(R0=0.5) >> until(0.05) >> run()
"""
__version__ = "0.1.0"

from chemofront.core.model import ModelParams
from chemofront.core.simulation import Simulation
from chemofront.core.state import SimulationState
from chemofront.initial_data import BumpSpec

# Import verb functions for pipe operator usage
from chemofront import verbs

__all__ = [
    'ModelParams',
    'BumpSpec',
    'Simulation',
    'SimulationState',
    'verbs',  # All verb functions available via chemofront.verbs
]
