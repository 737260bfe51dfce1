"""
Core state management for chemofront simulations.
"""
import copy
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from chemofront.core.model import ModelParams
from chemofront.initial_data import BumpSpec
from chemofront.solver import SamplingPlan, StepControls, Trace

INITIAL_KINDS = ('bump', 'barenblatt')
ATTRACTANT_KINDS = ('aggregating', 'constant')


@dataclass
class SimulationState:
    """
    Everything needed to build the initial data and run the solver.

    Each verb on Simulation returns a new instance holding an updated copy
    of this state; a finished run stores its Trace here too.
    """

    # Model and initial data
    params: ModelParams = field(default_factory=ModelParams)
    spec: BumpSpec = field(default_factory=BumpSpec)
    initial: str = 'bump'  # 'bump' or 'barenblatt'
    t_offset: float = 0.0

    # Attractant
    attractant: str = 'aggregating'  # 'aggregating' or 'constant'
    v_level: float = 0.0
    frozen_v: bool = False

    # Explicit fields override the generated ones
    u0: Optional[np.ndarray] = None
    v0: Optional[np.ndarray] = None

    # Grid
    half_length: float = 1.0
    n_cells: int = 400

    # Stepping and sampling
    controls: StepControls = field(default_factory=StepControls)
    sampling: SamplingPlan = field(default_factory=SamplingPlan)

    # Result of the last run
    trace: Optional[Trace] = None

    extra_params: Dict[str, Any] = field(default_factory=dict)

    def copy(self, **updates) -> 'SimulationState':
        """
        Create a copy of this state with updated fields.

        Args:
            **updates: Fields to update in the new state

        Returns:
            New SimulationState instance with updates applied
        """
        new_state = copy.deepcopy(self)
        for key, value in updates.items():
            if hasattr(new_state, key):
                setattr(new_state, key, value)
            else:
                new_state.extra_params[key] = value
        return new_state

    def validate(self) -> None:
        """
        Validate the simulation state.

        Raises:
            ValueError: If a choice is unknown or a size is out of range
        """
        if self.initial not in INITIAL_KINDS:
            raise ValueError(f"Initial data must be one of {INITIAL_KINDS}, got '{self.initial}'")
        if self.attractant not in ATTRACTANT_KINDS:
            raise ValueError(
                f"Attractant must be one of {ATTRACTANT_KINDS}, got '{self.attractant}'"
            )
        if self.t_offset < 0:
            raise ValueError(f"t_offset must be >= 0, got {self.t_offset}")
        if not self.half_length > 0:
            raise ValueError(f"half_length must be positive, got {self.half_length}")
