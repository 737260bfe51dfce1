"""Presets module initialization."""
from chemofront.presets.scenarios import (
    get_scenario_preset,
    SCENARIO_PRESETS,
    SCENARIOS,
)

__all__ = ['get_scenario_preset', 'SCENARIO_PRESETS', 'SCENARIOS']
