"""Scenario presets for chemofront."""
import copy
from typing import Any, Dict

from chemofront.utils.helpers import merge_dicts

SCENARIOS = (
    'pme-validate', 'shrinking', 'finite-speed', 'exact-speed',
    'expanding', 'decay', 'ordering',
)

_BASE: Dict[str, Any] = {
    'model': {'m': 2.0, 'chi': 0.0, 'alpha': 1.0, 'dim': 1, 'radial': False},
    'bump': {'K0': 1.0, 'R0': 0.5, 'd0': None, 'x0': 0.0, 'mu': 0.0,
             'delta': None, 'v_floor': None},
    'grid': {'half_length': 1.0, 'n_cells': 400, 'resolutions': None},
    'controls': {'cfl_diffusion': 0.2, 'cfl_advection': 0.4, 'dt_max': 1.0, 't_end': 1.0},
    'sampling': {'every': None, 'times': None, 'keep_snapshots': True},
    'options': {},
    'sweep': {},
    'output_dir': 'out',
    'threads': None,
}

# Per-scenario overrides of _BASE
_OVERRIDES: Dict[str, Dict[str, Any]] = {
    'pme-validate': {
        'grid': {'half_length': 6.0, 'n_cells': 800, 'resolutions': [200, 400, 800]},
        'controls': {'t_end': 1.0},
        'sampling': {'every': 0.1},
        'options': {'linf_tol': 2e-2, 'min_order': 0.8},
    },
    'shrinking': {
        'model': {'chi': 9.0},
        'bump': {'d0': 1.0, 'mu': 1.0, 'delta': 0.1},
        'controls': {'t_end': 0.05},
        'sampling': {'every': 0.005},
        'options': {'dense_samples': 20, 'allow_no_hypothesis': False},
    },
    'finite-speed': {
        'model': {'chi': 1.0},
        'controls': {'t_end': 0.1},
        'sampling': {'every': 0.005},
        'options': {'R_envelope': 0.8, 'v_level': 1.0, 'dense_samples': 20},
    },
    'exact-speed': {
        'model': {'chi': 1.0},
        'bump': {'mu': 1.0, 'delta': 0.1},
        'grid': {'n_cells': 1600},
        'controls': {'t_end': 0.01},
        'sampling': {'every': 0.00025},
        'options': {'gap': 0.1, 'fit_horizon': 0.005, 'speed_rtol': 0.15, 'speed_atol': 0.08},
    },
    'expanding': {
        'model': {'chi': 1.0, 'alpha': 5.0},
        'bump': {'K0': 4.0, 'mu': 1.0, 'delta': 0.1},
        'grid': {'n_cells': 32},
        'controls': {'t_end': 45.0},
        'sampling': {'every': 0.1},
        'options': {'delta_request': None, 'max_iterations': 5},
    },
    'decay': {
        'model': {'chi': 1.0, 'alpha': 5.0},
        'bump': {'K0': 4.0, 'mu': 1.0, 'delta': 0.1},
        'grid': {'n_cells': 32},
        'controls': {'t_end': 45.0},
        'sampling': {'every': 0.1},
        'options': {'min_r2': 0.95, 'final_grad_ratio': 1e-3},
    },
    'ordering': {
        'model': {'chi': 1.0},
        'bump': {'mu': 1.0, 'delta': 0.1},
        'controls': {'t_end': 0.1},
        'sampling': {'every': 0.01},
        'options': {'lower_scale': 0.5, 'lower_R0': 0.4, 'order_tol': 1e-10},
    },
}


def get_scenario_preset(name: str) -> Dict[str, Any]:
    """
    Get the full default configuration of a scenario.

    Args:
        name: Scenario name (e.g., 'shrinking', 'exact-speed')

    Returns:
        A fresh nested dict; callers may mutate it

    Raises:
        ValueError: If the scenario is unknown
    """
    if name not in SCENARIO_PRESETS:
        raise ValueError(f"Unknown scenario: {name}. Choose from {', '.join(SCENARIOS)}")
    return copy.deepcopy(SCENARIO_PRESETS[name])


def _build() -> Dict[str, Dict[str, Any]]:
    return {
        name: merge_dicts(_BASE, {'scenario': name}, _OVERRIDES[name])
        for name in SCENARIOS
    }


SCENARIO_PRESETS: Dict[str, Dict[str, Any]] = _build()
