"""Scenario harness: configs, runners and sweeps."""
from chemofront.harness.config import ScenarioConfig, cli_overrides, load_config
from chemofront.harness.scenarios import RUNNERS, Outcome, certify_scenario, run_scenario
from chemofront.harness.sweep import expand_points, parse_param, point_config, sweep

__all__ = [
    'ScenarioConfig',
    'cli_overrides',
    'load_config',
    'RUNNERS',
    'Outcome',
    'certify_scenario',
    'run_scenario',
    'expand_points',
    'parse_param',
    'point_config',
    'sweep',
]
