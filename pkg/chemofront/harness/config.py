"""
Typed scenario configuration and JSON loading.

A config is the scenario preset deep-merged with the user's JSON file and
then with command-line overrides. ``ScenarioConfig.validate`` reports every
problem at once.
"""
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from chemofront.core.errors import ConfigError
from chemofront.core.model import Grid, ModelParams, make_grid
from chemofront.initial_data import BumpSpec, hypothesis_shrinking
from chemofront.presets.scenarios import SCENARIOS, get_scenario_preset
from chemofront.solver import SamplingPlan, StepControls
from chemofront.utils.helpers import merge_dicts, set_dotted
from chemofront.utils.validation import check_number

logger = logging.getLogger(__name__)

MODEL_KEYS = ('m', 'chi', 'alpha', 'dim', 'radial')
BUMP_KEYS = ('K0', 'R0', 'd0', 'x0', 'mu', 'delta', 'v_floor')
CONTROL_KEYS = ('cfl_diffusion', 'cfl_advection', 'dt_max', 't_end')
SECTIONS = ('model', 'bump', 'grid', 'controls', 'sampling', 'options', 'sweep')


@dataclass
class ScenarioConfig:
    """
    Fully resolved scenario configuration.

    Sections are kept as plain dicts so the resolved config can be echoed
    verbatim into report.json; the typed objects are built on demand.
    """

    scenario: str
    model: Dict[str, Any] = field(default_factory=dict)
    bump: Dict[str, Any] = field(default_factory=dict)
    grid: Dict[str, Any] = field(default_factory=dict)
    controls: Dict[str, Any] = field(default_factory=dict)
    sampling: Dict[str, Any] = field(default_factory=dict)
    options: Dict[str, Any] = field(default_factory=dict)
    sweep: Dict[str, List[Any]] = field(default_factory=dict)
    output_dir: str = 'out'
    threads: Optional[int] = None

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ScenarioConfig':
        """
        Build a config from a nested dict, filling gaps from the scenario preset.

        Raises:
            ConfigError: If the scenario is missing/unknown or a key is not recognized
        """
        scenario = data.get('scenario')
        if scenario not in SCENARIOS:
            raise ConfigError([f"scenario must be one of {list(SCENARIOS)}, got {scenario!r}"])
        merged = merge_dicts(get_scenario_preset(scenario), data)
        unknown = sorted(set(merged) - set(SECTIONS) - {'scenario', 'output_dir', 'threads'})
        problems = [f"unknown top-level key '{key}'" for key in unknown]
        for section, keys in (('model', MODEL_KEYS), ('bump', BUMP_KEYS), ('controls', CONTROL_KEYS)):
            for key in sorted(set(merged[section]) - set(keys)):
                problems.append(f"unknown key '{section}.{key}'")
        if problems:
            raise ConfigError(problems)
        return cls(
            scenario=scenario,
            **{section: dict(merged[section]) for section in SECTIONS},
            output_dir=str(merged['output_dir']),
            threads=merged['threads'],
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'scenario': self.scenario,
            **{section: getattr(self, section) for section in SECTIONS},
            'output_dir': self.output_dir,
            'threads': self.threads,
        }

    def validate(self) -> 'ScenarioConfig':
        """
        Check every section and collect all problems.

        Raises:
            ConfigError: Listing every problem found
        """
        problems: List[str] = []
        model, bump, grid, controls = self.model, self.bump, self.grid, self.controls

        check_number(problems, 'model.m', model.get('m'), low=1.0, strict=True)
        check_number(problems, 'model.chi', model.get('chi'), low=0.0)
        check_number(problems, 'model.alpha', model.get('alpha'), low=0.0)
        if model.get('dim') not in (1, 2, 3):
            problems.append(f"model.dim must be 1, 2 or 3, got {model.get('dim')!r}")
        elif model.get('dim', 1) > 1 and not model.get('radial'):
            problems.append("model.dim > 1 requires model.radial = true")

        check_number(problems, 'bump.K0', bump.get('K0'), low=0.0, strict=True)
        check_number(problems, 'bump.R0', bump.get('R0'), low=0.0, strict=True)
        check_number(problems, 'bump.mu', bump.get('mu'), low=0.0)
        check_number(problems, 'bump.x0', bump.get('x0'))
        check_number(problems, 'bump.d0', bump.get('d0'), low=0.0, strict=True, optional=True)
        check_number(problems, 'bump.delta', bump.get('delta'), low=0.0, strict=True, optional=True)
        check_number(problems, 'bump.v_floor', bump.get('v_floor'), low=0.0, optional=True)

        check_number(problems, 'grid.half_length', grid.get('half_length'), low=0.0, strict=True)
        check_number(problems, 'grid.n_cells', grid.get('n_cells'), low=8, integer=True)
        resolutions = grid.get('resolutions')
        if resolutions is not None:
            if not isinstance(resolutions, list) or not resolutions:
                problems.append("grid.resolutions must be a nonempty list of cell counts")
            else:
                for i, n in enumerate(resolutions):
                    check_number(problems, f'grid.resolutions[{i}]', n, low=8, integer=True)

        check_number(problems, 'controls.cfl_diffusion', controls.get('cfl_diffusion'),
                     low=0.0, high=0.5, strict=True)
        check_number(problems, 'controls.cfl_advection', controls.get('cfl_advection'),
                     low=0.0, high=0.5, strict=True)
        check_number(problems, 'controls.dt_max', controls.get('dt_max'), low=0.0, strict=True)
        check_number(problems, 'controls.t_end', controls.get('t_end'), low=0.0, strict=True)
        check_number(problems, 'sampling.every', self.sampling.get('every'),
                     low=0.0, strict=True, optional=True)
        check_number(problems, 'threads', self.threads, low=1, integer=True, optional=True)

        if not isinstance(self.sweep, dict):
            problems.append("sweep must map dotted keys to value lists")
        else:
            for key, values in self.sweep.items():
                if not isinstance(values, list):
                    problems.append(f"sweep.{key} must be a list, got {values!r}")

        if not problems:
            problems.extend(self._scenario_problems())
        if problems:
            raise ConfigError(problems)
        return self

    def _scenario_problems(self) -> List[str]:
        problems: List[str] = []
        try:
            params = self.model_params()
            spec = self.bump_spec()
            spec.validate(params, self.make_grid())
        except ValueError as exc:
            return [str(exc)]
        if self.scenario == 'pme-validate' and params.chi != 0:
            problems.append(f"pme-validate requires model.chi = 0, got {params.chi}")
        if self.scenario == 'exact-speed' and not spec.is_canonical(params):
            problems.append("exact-speed requires bump.d0 = 1/(m-1)")
        if self.scenario == 'shrinking' and not self.options.get('allow_no_hypothesis'):
            satisfied, margin = hypothesis_shrinking(params, spec)
            if not satisfied:
                problems.append(
                    f"shrinking requires chi*mu above the threshold (margin {margin:.4g}); "
                    "set options.allow_no_hypothesis to override"
                )
        if self.scenario == 'finite-speed':
            R_env = self.options.get('R_envelope')
            if not isinstance(R_env, (int, float)) or not R_env > spec.R0:
                problems.append(f"options.R_envelope must exceed bump.R0={spec.R0}, got {R_env!r}")
            elif R_env + abs(spec.x0) >= self.grid['half_length']:
                problems.append(f"options.R_envelope={R_env} ball leaves the domain")
        if self.scenario == 'ordering':
            lower_R0 = self.options.get('lower_R0', spec.R0)
            if not 0 < lower_R0 <= spec.R0:
                problems.append(f"options.lower_R0 must lie in (0, bump.R0], got {lower_R0!r}")
        return problems

    def model_params(self) -> ModelParams:
        return ModelParams(**{key: self.model[key] for key in MODEL_KEYS})

    def bump_spec(self) -> BumpSpec:
        return BumpSpec(**{key: self.bump[key] for key in BUMP_KEYS})

    def step_controls(self) -> StepControls:
        return StepControls(**{key: self.controls[key] for key in CONTROL_KEYS})

    def sampling_plan(self, **updates) -> SamplingPlan:
        values = {
            'every': self.sampling.get('every'),
            'times': self.sampling.get('times'),
            'keep_snapshots': self.sampling.get('keep_snapshots', True),
            'front_center': self.bump.get('x0', 0.0),
        }
        values.update(updates)
        return SamplingPlan(**values)

    def make_grid(self, n_cells: Optional[int] = None) -> Grid:
        return make_grid(self.model['dim'], self.model['radial'], self.grid['half_length'],
                         n_cells if n_cells is not None else self.grid['n_cells'])

    def copy(self, **updates) -> 'ScenarioConfig':
        return ScenarioConfig.from_dict(merge_dicts(self.to_dict(), updates))


def cli_overrides(out: Optional[str] = None, cells: Optional[int] = None,
                  t_end: Optional[float] = None, threads: Optional[int] = None) -> Dict[str, Any]:
    """Nested override dict for the command-line flags that were given."""
    overrides: Dict[str, Any] = {}
    if out is not None:
        overrides['output_dir'] = out
    if cells is not None:
        set_dotted(overrides, 'grid.n_cells', cells)
    if t_end is not None:
        set_dotted(overrides, 'controls.t_end', t_end)
    if threads is not None:
        overrides['threads'] = threads
    return overrides


def load_config(path: Union[str, os.PathLike], overrides: Optional[Dict[str, Any]] = None,
                scenario: Optional[str] = None) -> ScenarioConfig:
    """
    Load and validate a scenario config.

    Args:
        path: JSON file; must name its scenario unless ``scenario`` is given
        overrides: Nested values merged last (command-line flags)
        scenario: Scenario to assume when the file does not name one

    Raises:
        ConfigError: If the file is unreadable, not JSON, or invalid
    """
    path = Path(path)
    try:
        with open(path, encoding='utf-8') as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError([f"cannot read {path}: {exc}"]) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError([f"{path} is not valid JSON: {exc}"]) from exc
    if not isinstance(data, dict):
        raise ConfigError([f"{path} must hold a JSON object"])
    if scenario is not None:
        data.setdefault('scenario', scenario)
    config = ScenarioConfig.from_dict(merge_dicts(data, overrides or {}))
    logger.debug("Loaded %s config from %s", config.scenario, path)
    return config.validate()
