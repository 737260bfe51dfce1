"""
Parameter sweeps over scenario configs.

Points are the Cartesian product of the swept value lists, each run in its
own point_NNN/ directory. summary.csv gathers one row per point in point
order regardless of completion order.
"""
import itertools
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from chemofront.backends import get_backend
from chemofront.core.errors import ChemofrontError, ConfigError
from chemofront.harness.config import ScenarioConfig
from chemofront.harness.scenarios import EXIT_ERROR, EXIT_OK, run_scenario
from chemofront.utils.helpers import flatten_scalars, merge_dicts, set_dotted

logger = logging.getLogger(__name__)

# sweep key that sets model.chi = value / bump.mu
CHI_MU_ALIAS = 'chi_mu'


def parse_param(text: str) -> Tuple[str, List[Any]]:
    """
    Parse a ``key=v1,v2,...`` command-line sweep spec.

    Values are read as JSON where possible (numbers, true/false, null) and
    kept as strings otherwise.

    Examples:
        >>> parse_param('bump.mu=1,2.5')
        ('bump.mu', [1, 2.5])

    Raises:
        ConfigError: If the text has no '=' or no values
    """
    key, sep, raw = text.partition('=')
    key = key.strip()
    if not sep or not key or not raw.strip():
        raise ConfigError([f"sweep parameter must look like key=v1,v2,..., got {text!r}"])
    values = []
    for item in raw.split(','):
        item = item.strip()
        try:
            values.append(json.loads(item))
        except json.JSONDecodeError:
            values.append(item)
    return key, values


def expand_points(grid: Dict[str, List[Any]]) -> List[Dict[str, Any]]:
    """All combinations of the swept values, first key varying slowest."""
    if not grid:
        return [{}]
    keys = list(grid)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(grid[key] for key in keys))]


def point_config(base: ScenarioConfig, point: Dict[str, Any], index: int) -> ScenarioConfig:
    """
    Config of one sweep point, writing to <output_dir>/point_NNN.

    The ``chi_mu`` key sets model.chi = value / bump.mu.

    Raises:
        ConfigError: If a key cannot be applied
    """
    overrides: Dict[str, Any] = {}
    for key, value in point.items():
        if key == CHI_MU_ALIAS:
            mu = base.bump.get('mu') or 0.0
            if not mu > 0:
                raise ConfigError([f"{CHI_MU_ALIAS} sweeps need bump.mu > 0, got {mu}"])
            set_dotted(overrides, 'model.chi', value / mu)
        else:
            set_dotted(overrides, key, value)
    data = merge_dicts(base.to_dict(), overrides)
    data['sweep'] = {}
    data['output_dir'] = str(Path(base.output_dir) / f"point_{index:03d}")
    return ScenarioConfig.from_dict(data)


def _run_point(base_data: Dict[str, Any], point: Dict[str, Any], index: int) -> Dict[str, Any]:
    """Worker entry: run one point and flatten its report into a summary row."""
    row: Dict[str, Any] = {'point': index}
    try:
        config = point_config(ScenarioConfig.from_dict(base_data), point, index)
        code, report = run_scenario(config)
    except (ChemofrontError, ValueError, RuntimeError) as exc:
        logger.warning("Sweep point %d rejected: %s", index, exc)
        row.update({'status': 'error', 'exit_code': EXIT_ERROR, **point, 'error': str(exc)})
        return row
    row.update({'status': report['status'], 'exit_code': code, **point})
    if report['status'] == 'error':
        logger.warning("Sweep point %d errored: %s", index, report['error']['message'])
        row['error'] = report['error']['message']
    row.update(flatten_scalars(report['verdict'], 'verdict.'))
    row.update(flatten_scalars(report['results']))
    return row


def sweep(base: ScenarioConfig, grid: Optional[Dict[str, List[Any]]] = None,
          threads: Optional[int] = None) -> Tuple[int, pd.DataFrame]:
    """
    Run every point of a parameter grid and write summary.csv.

    Args:
        base: Validated base config; its ``sweep`` section is used when
            ``grid`` is None
        grid: Dotted key -> list of values
        threads: Worker processes; 1 runs inline, None uses the config or
            os.cpu_count()

    Returns:
        (exit_code, summary): the worst per-point exit code and the table
    """
    grid = base.sweep if grid is None else grid
    points = expand_points(grid)
    workers = threads or base.threads or os.cpu_count() or 1
    base_data = base.to_dict()
    logger.info("Sweeping %d point(s) with %d worker(s)", len(points), min(workers, len(points)))

    if workers == 1 or len(points) == 1:
        rows = [_run_point(base_data, point, i) for i, point in enumerate(points)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_point, base_data, point, i) for i, point in enumerate(points)]
            rows = [future.result() for future in futures]

    leading = ['point', 'status', *grid]
    rest = sorted({key for row in rows for key in row} - set(leading))
    summary = pd.DataFrame(rows, columns=leading + rest)
    get_backend('csv').write_summary(summary, base.output_dir)
    code = max((row['exit_code'] for row in rows), default=EXIT_OK)
    return code, summary
