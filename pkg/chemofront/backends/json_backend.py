"""
JSON writer for scenario reports.
"""
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict

import numpy as np
import pandas as pd

from chemofront.backends.base import OutputBackend, PathLike
from chemofront.solver import Trace

logger = logging.getLogger(__name__)

REPORT_STATUSES = ('ok', 'failed', 'error')

# required key -> accepted types
REPORT_SCHEMA = {
    'scenario': (str,),
    'status': (str,),
    'config': (dict,),
    'verdict': (dict,),
    'results': (dict,),
}


def sanitize(value: Any) -> Any:
    """
    Convert a report value to plain JSON types.

    numpy scalars and arrays become Python numbers and lists, tuples become
    lists, and NaN or infinite floats become None.
    """
    if isinstance(value, dict):
        return {str(key): sanitize(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [sanitize(item) for item in value]
    if isinstance(value, np.ndarray):
        return [sanitize(item) for item in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def validate_report(report: Dict[str, Any]) -> None:
    """
    Check a report against REPORT_SCHEMA.

    Raises:
        ValueError: If a required key is missing, has the wrong type, or the
            status is unknown
    """
    problems = []
    for key, types in REPORT_SCHEMA.items():
        if key not in report:
            problems.append(f"missing key '{key}'")
        elif not isinstance(report[key], types):
            problems.append(f"'{key}' must be {types[0].__name__}, got {type(report[key]).__name__}")
    if report.get('status') not in REPORT_STATUSES:
        problems.append(f"status must be one of {REPORT_STATUSES}, got {report.get('status')!r}")
    if problems:
        raise ValueError(f"Report does not match schema: {'; '.join(problems)}")


class JsonBackend(OutputBackend):
    """Writes report.json with sorted keys and non-finite floats as null."""

    def write_trace(self, trace: Trace, out_dir: PathLike) -> Path:
        raise NotImplementedError("JsonBackend only writes reports; use CsvBackend")

    def write_snapshots(self, trace: Trace, out_dir: PathLike) -> list:
        raise NotImplementedError("JsonBackend only writes reports; use CsvBackend")

    def write_report(self, report: Dict[str, Any], out_dir: PathLike) -> Path:
        clean = sanitize(report)
        validate_report(clean)
        path = Path(out_dir) / "report.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as handle:
            json.dump(clean, handle, indent=2, sort_keys=True, allow_nan=False)
            handle.write('\n')
        logger.debug("Wrote report to %s", path)
        return path

    def write_summary(self, summary: pd.DataFrame, out_dir: PathLike) -> Path:
        raise NotImplementedError("JsonBackend only writes reports; use CsvBackend")
