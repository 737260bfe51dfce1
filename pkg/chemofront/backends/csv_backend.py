"""
CSV writer for traces, snapshots and sweep summaries.
"""
import logging
from pathlib import Path
from typing import Any, Dict

import pandas as pd

from chemofront.backends.base import OutputBackend, PathLike
from chemofront.solver import TRACE_COLUMNS, Trace
from chemofront.utils.validation import validate_frame

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def snapshot_name(t: float) -> str:
    return f"t_{t:.9f}.csv"


class CsvBackend(OutputBackend):
    """
    Writes tables with pandas at full round-trip precision.

    Column orders are fixed: trace.csv follows the solver's trace columns,
    snapshots hold x, u, v.
    """

    def write_trace(self, trace: Trace, out_dir: PathLike) -> Path:
        path = Path(out_dir) / "trace.csv"
        path.parent.mkdir(parents=True, exist_ok=True)
        trace.to_frame()[TRACE_COLUMNS].to_csv(path, index=False, float_format=FLOAT_FORMAT)
        logger.debug("Wrote %d trace rows to %s", len(trace), path)
        return path

    def write_snapshots(self, trace: Trace, out_dir: PathLike) -> list:
        folder = Path(out_dir) / "snapshots"
        folder.mkdir(parents=True, exist_ok=True)
        written = []
        for index, t in enumerate(trace.times):
            if trace.snapshots[index] is None:
                continue
            path = folder / snapshot_name(t)
            trace.snapshot_frame(index).to_csv(path, index=False, float_format=FLOAT_FORMAT)
            written.append(path)
        return written

    def write_report(self, report: Dict[str, Any], out_dir: PathLike) -> Path:
        raise NotImplementedError("CsvBackend does not write reports; use JsonBackend")

    def write_summary(self, summary: pd.DataFrame, out_dir: PathLike) -> Path:
        validate_frame(summary, ["point", "status"])
        path = Path(out_dir) / "summary.csv"
        path.parent.mkdir(parents=True, exist_ok=True)
        summary.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        return path
