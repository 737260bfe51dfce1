"""
Abstract base class for output backends.
"""
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Union

import pandas as pd

from chemofront.solver import Trace

PathLike = Union[str, Path]


class OutputBackend(ABC):
    """
    Interface for writing run artifacts.

    Backends translate traces, reports and sweep summaries into files under
    an output directory. Each writer returns the path it wrote.
    """

    @abstractmethod
    def write_trace(self, trace: Trace, out_dir: PathLike) -> Path:
        """
        Write the observables table of a run.

        Args:
            trace: Sampled run history
            out_dir: Directory to write into (created if missing)
        """
        pass

    @abstractmethod
    def write_snapshots(self, trace: Trace, out_dir: PathLike) -> list:
        """Write one file per stored snapshot; returns the written paths."""
        pass

    @abstractmethod
    def write_report(self, report: Dict[str, Any], out_dir: PathLike) -> Path:
        """Write the scenario report."""
        pass

    @abstractmethod
    def write_summary(self, summary: pd.DataFrame, out_dir: PathLike) -> Path:
        """Write the one-row-per-point sweep summary."""
        pass
