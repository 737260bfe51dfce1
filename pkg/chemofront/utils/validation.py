"""Utility functions for validating fields, tables and config values."""
import math
from typing import Any, List, Optional

import numpy as np
import pandas as pd

from chemofront.core.errors import GridMismatchError


def validate_field(values: Any, n_cells: int, name: str = "field") -> np.ndarray:
    """
    Validate a per-cell field.

    Args:
        values: Array-like with one value per cell
        n_cells: Expected length
        name: Field name for error messages

    Returns:
        The values as a float array

    Raises:
        GridMismatchError: If the length differs from n_cells
        ValueError: If a value is negative or non-finite
    """
    array = np.asarray(values, dtype=float)
    if array.ndim != 1 or array.shape[0] != n_cells:
        raise GridMismatchError(
            f"Field '{name}' has shape {array.shape}, expected ({n_cells},)"
        )
    if not np.all(np.isfinite(array)):
        raise ValueError(f"Field '{name}' contains non-finite values")
    if np.any(array < 0):
        raise ValueError(f"Field '{name}' must be nonnegative; min is {array.min():.3g}")
    return array


def validate_frame(df: pd.DataFrame, required_columns: Optional[List[str]] = None) -> None:
    """
    Validate a DataFrame written as a run artifact.

    Raises:
        TypeError: If df is not a DataFrame
        ValueError: If required columns are missing
    """
    if not isinstance(df, pd.DataFrame):
        raise TypeError(f"Expected pandas DataFrame, got {type(df)}")

    if required_columns:
        missing = [column for column in required_columns if column not in df.columns]
        if missing:
            raise ValueError(f"Required columns missing from DataFrame: {missing}")


def check_number(problems: List[str], name: str, value: Any, *,
                 low: Optional[float] = None, high: Optional[float] = None,
                 strict: bool = False, integer: bool = False,
                 optional: bool = False) -> None:
    """
    Append a message to ``problems`` unless value is a number in range.

    Args:
        problems: Collected validation messages
        name: Dotted config key, for the message
        low: Lower bound (exclusive when strict)
        high: Upper bound, inclusive
        integer: Require an int
        optional: Accept None
    """
    if value is None:
        if not optional:
            problems.append(f"{name} is required")
        return
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        problems.append(f"{name} must be a number, got {value!r}")
        return
    if integer and not isinstance(value, int):
        problems.append(f"{name} must be an integer, got {value!r}")
        return
    if not math.isfinite(value):
        problems.append(f"{name} must be finite, got {value!r}")
        return
    if low is not None and (value <= low if strict else value < low):
        problems.append(f"{name} must be {'>' if strict else '>='} {low}, got {value}")
    if high is not None and value > high:
        problems.append(f"{name} must be <= {high}, got {value}")
