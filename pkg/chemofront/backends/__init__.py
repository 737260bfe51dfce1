"""Backends module initialization."""
from chemofront.backends.base import OutputBackend

__all__ = ['OutputBackend', 'get_backend']


def get_backend(kind: str) -> OutputBackend:
    """
    Return a writer by name ('csv' or 'json').

    Raises:
        ValueError: If the kind is unknown
    """
    if kind == 'csv':
        from chemofront.backends.csv_backend import CsvBackend
        return CsvBackend()
    elif kind == 'json':
        from chemofront.backends.json_backend import JsonBackend
        return JsonBackend()
    else:
        raise ValueError(f"Unknown backend: {kind}. Use 'csv' or 'json'")
