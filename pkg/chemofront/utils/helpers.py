"""Helper utility functions."""
import copy
from typing import Any, Dict


def merge_dicts(*dicts: Dict[str, Any]) -> Dict[str, Any]:
    """
    Deep-merge dictionaries, with later dicts taking precedence.

    Nested dicts are merged key by key; any other value (lists included)
    replaces the earlier one. Inputs are not modified.

    Args:
        *dicts: Dictionaries to merge; None entries are skipped

    Returns:
        Merged dictionary

    Examples:
        >>> merge_dicts({'grid': {'n_cells': 400, 'half_length': 1.0}}, {'grid': {'n_cells': 800}})
        {'grid': {'n_cells': 800, 'half_length': 1.0}}
    """
    result: Dict[str, Any] = {}
    for d in dicts:
        if not d:
            continue
        for key, value in d.items():
            if isinstance(value, dict) and isinstance(result.get(key), dict):
                result[key] = merge_dicts(result[key], value)
            else:
                result[key] = copy.deepcopy(value)
    return result


def set_dotted(d: Dict[str, Any], key: str, value: Any) -> Dict[str, Any]:
    """
    Set a nested value addressed by a dotted key, creating levels as needed.

    Examples:
        >>> set_dotted({}, 'bump.mu', 2.0)
        {'bump': {'mu': 2.0}}
    """
    node = d
    parts = key.split('.')
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ValueError(f"Cannot set '{key}': '{part}' is not a section")
    node[parts[-1]] = value
    return d


def flatten_scalars(d: Dict[str, Any], prefix: str = '') -> Dict[str, Any]:
    """
    Flatten nested dicts to dotted keys, keeping only scalar leaves.

    Examples:
        >>> flatten_scalars({'a': {'b': 1.0, 'c': [1, 2]}, 'd': 'x'})
        {'a.b': 1.0, 'd': 'x'}
    """
    flat: Dict[str, Any] = {}
    for key, value in d.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten_scalars(value, f"{name}."))
        elif value is None or isinstance(value, (bool, int, float, str)):
            flat[name] = value
    return flat
