"""Core module initialization."""
from chemofront.core.errors import (
    CertificateInfeasibleError,
    CFLViolationError,
    ChemofrontError,
    ConfigError,
    DomainError,
    EmptySupportError,
    GridMismatchError,
    NonFiniteStateError,
    WindowNotCoveredError,
)
from chemofront.core.model import Grid, ModelParams, State, make_grid

__all__ = [
    'CertificateInfeasibleError',
    'CFLViolationError',
    'ChemofrontError',
    'ConfigError',
    'DomainError',
    'EmptySupportError',
    'GridMismatchError',
    'NonFiniteStateError',
    'WindowNotCoveredError',
    'Grid',
    'ModelParams',
    'State',
    'make_grid',
]
