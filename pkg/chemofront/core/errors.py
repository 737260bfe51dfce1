"""
Exception hierarchy for chemofront.

Most errors are also ``ValueError`` or ``RuntimeError`` subclasses so callers
that only know the built-in types keep working.
"""
from typing import List, Optional


class ChemofrontError(Exception):
    """Root of all chemofront errors."""


class ConfigError(ChemofrontError, ValueError):
    """
    Invalid scenario configuration.

    Attributes:
        problems: Every validation failure found, in discovery order
    """

    def __init__(self, problems: List[str]):
        self.problems = list(problems)
        joined = '; '.join(self.problems)
        super().__init__(f"Invalid configuration ({len(self.problems)} problem(s)): {joined}")


class GridMismatchError(ChemofrontError, ValueError):
    """A field does not have one value per grid cell."""


class DomainError(ChemofrontError, ValueError):
    """Initial data or an envelope does not fit strictly inside the domain."""


class EmptySupportError(ChemofrontError, ValueError):
    """The density is below the front threshold everywhere."""


class WindowNotCoveredError(ChemofrontError, ValueError):
    """A trace has no snapshots covering a requested time window."""


class CFLViolationError(ChemofrontError, RuntimeError):
    """A time step exceeds the stable step for the current state."""


class NonFiniteStateError(ChemofrontError, RuntimeError):
    """
    The solver produced NaN or infinite values.

    Attributes:
        step: Index of the failing step
        time: Simulation time before the failing step
    """

    def __init__(self, step: int, time: float, field: str):
        self.step = step
        self.time = time
        self.field = field
        super().__init__(f"Non-finite values in '{field}' at step {step} (t={time:.6g})")


class CertificateInfeasibleError(ChemofrontError, RuntimeError):
    """
    No parameter set satisfied a certificate's inequality system.

    Attributes:
        inequality: Name of the inequality with the most negative margin
        margin: That margin, at the best candidate seen
    """

    def __init__(self, kind: str, inequality: Optional[str], margin: float):
        self.kind = kind
        self.inequality = inequality
        self.margin = margin
        super().__init__(
            f"{kind} certificate infeasible: inequality '{inequality}' "
            f"has margin {margin:.6g} at the best candidate"
        )
