"""Comparison-profile certificates: construction, checking and numerical domination."""

from chemofront.certificates.checks import MarginReport, check_inequalities
from chemofront.certificates.domination import (
    clip_to_trace,
    decay_time,
    measure_constants,
    numeric_domination,
    positivity_time,
    structure_defect,
    structure_time,
)
from chemofront.certificates.profiles import (
    Certificate,
    SelfSimilarProfile,
    barenblatt_profile,
    profile_eval,
    profile_on_grid,
)
from chemofront.certificates.search import (
    exact_speed_profiles,
    expanding_certificate,
    finite_speed_certificate,
    initial_spread,
    shrinking_certificate,
)

__all__ = [
    "Certificate",
    "MarginReport",
    "SelfSimilarProfile",
    "barenblatt_profile",
    "check_inequalities",
    "clip_to_trace",
    "decay_time",
    "exact_speed_profiles",
    "expanding_certificate",
    "finite_speed_certificate",
    "initial_spread",
    "measure_constants",
    "numeric_domination",
    "positivity_time",
    "profile_eval",
    "profile_on_grid",
    "shrinking_certificate",
    "structure_defect",
    "structure_time",
]
