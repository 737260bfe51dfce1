"""
Numerical comparison of simulated traces against certificates, plus the
trace detectors that supply certificate inputs (structure persistence,
decay onset, window constants, positivity onset).
"""
import logging
from typing import Optional, Tuple

import numpy as np

from chemofront.certificates.profiles import Certificate, profile_on_grid
from chemofront.core.errors import WindowNotCoveredError
from chemofront.core.model import Grid, linf
from chemofront.initial_data import BumpSpec
from chemofront.solver import Trace

logger = logging.getLogger(__name__)

DOMINATION_ABS_TOL = 1e-8
DOMINATION_SMEAR = 5.0


def _slack(t: float) -> float:
    return 1e-12 * max(1.0, abs(t))


def _require_span(trace: Trace, window: Tuple[float, float]) -> None:
    start, end = window
    if not trace.times or trace.times[0] > start + _slack(start) or trace.times[-1] < end - _slack(end):
        span = (trace.times[0], trace.times[-1]) if trace.times else None
        raise WindowNotCoveredError(f"Trace span {span} does not cover the window {window}")


def clip_to_trace(cert: Certificate, trace: Trace) -> Certificate:
    """
    Shorten a certificate's window to end no later than the trace.

    Raises:
        WindowNotCoveredError: If the trace ends before the window starts
    """
    start, end = cert.window
    if not trace.times or trace.times[-1] <= start:
        raise WindowNotCoveredError(f"Trace ends before the window {cert.window} opens")
    if trace.times[-1] >= end:
        return cert
    logger.info("Clipping %s window end %.6g to trace end %.6g", cert.kind, end, trace.times[-1])
    return cert.copy(window=(start, trace.times[-1]))


def numeric_domination(trace: Trace, cert: Certificate, grid: Grid) -> Tuple[bool, float]:
    """
    Compare stored snapshots with the certificate profile over its window.

    An upper certificate needs u ≤ g + tol at every cell, a lower one
    g ≤ u + tol, with tol = 1e−8 + 5·dx·‖u‖∞ per snapshot.

    Returns:
        (holds, worst_violation) with worst_violation the largest of
        max(u − g) (upper) or max(g − u) (lower) over the snapshots

    Raises:
        WindowNotCoveredError: If the trace does not span the window or
            stores no snapshot inside it
    """
    _require_span(trace, cert.window)
    indices = trace.indices_in(*cert.window)
    if not indices:
        raise WindowNotCoveredError(f"No stored snapshot inside the window {cert.window}")

    holds = True
    worst = -np.inf
    for index in indices:
        snap = trace.snapshots[index]
        g = profile_on_grid(cert.profile, grid, trace.times[index])
        excess = snap.u - g if cert.role == 'upper' else g - snap.u
        violation = float(np.max(excess))
        tol = DOMINATION_ABS_TOL + DOMINATION_SMEAR * grid.dx * linf(snap.u)
        if violation > tol:
            holds = False
            logger.debug("%s violated at t=%.6g by %.3g (tol %.3g)",
                         cert.kind, trace.times[index], violation, tol)
        worst = max(worst, violation)
    return holds, worst


def _radial_slope(v: np.ndarray, grid: Grid, x0: float) -> Tuple[np.ndarray, np.ndarray]:
    """(|x − x0|, ∇v·(x − x0)) at the cell centers."""
    offset = grid.centers - x0
    return np.abs(offset), np.gradient(v, grid.centers) * offset


def structure_time(trace: Trace, grid: Grid, spec: BumpSpec) -> float:
    """
    Last sample time, contiguous from the start, at which v keeps its
    aggregating shape.

    On R0/2 ≤ |x−x0| ≤ R0 the test is ∇v·(x−x0) ≤ −(μ/2)|x−x0|², inside
    R0/2 it is ∇v·(x−x0) ≤ (μ/2)R0². Returns 0.0 if the first stored
    sample already fails.
    """
    R0, mu = spec.R0, spec.mu
    last = 0.0
    for t, snap in zip(trace.times, trace.snapshots):
        if snap is None:
            continue
        r, slope = _radial_slope(snap.v, grid, spec.x0)
        annulus = (r >= 0.5 * R0) & (r <= R0)
        inner = r < 0.5 * R0
        ok = (np.all(slope[annulus] <= -0.5 * mu * r[annulus] ** 2)
              and np.all(slope[inner] <= 0.5 * mu * R0 ** 2))
        if not ok:
            break
        last = t
    return last


def structure_defect(trace: Trace, grid: Grid, spec: BumpSpec,
                     window: Tuple[float, float]) -> float:
    """
    Largest relative departure of ∇v·(x−x0) from −μ|x−x0|² on the
    structure ball B_{R0+δ−dx}(x0) over a window.

    With μ = 0 the absolute value max |∇v·(x−x0)| is returned instead.

    Raises:
        WindowNotCoveredError: If no snapshot falls inside the window
    """
    indices = trace.indices_in(*window)
    if not indices:
        raise WindowNotCoveredError(f"No stored snapshot inside the window {window}")
    reach = spec.R0 + spec.width - grid.dx
    defect = 0.0
    for index in indices:
        r, slope = _radial_slope(trace.snapshots[index].v, grid, spec.x0)
        mask = (r <= reach) & (r >= grid.dx)
        if not np.any(mask):
            continue
        if spec.mu > 0:
            target = -spec.mu * r[mask] ** 2
            defect = max(defect, float(np.max(np.abs(slope[mask] / target - 1.0))))
        else:
            defect = max(defect, float(np.max(np.abs(slope[mask]))))
    return defect


def decay_time(trace: Trace, delta: float) -> Optional[float]:
    """First sample time after which gradmax_v ≤ δ and lapmax_v ≤ δ at every later sample."""
    if not trace.times:
        return None
    ok = (trace.column('gradmax_v') <= delta) & (trace.column('lapmax_v') <= delta)
    if not ok[-1]:
        return None
    failing = np.flatnonzero(~ok)
    first = 0 if failing.size == 0 else int(failing[-1]) + 1
    return float(trace.times[first])


def measure_constants(trace: Trace, window: Tuple[float, float]) -> Tuple[float, float]:
    """
    (C1, C2): maxima of gradmax_v and lapmax_v over the samples in a window.

    Raises:
        WindowNotCoveredError: If no sample falls inside the window
    """
    times = np.asarray(trace.times, dtype=float)
    start, end = window
    mask = (times >= start - _slack(start)) & (times <= end + _slack(end))
    if not np.any(mask):
        raise WindowNotCoveredError(f"No sample inside the window {window}")
    return (float(np.max(trace.column('gradmax_v')[mask])),
            float(np.max(trace.column('lapmax_v')[mask])))


def positivity_time(trace: Trace, floor: float = 0.0) -> Optional[float]:
    """
    Onset of lasting positivity.

    Args:
        trace: Sampled run
        floor: Level min u must exceed, ≥ 0

    Returns:
        The first sample time from which min u > floor holds at every later
        sample, or None if the last sample fails
    """
    if floor < 0:
        raise ValueError(f"floor must be >= 0, got {floor}")
    if not trace.times:
        return None
    failing = np.flatnonzero(trace.column('min_u') <= floor)
    if failing.size == 0:
        return float(trace.times[0])
    after = int(failing[-1]) + 1
    return float(trace.times[after]) if after < len(trace.times) else None
