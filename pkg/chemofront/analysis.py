"""
Observables extracted from simulated states and traces.

Barenblatt reference values, free-boundary position and speed (thresholded
or extrapolated from the pressure profile), the predicted initial front
speed, exponential decay fits and convergence orders.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.stats import linregress

from chemofront.core.errors import EmptySupportError
from chemofront.core.model import Grid, ModelParams, State, grad_max, integrate, linf

if TYPE_CHECKING:
    from chemofront.initial_data import BumpSpec
    from chemofront.solver import Trace

logger = logging.getLogger(__name__)

DEFAULT_REL_THRESHOLD = 1e-4
PRESSURE_BAND = (0.2, 0.7)


@dataclass(frozen=True)
class BarenblattParams:
    """
    Exponents of the Barenblatt source solution.

    Attributes:
        m: Diffusion exponent
        N: Spatial dimension
        k: Similarity exponent 1/(m−1+2/N), derived
    """

    m: float
    N: int
    k: float = field(init=False)

    def __post_init__(self) -> None:
        if not self.m > 1:
            raise ValueError(f"m must be > 1, got {self.m}")
        if self.N not in (1, 2, 3):
            raise ValueError(f"N must be 1, 2 or 3, got {self.N}")
        object.__setattr__(self, 'k', 1.0 / (self.m - 1.0 + 2.0 / self.N))

    @classmethod
    def from_model(cls, params: ModelParams) -> 'BarenblattParams':
        return cls(m=params.m, N=params.dim)


def barenblatt_eval(x: Union[float, np.ndarray], t: float, bp: BarenblattParams):
    """
    Evaluate B(x, t) = (1+t)^{−k}[(1 − k(m−1)|x|²/(2mN(1+t)^{2k/N}))₊]^{1/(m−1)}.

    Args:
        x: Coordinate(s) or radii; only |x| matters
        t: Time, t ≥ 0
        bp: Barenblatt exponents

    Examples:
        >>> barenblatt_eval(1.0, 0.0, BarenblattParams(m=2.0, N=1))  # 11/12
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    m, N, k = bp.m, bp.N, bp.k
    scale = (1.0 + t) ** (2.0 * k / N)
    bracket = 1.0 - k * (m - 1.0) / (2.0 * m * N) * np.square(x) / scale
    value = (1.0 + t) ** (-k) * np.clip(bracket, 0.0, None) ** (1.0 / (m - 1.0))
    return float(value) if np.ndim(value) == 0 else value


def barenblatt_front_radius(t: float, bp: BarenblattParams) -> float:
    """Support radius sqrt(2mN/(k(m−1)))·(1+t)^{k/N}."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    m, N, k = bp.m, bp.N, bp.k
    return math.sqrt(2.0 * m * N / (k * (m - 1.0))) * (1.0 + t) ** (k / N)


def barenblatt_front_speed(t: float, bp: BarenblattParams) -> float:
    """Time derivative of barenblatt_front_radius."""
    return bp.k / bp.N * barenblatt_front_radius(t, bp) / (1.0 + t)


@dataclass
class FrontTrace:
    """
    Front positions ρ(t) extracted from a run.

    Attributes:
        times: Sample times, strictly increasing
        rho: Front distance from the bump center
        threshold: Relative threshold used to locate the front
    """

    times: np.ndarray
    rho: np.ndarray
    threshold: float = DEFAULT_REL_THRESHOLD

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float)
        self.rho = np.asarray(self.rho, dtype=float)
        if self.times.shape != self.rho.shape:
            raise ValueError(f"times {self.times.shape} and rho {self.rho.shape} differ in shape")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("Front trace times must be strictly increasing")
        if np.any(self.rho < 0):
            raise ValueError("Front positions must be nonnegative")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'t': self.times, 'rho': self.rho})


@dataclass
class DecayFit:
    """
    Least-squares fit y ≈ C·e^{−ct}.

    Attributes:
        C: Prefactor
        c: Decay rate
        r_squared: Coefficient of determination on log y
        window: Time interval of the fit
        ubar: Mean density the deviation is measured from (if any)
    """

    C: float
    c: float
    r_squared: float
    window: Tuple[float, float]
    ubar: Optional[float] = None
    n_samples: int = 0

    def to_dict(self) -> Dict[str, float]:
        return {
            'C': self.C, 'c': self.c, 'r_squared': self.r_squared,
            'window_start': self.window[0], 'window_end': self.window[1],
            'ubar': self.ubar, 'n_samples': self.n_samples,
        }


def front_position(state: State, grid: Grid, spec: Optional['BumpSpec'] = None,
                   rel_threshold: float = DEFAULT_REL_THRESHOLD, *, m: float,
                   x0: Optional[float] = None) -> float:
    """
    Distance from the bump center to the free boundary.

    The outermost cell with u > rel_threshold·‖u‖∞ is refined toward its
    outward neighbor by linear interpolation of w = u^{m−1} down to the
    level (rel_threshold·‖u‖∞)^{m−1}. On a 1D line both sides are located
    and the larger distance is returned. A front cell at the domain edge
    reports the distance to the boundary face.

    Args:
        state: Current fields
        grid: Grid of the state
        spec: Bump whose center x0 is used (origin if None)
        rel_threshold: Relative level, in (0, 1)
        m: Diffusion exponent
        x0: Explicit center, overriding spec.x0

    Returns:
        Front distance ρ ≥ 0

    Raises:
        EmptySupportError: If no cell exceeds the threshold
    """
    u = np.asarray(state.u, dtype=float)
    umax = float(u.max()) if u.size else 0.0
    level = rel_threshold * umax
    above = np.flatnonzero(u > level)
    if umax <= 0 or above.size == 0:
        raise EmptySupportError(
            f"Density is below {rel_threshold:g}·max everywhere (max u = {umax:.3g}) at t={state.t:.6g}"
        )

    if x0 is None:
        x0 = spec.x0 if spec is not None else 0.0
    w_level = level ** (m - 1.0)
    centers = grid.centers

    def refine(i: int, outward: int) -> float:
        j = i + outward
        if j < 0 or j >= grid.n_cells:
            return abs(centers[i] - x0) + 0.5 * grid.dx
        w_in = u[i] ** (m - 1.0)
        w_out = u[j] ** (m - 1.0)
        frac = 1.0 if w_in <= w_out else (w_in - w_level) / (w_in - w_out)
        frac = min(max(frac, 0.0), 1.0)
        return abs(centers[i] + frac * (centers[j] - centers[i]) - x0)

    rho = refine(int(above[-1]), +1)
    if not grid.radial:
        rho = max(rho, refine(int(above[0]), -1))
    return float(rho)


def _band_root(r: np.ndarray, p: np.ndarray) -> Optional[float]:
    """First zero of a polynomial fit p(r) lying beyond the fitted cells."""
    deg = 2 if len(r) >= 3 else 1
    for degree in range(deg, 0, -1):
        roots = np.roots(np.polyfit(r, p, degree))
        if roots.size == 0:
            continue
        real = roots[np.abs(roots.imag) <= 1e-9 * max(1.0, float(np.abs(roots).max()))].real
        beyond = real[real >= r.max()]
        if beyond.size:
            return float(beyond.min())
    return None


def extrapolated_front(state: State, grid: Grid, *, m: float, x0: float = 0.0,
                       band: Tuple[float, float] = PRESSURE_BAND) -> float:
    """
    Front distance extrapolated from the pressure w = u^{m−1}.

    Walking outward from the pressure peak, the cells with
    band[0]·max w ≤ w ≤ band[1]·max w are fitted by a quadratic in the
    distance r = |x − x0| (a line when only two cells qualify) and the first
    root past them is the front. The fit never touches the thin layer next
    to the free boundary, where the discrete profile is smeared. On a 1D
    line both sides are fitted and the larger distance is returned.

    Args:
        state: Current fields
        grid: Grid of the state
        m: Diffusion exponent
        x0: Bump center
        band: Relative pressure band (low, high), 0 < low < high < 1

    Returns:
        Front distance ρ ≥ 0

    Raises:
        EmptySupportError: If no side holds two cells inside the band
    """
    low, high = band
    if not 0 < low < high < 1:
        raise ValueError(f"band must satisfy 0 < low < high < 1, got {band}")
    w = np.clip(np.asarray(state.u, dtype=float), 0.0, None) ** (m - 1.0)
    wmax = float(w.max()) if w.size else 0.0
    if wmax <= 0:
        raise EmptySupportError(f"Density vanishes everywhere at t={state.t:.6g}")

    peak = int(np.argmax(w))
    r = np.abs(grid.centers - x0)
    sides = [np.arange(peak, grid.n_cells)]
    if not grid.radial:
        sides.append(np.arange(peak, -1, -1))

    fronts = []
    for cells in sides:
        below = np.flatnonzero(w[cells] < low * wmax)
        if below.size:
            cells = cells[:below[0]]
        cells = cells[w[cells] <= high * wmax]
        if cells.size < 2:
            continue
        root = _band_root(r[cells], w[cells])
        if root is not None:
            fronts.append(root)
    if not fronts:
        raise EmptySupportError(
            f"No pressure band {band} with two cells to extrapolate from at t={state.t:.6g}"
        )
    return float(max(fronts))


def extrapolated_front_trace(trace: 'Trace', grid: Grid, *, m: float, x0: float = 0.0,
                             band: Tuple[float, float] = PRESSURE_BAND) -> FrontTrace:
    """
    extrapolated_front for every stored snapshot of a trace.

    The returned FrontTrace carries the band's lower edge as its threshold.
    """
    times, rho = [], []
    for t, snap in zip(trace.times, trace.snapshots):
        if snap is None:
            continue
        times.append(t)
        rho.append(extrapolated_front(snap, grid, m=m, x0=x0, band=band))
    return FrontTrace(np.asarray(times), np.asarray(rho), band[0])


def predicted_speed(params: ModelParams, spec: 'BumpSpec') -> float:
    """
    Initial front speed R0·(2m/(m−1)·K0^{m−1} − χμ).

    Raises:
        ValueError: If the bump exponent is not the canonical 1/(m−1)
    """
    if not spec.is_canonical(params):
        raise ValueError(
            f"Exact speed needs d0 = 1/(m-1) = {params.d:.6g}, got {spec.exponent(params)}"
        )
    m = params.m
    return spec.R0 * (2.0 * m / (m - 1.0) * spec.K0 ** (m - 1.0) - params.chi * spec.mu)


def initial_speed(front: FrontTrace, fit_horizon: float) -> Tuple[float, float]:
    """
    Extrapolated front speed at t = 0.

    Slopes of ρ are fitted on overlapping windows of max(2, n//5) samples;
    the window slopes are regressed against window-midpoint time and the
    line is evaluated at t = 0.

    Args:
        front: Front trace starting at t = 0
        fit_horizon: Only samples with t ≤ fit_horizon are used

    Returns:
        (speed, stderr), stderr being the standard error of the intercept

    Raises:
        ValueError: With fewer than 5 samples in [0, fit_horizon]
    """
    mask = front.times <= fit_horizon + 1e-15
    t = front.times[mask]
    rho = front.rho[mask]
    n = len(t)
    if n < 5:
        raise ValueError(f"initial_speed needs >= 5 samples in [0, {fit_horizon}], got {n}")

    chunk = max(2, n // 5)
    mids, slopes = [], []
    for start in range(n - chunk + 1):
        window = slice(start, start + chunk)
        mids.append(t[window].mean())
        slopes.append(linregress(t[window], rho[window]).slope)

    fit = linregress(np.asarray(mids), np.asarray(slopes))
    speed, stderr = float(fit.intercept), float(fit.intercept_stderr)
    logger.debug("initial_speed: %d samples, %d windows, speed=%.6g ± %.2g",
                 n, len(slopes), speed, stderr)
    return speed, stderr


def mean_density(u0: np.ndarray, grid: Grid) -> float:
    """ū = ∫u₀ / |Ω| with the discrete measure."""
    return integrate(u0, grid) / grid.measure


def decay_metrics(state: State, grid: Grid, ubar: float) -> Dict[str, float]:
    """
    Distance of the state from the homogeneous equilibrium (ū, 0).

    Returns:
        Dict with dev_u = ‖u−ū‖∞, linf_v, gradmax_v and min_u
    """
    return {
        'dev_u': linf(state.u - ubar),
        'linf_v': linf(state.v),
        'gradmax_v': grad_max(state.v, grid),
        'min_u': float(np.min(state.u)),
    }


def decay_table(trace: 'Trace', grid: Grid, ubar: float) -> pd.DataFrame:
    """decay_metrics for every stored snapshot, one row per sample."""
    rows = []
    for t, snap in zip(trace.times, trace.snapshots):
        if snap is None:
            continue
        row = {'t': t}
        row.update(decay_metrics(snap, grid, ubar))
        rows.append(row)
    return pd.DataFrame(rows, columns=['t', 'dev_u', 'linf_v', 'gradmax_v', 'min_u'])


def fit_exponential(t: Sequence[float], y: Sequence[float],
                    window: Optional[Tuple[float, float]] = None,
                    ubar: Optional[float] = None, floor: Optional[float] = None) -> DecayFit:
    """
    Fit y ≈ C·e^{−ct} by least squares on (t, log y).

    Args:
        t: Sample times
        y: Sampled values
        window: Time interval of the fit; all samples if None
        ubar: Mean density stored on the fit
        floor: If given, samples with y ≤ floor are left out of the fit

    Raises:
        ValueError: If fewer than two samples remain or a y ≤ 0 is fitted
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if window is None:
        window = (float(t.min()), float(t.max()))
    mask = (t >= window[0]) & (t <= window[1])
    if floor is not None:
        mask &= y > floor
    t, y = t[mask], y[mask]
    if len(t) < 2:
        raise ValueError(f"Need >= 2 samples in window {window} (floor {floor}), got {len(t)}")
    if np.any(y <= 0):
        raise ValueError(f"fit_exponential needs y > 0 in window {window}; min is {y.min():.3g}")

    logy = np.log(y)
    fit = linregress(t, logy)
    constant = float(np.ptp(logy)) <= 1e-300
    r_squared = 1.0 if constant else float(fit.rvalue) ** 2
    return DecayFit(
        C=math.exp(fit.intercept), c=-float(fit.slope),
        r_squared=min(max(r_squared, 0.0), 1.0),
        window=(float(window[0]), float(window[1])), ubar=ubar, n_samples=len(t),
    )


def convergence_orders(errors: Sequence[float]) -> list:
    """log2(e_n / e_{2n}) for consecutive errors of a doubling resolution sweep."""
    orders = []
    for coarse, fine in zip(errors[:-1], errors[1:]):
        orders.append(math.log2(coarse / fine) if coarse > 0 and fine > 0 else float('nan'))
    return orders


def fitted_order(cells: Sequence[int], errors: Sequence[float]) -> Tuple[float, float]:
    """
    Convergence order from a least-squares line through (log n, log e).

    Args:
        cells: Resolutions of the sweep
        errors: Error at each resolution, all > 0

    Returns:
        (order, stderr): minus the fitted slope and its standard error

    Raises:
        ValueError: With fewer than two resolutions or a nonpositive error
    """
    cells = np.asarray(cells, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if len(cells) < 2 or len(cells) != len(errors):
        raise ValueError(f"Need >= 2 matching resolutions and errors, got {len(cells)} and {len(errors)}")
    if np.any(errors <= 0):
        raise ValueError(f"fitted_order needs errors > 0, got {errors.tolist()}")
    fit = linregress(np.log(cells), np.log(errors))
    return -float(fit.slope), float(fit.stderr)
