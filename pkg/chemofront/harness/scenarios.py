"""
Scenario runners.

Each runner builds its initial data from a validated ScenarioConfig, runs
the solver (twice where certificate windows need dense sampling), applies
the analysis and certificate checks, and returns an Outcome: scalar and
nested results, a verdict of named pass/fail checks, and the traces to
write. ``run_scenario`` wraps a runner with artifact writing and error
reporting.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from chemofront import __version__
from chemofront.analysis import (
    BarenblattParams,
    barenblatt_eval,
    convergence_orders,
    decay_table,
    extrapolated_front_trace,
    fit_exponential,
    fitted_order,
    front_position,
    initial_speed,
    mean_density,
    predicted_speed,
)
from chemofront.backends import get_backend
from chemofront.certificates import (
    Certificate,
    clip_to_trace,
    decay_time,
    exact_speed_profiles,
    expanding_certificate,
    finite_speed_certificate,
    measure_constants,
    numeric_domination,
    positivity_time,
    shrinking_certificate,
    structure_defect,
    structure_time,
)
from chemofront.core.errors import (
    CertificateInfeasibleError,
    ChemofrontError,
    ConfigError,
    EmptySupportError,
    WindowNotCoveredError,
)
from chemofront.core.model import Grid, State, grad_max, holder_quotient, integrate, lap_max, linf
from chemofront.core.simulation import Simulation
from chemofront.harness.config import ScenarioConfig
from chemofront.initial_data import aggregating_v0, bump_u0, hypothesis_shrinking
from chemofront.solver import Trace, run_ordered_pair

logger = logging.getLogger(__name__)

MASS_RTOL = 1e-12
V_MAX_RTOL = 1e-12
# min u must exceed this fraction of ū to count as positive
POSITIVITY_REL_FLOOR = 1e-3
# decay samples below this fraction of their scale are round-off
DECAY_REL_FLOOR = 1e-10
EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2


@dataclass
class Outcome:
    """What a scenario runner hands back to run_scenario."""

    results: Dict[str, Any] = field(default_factory=dict)
    verdict: Dict[str, bool] = field(default_factory=dict)
    trace: Optional[Trace] = None
    extra_traces: Dict[str, Trace] = field(default_factory=dict)


# ============================================================
# SHARED CHECKS
# ============================================================

def _mass_drift(trace: Trace) -> float:
    mass = trace.column('mass_u')
    return float(np.max(np.abs(mass - mass[0])) / max(abs(mass[0]), 1e-300))


def _v_max_increase(trace: Trace) -> float:
    vmax = trace.column('linf_v')
    return float(np.max(np.diff(vmax), initial=0.0) / max(vmax[0], 1e-300))


def _common(outcome: Outcome, trace: Trace, grid: Grid, m: float, options: Dict[str, Any]) -> None:
    """Conservation, sign, front-advance and Hölder monitors every scenario reports."""
    drift = _mass_drift(trace)
    v_rise = _v_max_increase(trace)
    outcome.results.update({
        'mass_drift': drift,
        'v_max_increase': v_rise,
        'max_support_growth': trace.max_support_growth,
        'steps': trace.steps,
        'holder_quotient': holder_quotient(trace.final.u, grid, 1.0 / (2.0 * m)),
        'min_u_overall': float(np.min(trace.column('min_u'))),
    })
    outcome.verdict.update({
        'mass_conserved': drift <= options.get('mass_rtol', MASS_RTOL),
        'nonnegative': bool(np.min(trace.column('min_u')) >= 0),
        'v_max_nonincreasing': v_rise <= V_MAX_RTOL,
        'front_advance_ok': trace.max_support_growth <= 1,
    })


def _support_radius(state: State, grid: Grid, x0: float, m: float) -> float:
    """Thresholded front distance from x0, 0 once the density has vanished."""
    try:
        return front_position(state, grid, m=m, x0=x0)
    except EmptySupportError:
        return 0.0


def _dense_times(t0: float, count: int) -> List[float]:
    return list(np.linspace(0.0, t0, count + 1)[1:])


def _dominate(trace: Trace, cert: Certificate, grid: Grid) -> Dict[str, Any]:
    try:
        holds, worst = numeric_domination(trace, clip_to_trace(cert, trace), grid)
    except WindowNotCoveredError as exc:
        logger.warning("Domination check skipped for %s: %s", cert.kind, exc)
        return {'holds': False, 'worst_violation': None, 'skipped': str(exc)}
    return {'holds': holds, 'worst_violation': worst}


def _infeasible(exc: CertificateInfeasibleError) -> Dict[str, Any]:
    logger.warning("%s", exc)
    return {'feasible': False, 'inequality': exc.inequality, 'margin': exc.margin}


def _no_certificate(outcome: Outcome, exc: CertificateInfeasibleError, trace: Trace,
                    grid: Grid, m: float, options: Dict[str, Any]) -> Outcome:
    """Record an infeasible search and finish the outcome on the given run."""
    outcome.results['certificate'] = _infeasible(exc)
    outcome.verdict['certificate_found'] = False
    outcome.trace = trace
    _common(outcome, trace, grid, m, options)
    return outcome


# ============================================================
# RUNNERS
# ============================================================

def run_pme_validate(config: ScenarioConfig) -> Outcome:
    """Barenblatt start with χ = 0: L∞/L¹ errors over a resolution sweep."""
    outcome = Outcome()
    base = Simulation.from_config(config).from_barenblatt()
    params = base.state.params
    bp = BarenblattParams.from_model(params)
    t_end = config.controls['t_end']
    resolutions = config.grid.get('resolutions') or [config.grid['n_cells']]

    rows = []
    for n_cells in resolutions:
        sim = base.on_grid(n_cells=n_cells).run()
        grid = sim.make_grid()
        exact = barenblatt_eval(grid.distance_from(0.0), t_end, bp)
        error = sim.trace.final.u - exact
        rows.append({
            'n_cells': n_cells,
            'linf_error': linf(error),
            'l1_error': integrate(np.abs(error), grid),
            'steps': sim.trace.steps,
        })
        logger.info("pme-validate n=%d: linf=%.3g", n_cells, rows[-1]['linf_error'])
        outcome.trace = sim.trace
        finest_grid = grid

    l1_errors = [row['l1_error'] for row in rows]
    outcome.results.update({
        'resolutions': rows,
        'l1_orders': convergence_orders(l1_errors),
        'linf_orders': convergence_orders([row['linf_error'] for row in rows]),
        'linf_error': rows[-1]['linf_error'],
        'front_exact': float(math.sqrt(2.0 * bp.m * bp.N / (bp.k * (bp.m - 1.0)))
                             * (1.0 + t_end) ** (bp.k / bp.N)),
    })
    outcome.verdict['linf_ok'] = rows[-1]['linf_error'] <= config.options['linf_tol']
    if len(rows) >= 2:
        # pairwise orders swing with where the front falls in its cell
        order, order_stderr = fitted_order([row['n_cells'] for row in rows], l1_errors)
        outcome.results.update({'l1_fitted_order': order, 'l1_fitted_order_stderr': order_stderr})
        outcome.verdict['order_ok'] = order >= config.options['min_order']
    _common(outcome, outcome.trace, finest_grid, params.m, config.options)
    return outcome


def run_shrinking(config: ScenarioConfig) -> Outcome:
    """Shrinking upper certificate against a simulated aggregating run."""
    outcome = Outcome()
    sim = Simulation.from_config(config)
    params, spec = sim.state.params, sim.state.spec
    grid = sim.make_grid()
    t_end = config.controls['t_end']
    satisfied, margin = hypothesis_shrinking(params, spec)
    outcome.results['hypothesis_margin'] = margin

    coarse = sim.run().trace
    persist = structure_time(coarse, grid, spec)
    C1, C2 = measure_constants(coarse, (0.0, min(1.0, t_end)))
    outcome.results.update({'structure_time': persist, 'C1': C1, 'C2': C2})
    try:
        cert = shrinking_certificate(params, spec, C1, C2, structure_time=persist)
    except CertificateInfeasibleError as exc:
        return _no_certificate(outcome, exc, coarse, grid, params.m, config.options)

    t0 = cert.window[1]
    dense = sim.sample_at(_dense_times(t0, config.options.get('dense_samples', 20))).run().trace
    C1_w, C2_w = measure_constants(dense, (0.0, t0))
    if C2_w > C2:
        logger.info("Window C2 %.4g exceeds the first estimate %.4g; searching again", C2_w, C2)
        outcome.results.update({'C1_window': C1_w, 'C2_window': C2_w})
        try:
            cert = shrinking_certificate(params, spec, max(C1, C1_w), C2_w,
                                         structure_time=structure_time(dense, grid, spec))
        except CertificateInfeasibleError as exc:
            return _no_certificate(outcome, exc, dense, grid, params.m, config.options)
        t0 = cert.window[1]

    front = extrapolated_front_trace(dense, grid, m=params.m, x0=spec.x0)
    rho = front.rho[front.times <= t0 + 1e-12]
    outcome.trace = dense
    outcome.results.update({
        'certificate': cert.to_dict(),
        'domination': _dominate(dense, cert, grid),
        'front_start': float(rho[0]) if rho.size else None,
        'front_window_end': float(rho[-1]) if rho.size else None,
        'profile_radius_end': cert.profile.support_radius(t0),
        'profile_speed_start': cert.profile.support_speed(0.0),
    })
    # no sample may sit beyond the starting front by more than round-off
    receding = bool(rho.size >= 2 and rho[-1] < rho[0]
                    and np.max(rho) <= rho[0] * (1.0 + 1e-12))
    outcome.verdict.update({
        'hypothesis': satisfied,
        'certificate_found': cert.holds,
        'domination': outcome.results['domination']['holds'],
        'support_receding': receding,
    })
    _common(outcome, dense, grid, params.m, config.options)
    return outcome


def run_finite_speed(config: ScenarioConfig) -> Outcome:
    """Finite-speed upper certificate with a structureless constant attractant."""
    outcome = Outcome()
    R_env = config.options['R_envelope']
    sim = Simulation.from_config(config).constant_attractant(config.options.get('v_level', 1.0))
    params, spec = sim.state.params, sim.state.spec
    grid = sim.make_grid()

    coarse = sim.run().trace
    C1, C2 = measure_constants(coarse, (0.0, min(1.0, config.controls['t_end'])))
    outcome.results.update({'C1': C1, 'C2': C2})
    try:
        cert = finite_speed_certificate(params, spec, C1, C2, R_env)
    except CertificateInfeasibleError as exc:
        return _no_certificate(outcome, exc, coarse, grid, params.m, config.options)

    t0 = cert.window[1]
    dense = sim.sample_at(_dense_times(t0, config.options.get('dense_samples', 20))).run().trace
    radii = [
        _support_radius(dense.snapshots[i], grid, spec.x0, params.m)
        for i in dense.indices_in(0.0, t0)
    ]
    covered = dense.times[-1] >= t0 * (1.0 - 1e-12)
    outcome.trace = dense
    outcome.results.update({
        'certificate': cert.to_dict(),
        'domination': _dominate(dense, cert, grid),
        'max_support_radius': max(radii) if radii else None,
        'window_covered': covered,
    })
    outcome.verdict.update({
        'certificate_found': cert.holds,
        'domination': outcome.results['domination']['holds'],
        'window_covered': covered,
        'support_inside_envelope': bool(radii) and max(radii) <= R_env,
    })
    _common(outcome, dense, grid, params.m, config.options)
    return outcome


def run_exact_speed(config: ScenarioConfig) -> Outcome:
    """Measured initial front speed against the predicted one, with bracketing profiles."""
    outcome = Outcome()
    options = config.options
    sim = Simulation.from_config(config)
    params, spec = sim.state.params, sim.state.spec
    grid = sim.make_grid()
    trace = sim.run().trace
    outcome.trace = trace

    horizon = options['fit_horizon']
    # the thresholded front lags inside the smeared edge layer
    front = extrapolated_front_trace(trace, grid, m=params.m, x0=spec.x0)
    speed, stderr = initial_speed(front, horizon)
    predicted = predicted_speed(params, spec)
    tol = max(options['speed_rtol'] * abs(predicted), options['speed_atol'])
    early = front.rho[front.times <= horizon + 1e-12]
    # trend over every (n//5)-th sample
    coarse_steps = np.diff(early[::max(1, len(early) // 5)])
    outcome.results.update({
        'initial_speed': speed,
        'initial_speed_stderr': stderr,
        'predicted_speed': predicted,
        'speed_tolerance': tol,
        'front_change': float(early[-1] - early[0]),
    })
    outcome.verdict['speed_match'] = abs(speed - predicted) <= tol
    if predicted > options['speed_atol']:
        outcome.verdict['front_direction'] = bool(np.all(coarse_steps > 0))
    elif predicted < -options['speed_atol']:
        outcome.verdict['front_direction'] = bool(np.all(coarse_steps < 0))

    _, C2 = measure_constants(trace, (0.0, horizon))
    try:
        upper, lower, beta = exact_speed_profiles(params, spec, gap=options['gap'], C2=C2)
    except CertificateInfeasibleError as exc:
        return _no_certificate(outcome, exc, trace, grid, params.m, options)

    lo, hi = lower.derived['front_speed'], upper.derived['front_speed']
    defect = structure_defect(trace, grid, spec, (0.0, max(upper.window[1], lower.window[1])))
    outcome.results.update({
        'beta': beta,
        'speed_bracket': [lo, hi],
        'upper': upper.to_dict(),
        'lower': lower.to_dict(),
        'upper_domination': _dominate(trace, upper, grid),
        'lower_domination': _dominate(trace, lower, grid),
        'structure_defect': defect,
        'structure_allowance': upper.derived['theta'],
    })
    outcome.verdict.update({
        'certificate_found': upper.holds and lower.holds,
        'bracket_contains_prediction': lo <= predicted <= hi,
        'speed_identity': math.isclose(spec.R0 * beta / 2.0, predicted, rel_tol=1e-12, abs_tol=1e-12),
    })
    _common(outcome, trace, grid, params.m, options)
    return outcome


def _domain_radius(grid: Grid, x0: float) -> float:
    if grid.radial:
        return grid.half_length
    return grid.half_length + abs(x0)


def _core_ball(u: np.ndarray, grid: Grid, eps1: float,
               center: Optional[float] = None) -> Tuple[float, float, float]:
    """
    Ball about the density peak on which u ≥ eps1.

    Once u ≥ eps1 everywhere the ball is the whole domain, centered on the
    domain center.

    Returns:
        (x0, R0_core, R_domain)
    """
    if not np.any(u < eps1):
        R_domain = _domain_radius(grid, 0.0)
        return 0.0, R_domain, R_domain
    if grid.radial:
        x0 = 0.0
    else:
        x0 = float(grid.centers[int(np.argmax(u))]) if center is None else center
    R_domain = _domain_radius(grid, x0)
    return x0, float(grid.distance_from(x0)[u < eps1].min()), R_domain


def _expanding(config: ScenarioConfig) -> Tuple[Outcome, Optional[Certificate], Grid, float]:
    """Long run plus the iterated expanding-certificate construction."""
    outcome = Outcome()
    options = config.options
    sim = Simulation.from_config(config)
    params = sim.state.params
    grid = sim.make_grid()
    trace = sim.run().trace
    outcome.trace = trace
    ubar = mean_density(sim.initial_state(grid).u, grid)
    eps1 = 0.5 * ubar

    t_hat = 0.0
    cert = None
    iterations = 0
    for iterations in range(1, options.get('max_iterations', 5) + 1):
        stored = trace.indices_in(t_hat, t_hat)
        if not stored:
            raise WindowNotCoveredError(
                f"No stored snapshot at t_hat={t_hat:.6g}; the expanding search needs snapshots kept"
            )
        x0, R0_core, R_domain = _core_ball(trace.snapshots[stored[0]].u, grid, eps1)
        try:
            cert = expanding_certificate(params, eps1, R0_core, R_domain,
                                         delta_request=options.get('delta_request'),
                                         t_hat=t_hat, x0=x0)
        except CertificateInfeasibleError as exc:
            outcome.results['certificate'] = _infeasible(exc)
            cert = None
            break
        reached = decay_time(trace, cert.derived['delta'])
        if reached is None:
            logger.warning("delta=%.3g is never reached within t_end", cert.derived['delta'])
            outcome.results['decay_reached'] = False
            cert = None
            break
        if reached <= t_hat:
            break
        t_hat = reached
        cert = None

    outcome.results.update({'ubar': ubar, 'eps1': eps1, 'iterations': iterations})
    if cert is not None:
        outcome.results['certificate'] = cert.to_dict()
    return outcome, cert, grid, ubar


def _lower_bound(trace: Trace, cert: Certificate) -> Dict[str, Any]:
    """min u from the certificate's t0 on, and whether the run reaches t0."""
    eps0, t0 = cert.derived['eps0'], cert.derived['t0']
    times = np.asarray(trace.times)
    after = times >= t0 * (1.0 - 1e-12)
    covered = bool(np.any(after))
    if not covered:
        logger.warning("The run ends at t=%.6g, before the certified t0=%.6g", times[-1], t0)
    min_after = float(np.min(trace.column('min_u')[after])) if covered else None
    return {
        'eps0': eps0,
        't0': t0,
        'lower_bound_covered': covered,
        'min_u_after_t0': min_after,
        'lower_bound_ok': covered and min_after >= eps0,
    }


def run_expanding(config: ScenarioConfig) -> Outcome:
    """Eventual positivity with an expanding lower certificate."""
    outcome, cert, grid, ubar = _expanding(config)
    trace = outcome.trace
    floor = POSITIVITY_REL_FLOOR * ubar
    onset = positivity_time(trace, floor)
    outcome.results.update({'positivity_time': onset, 'positivity_floor': floor})
    outcome.verdict['positivity_reached'] = onset is not None
    outcome.verdict['certificate_found'] = cert is not None
    if cert is not None:
        bound = _lower_bound(trace, cert)
        outcome.results.update(bound)
        outcome.results['domination'] = _dominate(trace, cert, grid)
        outcome.verdict.update({
            'domination': outcome.results['domination']['holds'],
            'lower_bound_ok': bound['lower_bound_ok'],
        })
    _common(outcome, trace, grid, config.model['m'], config.options)
    return outcome


def _fit_decay(name: str, table, values: np.ndarray, window: Tuple[float, float],
               floor: float, ubar: float) -> Dict[str, Any]:
    try:
        fit = fit_exponential(table['t'].to_numpy(), values, window=window, ubar=ubar, floor=floor)
    except ValueError as exc:
        logger.warning("Decay fit of %s skipped: %s", name, exc)
        return {'error': str(exc), 'floor': floor}
    result = fit.to_dict()
    result['floor'] = floor
    return result


def run_decay(config: ScenarioConfig) -> Outcome:
    """
    Exponential relaxation to (ū, 0) once u stays above the certified level.

    The fit window opens at the first sample from which min u ≥ ε₀ holds for
    good, ε₀ being the expanding certificate's lower level (POSITIVITY_REL_FLOOR·ū
    without a certificate). The certificate's own t₀ bounds that onset from
    above; it usually lies well past the time the deviations reach round-off,
    so samples below DECAY_REL_FLOOR of their scale are left out of the fit.
    """
    outcome, cert, grid, ubar = _expanding(config)
    options = config.options
    trace = outcome.trace
    m = config.model['m']
    outcome.verdict['certificate_found'] = cert is not None
    floor = cert.derived['eps0'] if cert is not None else POSITIVITY_REL_FLOOR * ubar
    onset = positivity_time(trace, floor)
    outcome.results.update({'positivity_time': onset, 'positivity_floor': floor})
    outcome.verdict['positivity_reached'] = onset is not None
    if cert is not None:
        t0 = cert.derived['t0']
        outcome.results['certificate_t0'] = t0
        outcome.verdict['onset_before_t0'] = onset is not None and onset <= t0
    if onset is None:
        _common(outcome, trace, grid, m, options)
        return outcome

    table = decay_table(trace, grid, ubar)
    window = (onset, float(table['t'].iloc[-1]))
    v_metric = (table['linf_v'] + table['gradmax_v']).to_numpy()
    fits = {
        'u': _fit_decay('u', table, table['dev_u'].to_numpy(), window,
                        DECAY_REL_FLOOR * ubar, ubar),
        'v': _fit_decay('v', table, v_metric, window, DECAY_REL_FLOOR * v_metric[0], ubar),
    }
    grad0 = trace.rows[0]['gradmax_v']
    grad_end = trace.rows[-1]['gradmax_v']
    outcome.results.update({
        'fit_u': fits['u'],
        'fit_v': fits['v'],
        'fit_window_start': onset,
        'gradmax_v_ratio': grad_end / grad0 if grad0 > 0 else 0.0,
    })
    for name, fit in fits.items():
        outcome.verdict[f'decay_{name}'] = bool(
            'c' in fit and fit['c'] > 0 and fit['r_squared'] >= options['min_r2'])
    outcome.verdict['gradient_vanishes'] = grad_end <= options['final_grad_ratio'] * grad0
    _common(outcome, trace, grid, m, options)
    return outcome


def run_ordering(config: ScenarioConfig) -> Outcome:
    """Two nested bumps against one frozen attractant stay ordered."""
    outcome = Outcome()
    options = config.options
    sim = Simulation.from_config(config)
    params, spec = sim.state.params, sim.state.spec
    grid = sim.make_grid()
    v0 = aggregating_v0(grid, spec)
    upper = State(u=bump_u0(grid, spec, params), v=v0, t=0.0)
    lower_spec = replace(spec, K0=spec.K0 * options['lower_scale'],
                         R0=options.get('lower_R0', spec.R0))
    lower = State(u=bump_u0(grid, lower_spec, params), v=v0.copy(), t=0.0)
    if np.any(lower.u > upper.u):
        raise ConfigError(["ordering needs the lower bump below the upper one at t = 0"])

    low_trace, up_trace = run_ordered_pair(lower, upper, params, grid, sim.state.controls,
                                           sim.state.sampling)
    gaps = [float(np.max(lo.u - up.u)) for lo, up in zip(low_trace.snapshots, up_trace.snapshots)]
    outcome.trace = up_trace
    outcome.extra_traces['lower'] = low_trace
    outcome.results.update({
        'worst_order_gap': max(gaps),
        'lower_mass_drift': _mass_drift(low_trace),
    })
    outcome.verdict['ordered'] = max(gaps) <= options['order_tol']
    _common(outcome, up_trace, grid, params.m, options)
    return outcome


RUNNERS: Dict[str, Callable[[ScenarioConfig], Outcome]] = {
    'pme-validate': run_pme_validate,
    'shrinking': run_shrinking,
    'finite-speed': run_finite_speed,
    'exact-speed': run_exact_speed,
    'expanding': run_expanding,
    'decay': run_decay,
    'ordering': run_ordering,
}


# ============================================================
# DRIVER
# ============================================================

def _error_report(config: Optional[ScenarioConfig], exc: ChemofrontError,
                  scenario: str) -> Dict[str, Any]:
    error = {'type': type(exc).__name__, 'message': str(exc)}
    for attr in ('step', 'time', 'field', 'problems', 'inequality', 'margin'):
        if hasattr(exc, attr):
            error[attr] = getattr(exc, attr)
    return {
        'scenario': scenario,
        'status': 'error',
        'version': __version__,
        'config': config.to_dict() if config is not None else {},
        'verdict': {},
        'results': {},
        'error': error,
    }


def run_scenario(config: ScenarioConfig, write: bool = True) -> Tuple[int, Dict[str, Any]]:
    """
    Run one scenario and write its artifacts.

    Writes trace.csv, snapshots/ and report.json under config.output_dir
    (the lower run of 'ordering' goes to lower/). Errors from chemofront
    are recorded in report.json instead of propagating.

    Returns:
        (exit_code, report): 0 if every verdict check passed, 1 if one
        failed, 2 on error
    """
    out = Path(config.output_dir)
    reporter = get_backend('json')
    try:
        config.validate()
        logger.info("Running scenario '%s' into %s", config.scenario, out)
        outcome = RUNNERS[config.scenario](config)
    except ChemofrontError as exc:
        logger.error("Scenario '%s' aborted: %s", config.scenario, exc)
        report = _error_report(config, exc, config.scenario)
        if write:
            reporter.write_report(report, out)
        return EXIT_ERROR, report

    passed = all(outcome.verdict.values())
    report = {
        'scenario': config.scenario,
        'status': 'ok' if passed else 'failed',
        'version': __version__,
        'config': config.to_dict(),
        'verdict': outcome.verdict,
        'results': outcome.results,
    }
    if write:
        tables = get_backend('csv')
        if outcome.trace is not None:
            tables.write_trace(outcome.trace, out)
            tables.write_snapshots(outcome.trace, out)
        for name, trace in outcome.extra_traces.items():
            tables.write_trace(trace, out / name)
            tables.write_snapshots(trace, out / name)
        reporter.write_report(report, out)
    failing = sorted(name for name, ok in outcome.verdict.items() if not ok)
    if failing:
        logger.warning("Scenario '%s' failed checks: %s", config.scenario, ', '.join(failing))
    else:
        logger.info("Scenario '%s' passed %d checks", config.scenario, len(outcome.verdict))
    return (EXIT_OK if passed else EXIT_FAILED), report


# ============================================================
# CERTIFICATES WITHOUT A RUN
# ============================================================

def _certify(config: ScenarioConfig) -> Outcome:
    """Certificates from the initial data alone, with C1, C2 taken from v₀."""
    outcome = Outcome()
    sim = Simulation.from_config(config)
    if config.scenario == 'finite-speed':
        sim = sim.constant_attractant(config.options.get('v_level', 1.0))
    params, spec = sim.state.params, sim.state.spec
    grid = sim.make_grid()
    state = sim.initial_state(grid)
    C1, C2 = grad_max(state.v, grid), lap_max(state.v, grid)
    outcome.results.update({'C1': C1, 'C2': C2})

    certs: Dict[str, Certificate] = {}
    try:
        if config.scenario == 'shrinking':
            certs['shrinking'] = shrinking_certificate(params, spec, C1, C2)
        elif config.scenario == 'finite-speed':
            certs['finite_speed'] = finite_speed_certificate(
                params, spec, C1, C2, config.options['R_envelope'])
        elif config.scenario == 'exact-speed':
            upper, lower, beta = exact_speed_profiles(params, spec, config.options['gap'], C2=C2)
            certs.update({'upper': upper, 'lower': lower})
            outcome.results['beta'] = beta
        elif config.scenario in ('expanding', 'decay'):
            eps1 = 0.5 * mean_density(state.u, grid)
            x0, R0_core, R_domain = _core_ball(state.u, grid, eps1, center=spec.x0)
            certs['expanding'] = expanding_certificate(
                params, eps1, R0_core, R_domain,
                delta_request=config.options.get('delta_request'), x0=x0)
        else:
            raise ConfigError([f"scenario '{config.scenario}' has no certificate to build"])
    except CertificateInfeasibleError as exc:
        outcome.results['certificate'] = _infeasible(exc)
        outcome.verdict['certificate_found'] = False
        return outcome

    for name, cert in certs.items():
        outcome.results[name] = cert.to_dict()
        outcome.verdict[f'{name}_holds'] = cert.holds
    return outcome


def certify_scenario(config: ScenarioConfig, write: bool = True) -> Tuple[int, Dict[str, Any]]:
    """
    Build the scenario's certificates without simulating and write report.json.

    Returns:
        (exit_code, report) as for run_scenario
    """
    out = Path(config.output_dir)
    reporter = get_backend('json')
    try:
        config.validate()
        outcome = _certify(config)
    except ChemofrontError as exc:
        report = _error_report(config, exc, config.scenario)
        if write:
            reporter.write_report(report, out)
        return EXIT_ERROR, report
    passed = all(outcome.verdict.values())
    report = {
        'scenario': config.scenario,
        'status': 'ok' if passed else 'failed',
        'version': __version__,
        'config': config.to_dict(),
        'verdict': outcome.verdict,
        'results': outcome.results,
    }
    if write:
        reporter.write_report(report, out)
    return (EXIT_OK if passed else EXIT_FAILED), report
