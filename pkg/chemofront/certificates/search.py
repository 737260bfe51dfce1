"""
Parameter searches for the four comparison-profile constructions.

Each search walks a bounded geometric grid of candidate parameters, scores
a candidate by reduced closed forms of its inequality system, and emits a
Certificate only after ``check_inequalities`` re-derives every margin from
the stored parameters and finds none negative.
"""
import logging
import math
from typing import Dict, Iterable, Optional, Tuple

from chemofront.certificates.checks import SHRINKING_BETA_FLOOR, check_inequalities
from chemofront.certificates.profiles import Certificate, SelfSimilarProfile
from chemofront.core.errors import CertificateInfeasibleError
from chemofront.core.model import ModelParams
from chemofront.initial_data import BumpSpec, hypothesis_shrinking

logger = logging.getLogger(__name__)

SIGMA_EXPONENTS = range(-20, 21)
LOG_OVERFLOW = 700.0


def initial_spread(params: ModelParams, spec: BumpSpec) -> float:
    """K0·max{1, R0^{2(d0−d)}}, the amplitude any upper profile must start from."""
    d0 = spec.exponent(params)
    return spec.K0 * max(1.0, spec.R0 ** (2.0 * (d0 - params.d)))


class _Best:
    """Tracks the candidate whose worst margin is largest."""

    def __init__(self):
        self.inequality: Optional[str] = None
        self.margin = -math.inf

    def offer(self, margins: Dict[str, float]) -> Tuple[str, float]:
        name = min(margins, key=margins.get)
        if margins[name] > self.margin:
            self.inequality, self.margin = name, margins[name]
        return name, margins[name]


def _emit(cert: Certificate, params: ModelParams, spec) -> Optional[Certificate]:
    report = check_inequalities(cert, params, spec)
    if not report.ok:
        return None
    return cert.copy(margins=report.margins)


def shrinking_certificate(params: ModelParams, spec: BumpSpec, C1: float, C2: float,
                          structure_time: Optional[float] = None, *,
                          tau_levels: int = 31, beta_halvings: int = 40,
                          sigma_exponents: Iterable[int] = SIGMA_EXPONENTS) -> Certificate:
    """
    Upper profile with a shrinking support.

    τ runs over 1, 1/2, ..., and for each τ the exponent β walks from the
    bottom of its bracket toward 0 by halving while σ increases through
    powers of two. The first candidate whose margins all hold is emitted.

    Args:
        params: Model coefficients
        spec: Initial bump and attractant structure
        C1: Bound on ‖∇v‖∞ (recorded; it does not enter this system)
        C2: Bound on ‖Δv‖∞ over the window
        structure_time: Time up to which the attractant keeps its aggregating
            shape; None means it is not limiting

    Raises:
        CertificateInfeasibleError: If no candidate satisfies the system
    """
    m, N, chi, mu = params.m, params.dim, params.chi, spec.mu
    d = params.d
    if structure_time is not None and not structure_time > 0:
        raise CertificateInfeasibleError('shrinking', 'window', float(structure_time))
    satisfied, hypothesis_margin = hypothesis_shrinking(params, spec)
    if not satisfied:
        logger.warning("Shrinking hypothesis fails (chi*mu margin %.4g); search will likely fail",
                       hypothesis_margin)

    spread = initial_spread(params, spec)
    E = spread ** (m - 1.0)
    porous_coeff = 2.0 * N * m / (m - 1.0)
    compress_coeff = 4.0 * m / (m - 1.0) ** 2
    sigmas = [2.0 ** k for k in sigma_exponents]
    best = _Best()

    for j in range(tau_levels):
        tau = 2.0 ** -j
        for i in range(beta_halvings + 1):
            beta = SHRINKING_BETA_FLOOR / 2.0 ** i
            for sigma in sigmas:
                log_eps = math.log(spread) + (d * beta - sigma) * math.log(tau)
                if log_eps > LOG_OVERFLOW:
                    break
                if ((m - 1.0) * sigma - beta) * math.log(2.0) > LOG_OVERFLOW:
                    break
                compress = compress_coeff * E * 2.0 ** ((m - 1.0) * sigma - beta)
                first = sigma + porous_coeff * E * tau - 2.0 * C2 * chi * tau
                drift = beta / ((m - 1.0) * tau) - compress
                margins = {
                    'upper_h': first,
                    'annulus': d * chi * mu + drift,
                    'inner': first * 5.0 / (9.0 * tau ** beta)
                    + (drift - 4.0 * d * chi * mu) * (2.0 * tau) ** (1.0 - beta) / 4.0,
                }
                best.offer(margins)
                if margins['annulus'] < 0:
                    # decreasing in sigma from here on
                    break
                if min(margins.values()) < 0:
                    continue
                t0 = tau if structure_time is None else min(tau, structure_time)
                profile = SelfSimilarProfile(
                    epsilon=math.exp(log_eps) * (1.0 + 1e-10), tau=tau, sigma=sigma, beta=beta,
                    eta=spec.R0 * tau ** (-0.5 * beta), d=d, x0=spec.x0,
                )
                cert = _emit(Certificate(
                    kind='shrinking', role='upper', profile=profile, window=(0.0, t0),
                    C1=C1, C2=C2,
                    derived={
                        't0': t0, 'structure_time': structure_time, 'K0max': spread,
                        'hypothesis_margin': hypothesis_margin,
                    },
                ), params, spec)
                if cert is not None:
                    logger.info("Shrinking certificate: tau=%.3g beta=%.4g sigma=%.4g t0=%.4g",
                                tau, beta, sigma, t0)
                    return cert

    logger.warning("Shrinking search exhausted; worst inequality '%s' at %.4g",
                   best.inequality, best.margin)
    raise CertificateInfeasibleError('shrinking', best.inequality, best.margin)


def finite_speed_certificate(params: ModelParams, spec: BumpSpec, C1: float, C2: float,
                             R_envelope: float, *, max_doublings: int = 20) -> Certificate:
    """
    Upper profile whose support stays inside B_{R_envelope}(x0) on its window.

    τ = 1, η = R0, β = (m−1)σ, with σ doubling from 1 until both outer and
    inner inequalities hold.

    Raises:
        ValueError: If R_envelope ≤ R0
        CertificateInfeasibleError: If σ = 2^max_doublings is still infeasible
    """
    m, chi, R0 = params.m, params.chi, spec.R0
    if not R_envelope > R0:
        raise ValueError(f"R_envelope must exceed R0={R0}, got {R_envelope}")
    spread = initial_spread(params, spec)
    log_ratio = math.log(R_envelope / R0)
    best = _Best()

    for k in range(max_doublings + 1):
        sigma = 2.0 ** k
        beta = (m - 1.0) * sigma
        t_hat = math.expm1(2.0 * log_ratio / beta) * (1.0 - 1e-8)
        half_power = 1.0 if beta >= 1.0 else 2.0 ** (beta - 1.0)
        margins = {
            'sigma_vs_C2': sigma - 2.0 * C2 * chi,
            'outer': beta / (2.0 * (m - 1.0)) - 4.0 * m / (m - 1.0) ** 2 * spread ** (m - 1.0)
            - 4.0 * C1 * chi / ((m - 1.0) * R0),
            'inner': (sigma - 2.0 * C2 * chi) * 0.75 * R0 * half_power - C1 * chi / (m - 1.0),
            't_hat': t_hat,
        }
        best.offer(margins)
        if min(margins.values()) < 0 or not t_hat > 0:
            continue
        t0 = min(1.0, t_hat)
        profile = SelfSimilarProfile(epsilon=spread, tau=1.0, sigma=sigma, beta=beta,
                                     eta=R0, d=params.d, x0=spec.x0)
        cert = _emit(Certificate(
            kind='finite-speed', role='upper', profile=profile, window=(0.0, t0), C1=C1, C2=C2,
            derived={'R_envelope': R_envelope, 't_hat': t_hat, 't0': t0, 'K0max': spread},
        ), params, spec)
        if cert is not None:
            logger.info("Finite-speed certificate: sigma=%.4g t_hat=%.4g", sigma, t_hat)
            return cert

    raise CertificateInfeasibleError('finite-speed', best.inequality, best.margin)


def _exact_margins(role: str, sigma: float, beta: float, T_e: float, *, N: int, m: float,
                   K0: float, chi: float, mu: float, C2: float, theta: float) -> Dict[str, float]:
    d = 1.0 / (m - 1.0)
    c = 4.0 * m / (m - 1.0) * K0 ** (m - 1.0)
    porous = 2.0 * N * m * d * K0 ** (m - 1.0)
    log_power = ((m - 1.0) * sigma - beta) * math.log(T_e)
    power = math.exp(log_power) if log_power <= LOG_OVERFLOW else math.inf
    if role == 'upper':
        return {
            'porous_h': sigma / T_e + porous * min(1.0, power) - chi * C2,
            'porous_r2': min(beta, beta / T_e) - c * max(1.0, power) + 2.0 * chi * mu * (1.0 - theta),
        }
    return {
        'porous_h': -(sigma / T_e + porous * max(1.0, power) + chi * C2),
        'porous_r2': -(max(beta, beta / T_e) - c * min(1.0, power) + 2.0 * chi * mu * (1.0 + theta)),
    }


def exact_speed_profiles(params: ModelParams, spec: BumpSpec, gap: float = 0.1,
                         C2: Optional[float] = None, *, max_halvings: int = 40,
                         sigma_exponents: Iterable[int] = SIGMA_EXPONENTS,
                         ) -> Tuple[Certificate, Certificate, float]:
    """
    Upper and lower profiles whose support speeds bracket the exact front speed.

    β* = 4m/(m−1)·K0^{m−1} − 2χμ; the upper profile uses β* + gap with σ > 0,
    the lower β* − gap with σ < 0. For each role the window length halves
    from 1 until some σ = ±2^k satisfies the worst-case margins over it.

    Args:
        gap: Offset of β± from β*
        C2: Bound on ‖Δv‖∞ near the initial time; default μN, the exact
            Laplacian magnitude of the quadratic attractant

    Returns:
        (upper, lower, beta_star)

    Raises:
        ValueError: If gap ≤ 0 or the bump exponent is not 1/(m−1)
    """
    if not gap > 0:
        raise ValueError(f"gap must be positive, got {gap}")
    if not spec.is_canonical(params):
        raise ValueError(
            f"Exact speed needs d0 = 1/(m-1) = {params.d:.6g}, got {spec.exponent(params)}"
        )
    m, N, chi, mu = params.m, params.dim, params.chi, spec.mu
    K0, R0 = spec.K0, spec.R0
    C2 = mu * N if C2 is None else C2
    beta_star = 4.0 * m / (m - 1.0) * K0 ** (m - 1.0) - 2.0 * chi * mu
    theta = gap / (4.0 * chi * mu) if chi * mu > 0 else 0.0
    sigmas = [2.0 ** k for k in sigma_exponents]

    certs = {}
    for role, sign in (('upper', 1.0), ('lower', -1.0)):
        beta = beta_star + sign * gap
        best = _Best()
        for halving in range(max_halvings + 1):
            T_w = 2.0 ** -halving
            T_e = 1.0 + T_w
            extra = {
                'structure_defect': gap - 2.0 * chi * mu * theta,
                'support_in_structure': R0 + spec.width - R0 * max(1.0, T_e ** (0.5 * beta)),
            }
            found = None
            for magnitude in sigmas:
                sigma = sign * magnitude
                margins = _exact_margins(role, sigma, beta, T_e, N=N, m=m, K0=K0, chi=chi,
                                         mu=mu, C2=C2, theta=theta)
                margins.update(extra)
                best.offer(margins)
                if role == 'upper' and margins['porous_r2'] == -math.inf:
                    # T_e^((m-1)σ-β) only grows with σ from here on
                    break
                if min(margins.values()) >= 0:
                    found = sigma
                    break
            if found is None:
                continue
            profile = SelfSimilarProfile(epsilon=K0, tau=1.0, sigma=found, beta=beta, eta=R0,
                                         d=params.d, x0=spec.x0)
            cert = _emit(Certificate(
                kind=f'exact-speed-{role}', role=role, profile=profile, window=(0.0, T_w), C2=C2,
                derived={
                    'beta_star': beta_star, 'gap': gap, 'theta': theta, 'T_window': T_w,
                    'front_speed': R0 * beta / 2.0, 'predicted_speed': R0 * beta_star / 2.0,
                },
            ), params, spec)
            if cert is not None:
                certs[role] = cert
                break
        if role not in certs:
            raise CertificateInfeasibleError(f'exact-speed-{role}', best.inequality, best.margin)

    logger.info("Exact-speed bracket [%.4g, %.4g] around %.4g",
                certs['lower'].derived['front_speed'], certs['upper'].derived['front_speed'],
                R0 * beta_star / 2.0)
    return certs['upper'], certs['lower'], beta_star


def expanding_certificate(params: ModelParams, eps1: float, R0_core: float, R_domain: float,
                          delta_request: Optional[float] = None, t_hat: float = 0.0,
                          x0: float = 0.0, *, max_halvings: int = 60) -> Certificate:
    """
    Lower profile that grows from a positive core to cover the whole domain.

    β starts just under 1/(1 + 4N(m−1)) and halves until ε·η^{2d} ≤ ε₁, with
    ε fixed by 2m/(m−1)·ε^{m−1} = β, σ = −(1−β)/(m−1) and η = R0_core.
    L + 1 = (2R/R0)^{2/β} is carried in log space. The window is
    (t̂, t̂ + L) and τ = 1 − t̂ puts the profile's origin at t̂.

    Args:
        eps1: Lower bound of u on the core ball B_{R0_core}(x0)
        R0_core: Radius of the core ball
        R_domain: Radius of a ball about x0 containing the domain
        delta_request: Cap on δ; the result is the smaller of this and the
            recipe value
        t_hat: Time after which ‖∇v‖∞ and ‖Δv‖∞ stay below δ

    Raises:
        ValueError: If a radius or eps1 is out of range
        CertificateInfeasibleError: If δ underflows or the check fails
    """
    if not eps1 > 0:
        raise ValueError(f"eps1 must be positive, got {eps1}")
    if not R0_core > 0:
        raise ValueError(f"R0_core must be positive, got {R0_core}")
    if R_domain < R0_core:
        raise ValueError(f"R_domain={R_domain} must be >= R0_core={R0_core}")
    m, N, chi = params.m, params.dim, params.chi
    d = params.d
    eta = R0_core

    beta = (1.0 - 1e-6) / (1.0 + 4.0 * N * (m - 1.0))
    for _ in range(max_halvings):
        eps = (beta * (m - 1.0) / (2.0 * m)) ** d * (1.0 + 1e-12)
        if eps * eta ** (2.0 * d) <= eps1:
            break
        beta *= 0.5
    else:
        raise CertificateInfeasibleError('expanding', 'eps_eta', eps1 - eps * eta ** (2.0 * d))

    sigma = -(1.0 - beta) / (m - 1.0)
    log_ratio = math.log(2.0 * R_domain / R0_core)
    log_span = 2.0 / beta * log_ratio + 1e-6
    if log_span > LOG_OVERFLOW:
        raise CertificateInfeasibleError('expanding', 'delta_positive', 0.0)

    if chi == 0:
        delta = math.inf
    else:
        bounds = (
            math.log(-sigma / (4.0 * chi)) - log_span,
            math.log(2.0 * m / (m - 1.0) * eps ** (m - 1.0) * R0_core / (4.0 * chi)) - log_span,
            math.log(-sigma * eta ** 2 * (m - 1.0) / (4.0 * chi * R0_core)) - (1.0 - beta) * log_span,
        )
        delta = math.exp(min(bounds)) * (1.0 - 1e-10)
    if delta_request is not None:
        delta = min(delta, delta_request)
    if not delta > 0:
        raise CertificateInfeasibleError('expanding', 'delta_positive', 0.0)

    def _time_at(log_value: float) -> float:
        return t_hat - 1.0 + math.exp(log_value) if log_value < LOG_OVERFLOW else math.inf

    L = math.expm1(log_span)
    eps0 = eps * math.exp(sigma * log_span) * (0.5 * eta ** 2) ** d
    derived = {
        'eps1': eps1, 'R0_core': R0_core, 'R_domain': R_domain, 'delta': delta,
        'delta_request': delta_request, 'log_L_plus_1': log_span, 'L': L,
        't_hat': t_hat, 'T_hat': t_hat + L, 'eps0': eps0,
        'cover_time': _time_at(2.0 / beta * math.log(R_domain / eta)),
        't0': _time_at(math.log(2.0 * R_domain ** 2 / eta ** 2) / beta),
    }
    profile = SelfSimilarProfile(epsilon=eps, tau=1.0 - t_hat, sigma=sigma, beta=beta,
                                 eta=eta, d=d, x0=x0)
    cert = Certificate(kind='expanding', role='lower', profile=profile,
                       window=(t_hat, t_hat + L), C1=delta, C2=delta, derived=derived)
    report = check_inequalities(cert, params)
    if not report.ok:
        raise CertificateInfeasibleError('expanding', *report.worst)
    logger.info("Expanding certificate: beta=%.4g delta=%.4g eps0=%.4g L=%.4g",
                beta, delta, eps0, L)
    return cert.copy(margins=report.margins)
