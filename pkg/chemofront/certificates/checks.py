"""
Independent re-verification of certificate inequality systems.

Every inequality is recomputed from the stored profile parameters and
derived constants, written out term by term. The search code reaches the
same systems through reduced closed forms; agreement of the two paths is
what licenses emitting a certificate.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from chemofront.certificates.profiles import Certificate
from chemofront.core.model import ModelParams

logger = logging.getLogger(__name__)

EQUALITY_RTOL = 1e-9
SHRINKING_BETA_FLOOR = -2.0 * math.log(4.0 / 3.0) / math.log(2.0)


@dataclass
class MarginReport:
    """
    Recomputed slack of every inequality of a certificate.

    Attributes:
        kind: Certificate kind the margins belong to
        margins: Inequality name -> slack (≥ 0 means satisfied)
    """

    kind: str
    margins: Dict[str, float] = field(default_factory=dict)

    @property
    def negative(self) -> List[str]:
        return [name for name, value in self.margins.items() if not value >= 0]

    @property
    def ok(self) -> bool:
        return not self.negative

    @property
    def worst(self):
        name = min(self.margins, key=lambda key: self.margins[key])
        return name, self.margins[name]


def _equality_margin(lhs: float, rhs: float, rtol: float = EQUALITY_RTOL) -> float:
    """Nonnegative iff lhs and rhs agree to the relative tolerance."""
    return rtol * max(abs(lhs), abs(rhs), 1.0) - abs(lhs - rhs)


def _power_product(*pairs) -> float:
    """Π base^exponent evaluated through logarithms (inf on overflow)."""
    total = 0.0
    for base, exponent in pairs:
        if exponent == 0:
            continue
        total += exponent * math.log(base)
    return math.exp(total) if total < 709.0 else math.inf


def _spread(spec, params: ModelParams) -> float:
    """K0·max{1, R0^{2(d0−d)}}."""
    d0 = spec.exponent(params)
    return spec.K0 * max(1.0, spec.R0 ** (2.0 * (d0 - params.d)))


def _check_shrinking(cert: Certificate, params: ModelParams, spec) -> Dict[str, float]:
    p = cert.profile
    m, N, chi, mu = params.m, params.dim, params.chi, spec.mu
    eps, tau, sigma, beta = p.epsilon, p.tau, p.sigma, p.beta
    d = 1.0 / (m - 1.0)
    C2 = cert.C2

    porous = 2.0 * N * m / (m - 1.0) * _power_product((eps, m - 1.0), (tau, (m - 1.0) * sigma - beta + 1.0))
    compress = 4.0 * m / (m - 1.0) ** 2 * _power_product((eps, m - 1.0), (2.0 * tau, (m - 1.0) * sigma - beta))
    first = sigma + porous - 2.0 * C2 * chi * tau
    second = d * chi * mu + beta / ((m - 1.0) * tau) - compress
    third = (
        first * 5.0 / (9.0 * tau ** beta)
        + (beta / ((m - 1.0) * tau) - compress - 4.0 * d * chi * mu) * (2.0 * tau) ** (1.0 - beta) / 4.0
    )
    return {
        'eta_identity': _equality_margin(p.eta ** 2, spec.R0 ** 2 / tau ** beta),
        'initial_cover': eps * tau ** (sigma - d * beta) - _spread(spec, params),
        'upper_h': first,
        'annulus': second,
        'inner': third,
        'beta_bracket': beta - SHRINKING_BETA_FLOOR,
        'beta_sign': -beta,
        'sigma_sign': sigma,
        'window': tau - cert.window[1],
    }


def _check_finite_speed(cert: Certificate, params: ModelParams, spec) -> Dict[str, float]:
    p = cert.profile
    m, chi = params.m, params.chi
    eps, tau, sigma, beta = p.epsilon, p.tau, p.sigma, p.beta
    d = 1.0 / (m - 1.0)
    C1, C2, R0 = cert.C1, cert.C2, spec.R0
    R_env = cert.derived['R_envelope']
    t_hat = cert.derived['t_hat']
    exponent = (m - 1.0) * sigma - beta

    outer = (
        beta / (m - 1.0) / (2.0 * tau)
        - 4.0 * m / (m - 1.0) ** 2 * eps ** (m - 1.0) * tau ** exponent * max(1.0, 2.0 ** exponent)
        - 4.0 * C1 * chi / ((m - 1.0) * R0)
    )
    inner = (
        (sigma - 2.0 * C2 * chi) * 3.0 * R0 / (4.0 * tau ** beta) * min(1.0, 2.0 ** min(beta - 1.0, 0.0))
        - C1 * chi / (m - 1.0)
    )
    return {
        'eta_identity': _equality_margin(p.eta ** 2, R0 ** 2 / tau ** beta),
        'initial_cover': eps * tau ** (sigma - d * beta) - _spread(spec, params),
        'beta_link': _equality_margin(beta, (m - 1.0) * sigma),
        'sigma_vs_C2': sigma - 2.0 * C2 * chi * tau,
        'outer': outer,
        'inner': inner,
        'envelope': R_env ** 2 / R0 ** 2 - (1.0 + t_hat / tau) ** beta,
        'window': min(tau, t_hat) - cert.window[1],
    }


def _check_exact_speed(cert: Certificate, params: ModelParams, spec) -> Dict[str, float]:
    p = cert.profile
    m, N, chi, mu = params.m, params.dim, params.chi, spec.mu
    d = 1.0 / (m - 1.0)
    K0, R0 = spec.K0, spec.R0
    gap = cert.derived['gap']
    theta = cert.derived['theta']
    beta_star = cert.derived['beta_star']
    sign = 1.0 if cert.role == 'upper' else -1.0

    s = np.linspace(p.tau, p.tau + cert.window[1], 257)
    power = s ** ((m - 1.0) * p.sigma - p.beta)
    h_coeff = p.sigma / s + 2.0 * N * m * d * p.epsilon ** (m - 1.0) * power
    r_coeff = p.beta / s - 4.0 * m / (m - 1.0) * p.epsilon ** (m - 1.0) * power
    if cert.role == 'upper':
        h_margin = float(np.min(h_coeff - chi * cert.C2))
        r_margin = float(np.min(r_coeff + 2.0 * chi * mu * (1.0 - theta)))
    else:
        h_margin = float(np.min(-(h_coeff + chi * cert.C2)))
        r_margin = float(np.min(-(r_coeff + 2.0 * chi * mu * (1.0 + theta))))

    reach = R0 * max(1.0, (p.tau + cert.window[1]) ** (0.5 * p.beta))
    return {
        'porous_h': h_margin,
        'porous_r2': r_margin,
        'structure_defect': gap - 2.0 * chi * mu * theta,
        'support_in_structure': R0 + spec.width - reach,
        'initial_match': _equality_margin(
            p.epsilon * p.tau ** (p.sigma - d * p.beta) * p.eta ** (2.0 * d), K0 * R0 ** (2.0 * d),
        ),
        'beta_offset': _equality_margin(p.beta - beta_star, sign * gap),
    }


def _check_expanding(cert: Certificate, params: ModelParams, spec) -> Dict[str, float]:
    p = cert.profile
    m, N, chi = params.m, params.dim, params.chi
    d = 1.0 / (m - 1.0)
    eps, beta, sigma, eta = p.epsilon, p.beta, p.sigma, p.eta
    derived = cert.derived
    eps1, R0, R = derived['eps1'], derived['R0_core'], derived['R_domain']
    delta = derived['delta']
    log_span = derived['log_L_plus_1']
    dchi = 0.0 if chi == 0 else delta * chi
    span = math.exp(log_span) if log_span < 709.0 else math.inf
    porous = 2.0 * m / (m - 1.0) * eps ** (m - 1.0)
    return {
        'eta_le_R0': R0 - eta,
        'eps_eta': eps1 - eps * eta ** (2.0 * d),
        'porous_vs_sigma': -sigma / 4.0 - N * porous,
        'beta_vs_eps': porous - beta,
        'delta_vs_sigma': -sigma / 4.0 - dchi * span,
        'delta_vs_eps': porous * R0 - 4.0 * dchi * span,
        'delta_inner': -sigma * eta ** 2 / 4.0 - dchi * math.exp((1.0 - beta) * log_span) * R0 / (m - 1.0),
        'support_covers': 0.5 * beta * log_span - math.log(2.0 * R / R0),
        'sigma_link': _equality_margin(sigma, -(1.0 - beta) / (m - 1.0)),
        'beta_range': min(beta, 1.0 - beta),
        'tau_link': _equality_margin(p.tau, 1.0 - derived['t_hat']),
    }


_CHECKS = {
    'shrinking': _check_shrinking,
    'finite-speed': _check_finite_speed,
    'exact-speed-upper': _check_exact_speed,
    'exact-speed-lower': _check_exact_speed,
    'expanding': _check_expanding,
}


def check_inequalities(cert: Certificate, params: ModelParams, spec=None) -> MarginReport:
    """
    Recompute every inequality of a certificate's system.

    Args:
        cert: Certificate to verify
        params: Model coefficients
        spec: BumpSpec of the initial data (unused for expanding certificates)

    Returns:
        MarginReport; any negative margin is listed in ``negative``
    """
    report = MarginReport(kind=cert.kind, margins=_CHECKS[cert.kind](cert, params, spec))
    if not report.ok:
        logger.debug("%s certificate fails %s", cert.kind, report.negative)
    return report
