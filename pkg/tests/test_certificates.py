"""
Tests for comparison profiles, certificate searches and numerical domination.
"""
import math
from dataclasses import replace

import numpy as np
import pytest

from chemofront import Simulation
from chemofront.analysis import BarenblattParams, barenblatt_eval, predicted_speed
from chemofront.certificates import (
    Certificate,
    SelfSimilarProfile,
    barenblatt_profile,
    check_inequalities,
    clip_to_trace,
    decay_time,
    exact_speed_profiles,
    expanding_certificate,
    finite_speed_certificate,
    initial_spread,
    measure_constants,
    numeric_domination,
    positivity_time,
    profile_eval,
    profile_on_grid,
    shrinking_certificate,
    structure_defect,
    structure_time,
)
from chemofront.core.errors import CertificateInfeasibleError, WindowNotCoveredError
from chemofront.core.model import ModelParams, State, make_grid
from chemofront.initial_data import BumpSpec, aggregating_v0
from chemofront.solver import Trace


class TestSelfSimilarProfile:
    """Test profile evaluation and support geometry."""

    def test_time_independent_example(self):
        p = SelfSimilarProfile(epsilon=1.0, tau=1.0, sigma=0.0, beta=0.0, eta=1.0, d=1.0)
        assert profile_eval(p, 0.5, 0.0) == pytest.approx(0.75)
        assert profile_eval(p, 0.5, 3.0) == pytest.approx(0.75)
        assert profile_eval(p, 1.5, 0.0) == 0.0

    def test_peak(self):
        p = SelfSimilarProfile(epsilon=2.0, tau=0.5, sigma=1.5, beta=-0.3, eta=0.7, d=2.0, x0=0.1)
        expected = 2.0 * 1.5 ** 1.5 * 0.7 ** 4
        assert profile_eval(p, 0.1, 1.0) == pytest.approx(expected)
        assert p.peak(1.0) == pytest.approx(expected)

    def test_negative_beta_shrinks(self):
        p = SelfSimilarProfile(epsilon=1.0, tau=1.0, sigma=1.0, beta=-0.5, eta=1.0, d=1.0)
        radii = [p.support_radius(t) for t in (0.0, 0.5, 1.0)]
        assert radii[0] > radii[1] > radii[2]
        assert p.support_speed(0.0) == pytest.approx(-0.25)

    def test_undefined_before_origin(self):
        p = SelfSimilarProfile(epsilon=1.0, tau=0.5, sigma=1.0, beta=1.0, eta=1.0, d=1.0)
        with pytest.raises(ValueError, match='tau'):
            profile_eval(p, 0.0, -0.5)

    def test_rejects_nonpositive_eta(self):
        with pytest.raises(ValueError):
            SelfSimilarProfile(epsilon=1.0, tau=1.0, sigma=0.0, beta=0.0, eta=0.0, d=1.0)

    def test_on_grid_uses_center(self):
        grid = make_grid(1, False, 1.0, 100)
        p = SelfSimilarProfile(epsilon=1.0, tau=1.0, sigma=0.0, beta=0.0, eta=0.2, d=1.0, x0=0.5)
        values = profile_on_grid(p, grid, 0.0)
        assert grid.centers[np.argmax(values)] == pytest.approx(0.5, abs=grid.dx)
        assert np.all(values[np.abs(grid.centers - 0.5) >= 0.2] == 0.0)

    @pytest.mark.parametrize('m, N', [(2.0, 1), (3.0, 2), (1.5, 3)])
    def test_barenblatt_profile_reproduces_source_solution(self, m, N):
        params = ModelParams(m=m, dim=N, radial=N > 1)
        p = barenblatt_profile(params)
        bp = BarenblattParams(m=m, N=N)
        x = np.linspace(0.0, 6.0, 50)
        for t in (0.0, 0.7, 2.0):
            assert np.allclose(profile_eval(p, x, t), barenblatt_eval(x, t, bp))


class TestCertificate:
    """Test the Certificate container."""

    @pytest.fixture
    def profile(self):
        return SelfSimilarProfile(epsilon=1.0, tau=1.0, sigma=0.0, beta=0.0, eta=1.0, d=1.0)

    def test_empty_window(self, profile):
        with pytest.raises(ValueError, match='empty'):
            Certificate(kind='shrinking', role='upper', profile=profile, window=(1.0, 1.0))

    def test_unknown_role(self, profile):
        with pytest.raises(ValueError, match='role'):
            Certificate(kind='shrinking', role='middle', profile=profile, window=(0.0, 1.0))

    def test_holds_and_worst(self, profile):
        cert = Certificate(kind='shrinking', role='upper', profile=profile, window=(0.0, 1.0),
                           margins={'a': 0.5, 'b': 0.1})
        assert cert.holds
        assert cert.worst == ('b', 0.1)
        assert not cert.copy(margins={'a': -1e-3}).holds

    def test_to_dict(self, profile):
        cert = Certificate(kind='expanding', role='lower', profile=profile, window=(2.0, 3.0))
        data = cert.to_dict()
        assert data['window'] == {'start': 2.0, 'end': 3.0}
        assert data['profile']['eta'] == 1.0


class TestShrinkingCertificate:
    """Test the shrinking upper-profile search."""

    @pytest.fixture
    def params(self):
        return ModelParams(m=2.0, chi=9.0)

    @pytest.fixture
    def spec(self):
        return BumpSpec(K0=1.0, R0=1.0, mu=1.0, delta=0.1)

    def test_found_above_threshold(self, params, spec):
        cert = shrinking_certificate(params, spec, C1=1.0, C2=1.0)
        assert cert.role == 'upper'
        assert cert.holds
        assert cert.profile.beta < 0
        assert cert.profile.sigma > 0
        assert check_inequalities(cert, params, spec).ok

    def test_support_recedes_on_window(self, params, spec):
        cert = shrinking_certificate(params, spec, C1=1.0, C2=1.0)
        t0 = cert.window[1]
        assert cert.profile.support_radius(0.0) == pytest.approx(spec.R0)
        assert cert.profile.support_radius(t0) < spec.R0
        assert cert.profile.support_speed(0.0) < 0

    def test_covers_initial_bump(self, params, spec):
        cert = shrinking_certificate(params, spec, C1=1.0, C2=1.0)
        grid = make_grid(1, False, 2.0, 400)
        u0 = spec.K0 * np.clip(spec.R0 ** 2 - grid.centers ** 2, 0.0, None)
        assert np.all(profile_on_grid(cert.profile, grid, 0.0) >= u0 - 1e-12)

    def test_structure_time_limits_window(self, params, spec):
        cert = shrinking_certificate(params, spec, C1=1.0, C2=1.0, structure_time=1e-6)
        assert cert.window[1] <= 1e-6

    def test_threshold_is_infeasible(self, spec):
        with pytest.raises(CertificateInfeasibleError) as info:
            shrinking_certificate(ModelParams(m=2.0, chi=8.0), spec, C1=1.0, C2=1.0)
        assert info.value.margin < 0

    def test_zero_structure_time(self, params, spec):
        with pytest.raises(CertificateInfeasibleError, match='window'):
            shrinking_certificate(params, spec, C1=1.0, C2=1.0, structure_time=0.0)

    def test_flipped_beta_is_rejected(self, params, spec):
        cert = shrinking_certificate(params, spec, C1=1.0, C2=1.0)
        flipped = cert.copy(profile=replace(cert.profile, beta=-cert.profile.beta))
        report = check_inequalities(flipped, params, spec)
        assert not report.ok
        assert 'beta_sign' in report.negative


class TestFiniteSpeedCertificate:
    """Test the finite-speed upper profile without attractant structure."""

    @pytest.fixture
    def spec(self):
        return BumpSpec(K0=1.0, R0=0.5)

    def test_found_with_flat_attractant(self, spec):
        params = ModelParams(m=2.0, chi=1.0)
        cert = finite_speed_certificate(params, spec, C1=0.0, C2=0.0, R_envelope=0.8)
        assert cert.holds
        assert cert.profile.sigma >= 16
        assert cert.profile.beta == pytest.approx(cert.profile.sigma)
        assert cert.profile.support_radius(cert.window[1]) <= 0.8

    def test_envelope_must_exceed_R0(self, spec):
        with pytest.raises(ValueError, match='R_envelope'):
            finite_speed_certificate(ModelParams(chi=1.0), spec, 0.0, 0.0, R_envelope=0.5)

    def test_checks_agree(self, spec):
        params = ModelParams(m=2.0, chi=1.0)
        cert = finite_speed_certificate(params, spec, C1=0.5, C2=0.5, R_envelope=0.8)
        assert check_inequalities(cert, params, spec).margins == pytest.approx(cert.margins)
        assert cert.derived['t0'] == cert.window[1]


class TestExactSpeedProfiles:
    """Test the bracketing profiles of the exact front speed."""

    @pytest.fixture
    def spec(self):
        return BumpSpec(K0=1.0, R0=0.5, mu=1.0, delta=0.1)

    @pytest.mark.parametrize('chi, beta_star', [(3.0, 2.0), (4.0, 0.0)])
    def test_beta_star(self, spec, chi, beta_star):
        _, _, beta = exact_speed_profiles(ModelParams(m=2.0, chi=chi), spec, gap=0.1)
        assert beta == pytest.approx(beta_star, abs=1e-12)

    def test_bracket_contains_prediction(self, spec):
        params = ModelParams(m=2.0, chi=3.0)
        upper, lower, beta = exact_speed_profiles(params, spec, gap=0.1)
        predicted = predicted_speed(params, spec)
        assert spec.R0 * beta / 2.0 == pytest.approx(predicted, abs=1e-12)
        assert lower.derived['front_speed'] < predicted < upper.derived['front_speed']
        width = upper.derived['front_speed'] - lower.derived['front_speed']
        assert width == pytest.approx(spec.R0 * 0.1)

    def test_roles_and_signs(self, spec):
        upper, lower, _ = exact_speed_profiles(ModelParams(m=2.0, chi=3.0), spec, gap=0.1)
        assert (upper.role, lower.role) == ('upper', 'lower')
        assert upper.profile.sigma > 0 > lower.profile.sigma
        assert upper.holds and lower.holds

    def test_initial_profile_is_the_bump(self, spec):
        upper, _, _ = exact_speed_profiles(ModelParams(m=2.0, chi=3.0), spec, gap=0.1)
        assert upper.profile.peak(0.0) == pytest.approx(spec.K0 * spec.R0 ** 2)

    def test_large_laplacian_bound_narrows_window(self, spec):
        # |sigma| >= chi·C2 ~ 1e4, so T_e^((m-1)σ-β) stays near 1 only for T_e - 1 < 4e-7
        upper, lower, _ = exact_speed_profiles(ModelParams(m=2.0, chi=1.0), spec, gap=0.1, C2=1e4)
        assert upper.holds and lower.holds
        assert upper.profile.sigma >= 1e4 and lower.profile.sigma <= -1e4
        assert max(upper.window[1], lower.window[1]) <= 2.0 ** -20

    def test_rejects_nonpositive_gap(self, spec):
        with pytest.raises(ValueError, match='gap'):
            exact_speed_profiles(ModelParams(chi=3.0), spec, gap=0.0)

    def test_rejects_noncanonical_bump(self):
        with pytest.raises(ValueError, match='d0'):
            exact_speed_profiles(ModelParams(chi=3.0), BumpSpec(d0=2.0, mu=1.0), gap=0.1)


class TestExpandingCertificate:
    """Test the expanding lower profile."""

    @pytest.fixture
    def params(self):
        return ModelParams(m=2.0, chi=1.0)

    def test_found(self, params):
        cert = expanding_certificate(params, eps1=0.05, R0_core=0.5, R_domain=1.0)
        assert cert.role == 'lower'
        assert cert.holds
        assert 0 < cert.profile.beta < 1
        assert cert.profile.sigma < 0
        assert cert.derived['delta'] > 0
        assert cert.derived['eps0'] > 0

    def test_window_and_times(self, params):
        cert = expanding_certificate(params, eps1=0.05, R0_core=0.5, R_domain=1.0, t_hat=2.0)
        derived = cert.derived
        assert cert.window == (2.0, derived['T_hat'])
        assert derived['T_hat'] == pytest.approx(2.0 + derived['L'])
        assert 2.0 < derived['cover_time'] < derived['t0'] < derived['T_hat']
        assert cert.profile.support_radius(derived['cover_time']) == pytest.approx(1.0)

    def test_profile_starts_inside_core(self, params):
        cert = expanding_certificate(params, eps1=0.05, R0_core=0.5, R_domain=1.0, t_hat=2.0)
        assert cert.profile.support_radius(2.0) == pytest.approx(0.5)
        assert cert.profile.peak(2.0) <= 0.05

    def test_delta_request_caps(self, params):
        cert = expanding_certificate(params, eps1=0.05, R0_core=0.5, R_domain=1.0,
                                     delta_request=1e-12)
        assert cert.derived['delta'] == 1e-12

    def test_no_chemotaxis_leaves_delta_unbounded(self):
        cert = expanding_certificate(ModelParams(m=2.0, chi=0.0), eps1=0.05, R0_core=0.5,
                                     R_domain=1.0)
        assert math.isinf(cert.derived['delta'])

    def test_small_core_value_halves_beta(self, params):
        wide = expanding_certificate(params, eps1=0.05, R0_core=0.5, R_domain=1.0)
        narrow = expanding_certificate(params, eps1=0.005, R0_core=0.5, R_domain=1.0)
        assert narrow.profile.beta < wide.profile.beta

    def test_rejects_bad_inputs(self, params):
        with pytest.raises(ValueError, match='eps1'):
            expanding_certificate(params, eps1=0.0, R0_core=0.5, R_domain=1.0)
        with pytest.raises(ValueError, match='R_domain'):
            expanding_certificate(params, eps1=0.1, R0_core=0.5, R_domain=0.4)

    def test_initial_spread_helper(self):
        spec = BumpSpec(K0=2.0, R0=1.5, d0=2.0, delta=0.1)
        assert initial_spread(ModelParams(m=2.0), spec) == pytest.approx(2.0 * 1.5 ** 2)


class TestNumericDomination:
    """Test profile-versus-solution comparison on a Barenblatt run."""

    @pytest.fixture(scope='class')
    def run(self):
        sim = (Simulation(ModelParams(m=2.0, chi=0.0))
               .from_barenblatt()
               .on_grid(half_length=6.0, n_cells=200)
               .until(0.05)
               .sample_every(0.01)
               .run())
        return sim.trace, sim.make_grid(), barenblatt_profile(ModelParams(m=2.0))

    def _cert(self, profile, role, scale, window=(0.0, 0.05)):
        kind = 'finite-speed' if role == 'upper' else 'expanding'
        scaled = replace(profile, epsilon=profile.epsilon * scale)
        return Certificate(kind=kind, role=role, profile=scaled, window=window)

    def test_upper_holds(self, run):
        trace, grid, profile = run
        holds, worst = numeric_domination(trace, self._cert(profile, 'upper', 1.5), grid)
        assert holds
        assert worst < 0.1

    def test_lower_holds(self, run):
        trace, grid, profile = run
        holds, _ = numeric_domination(trace, self._cert(profile, 'lower', 0.5), grid)
        assert holds

    def test_violation_detected(self, run):
        trace, grid, profile = run
        holds, worst = numeric_domination(trace, self._cert(profile, 'upper', 0.1), grid)
        assert not holds
        assert worst > 0.5

    def test_window_outside_trace(self, run):
        trace, grid, profile = run
        with pytest.raises(WindowNotCoveredError):
            numeric_domination(trace, self._cert(profile, 'upper', 1.5, (0.0, 1.0)), grid)

    def test_clip_to_trace(self, run):
        trace, _, profile = run
        clipped = clip_to_trace(self._cert(profile, 'upper', 1.5, (0.0, 1.0)), trace)
        assert clipped.window == (0.0, trace.times[-1])
        with pytest.raises(WindowNotCoveredError):
            clip_to_trace(self._cert(profile, 'upper', 1.5, (0.1, 0.2)), trace)


def _trace(rows, snapshots=None):
    trace = Trace()
    for i, row in enumerate(rows):
        trace.append(row, None if snapshots is None else snapshots[i])
    return trace


class TestDetectors:
    """Test trace detectors feeding the certificates."""

    @pytest.fixture
    def rows(self):
        return [
            {'t': 0.0, 'gradmax_v': 1.0, 'lapmax_v': 1.0, 'min_u': 0.0},
            {'t': 1.0, 'gradmax_v': 0.5, 'lapmax_v': 0.2, 'min_u': 0.0},
            {'t': 2.0, 'gradmax_v': 0.01, 'lapmax_v': 0.05, 'min_u': 1e-3},
            {'t': 3.0, 'gradmax_v': 0.001, 'lapmax_v': 0.001, 'min_u': 2e-3},
        ]

    def test_decay_time(self, rows):
        trace = _trace(rows)
        assert decay_time(trace, 0.06) == 2.0
        assert decay_time(trace, 2.0) == 0.0
        assert decay_time(trace, 1e-4) is None

    def test_measure_constants(self, rows):
        trace = _trace(rows)
        assert measure_constants(trace, (0.0, 1.0)) == (1.0, 1.0)
        assert measure_constants(trace, (1.0, 3.0)) == (0.5, 0.2)
        with pytest.raises(WindowNotCoveredError):
            measure_constants(trace, (5.0, 6.0))

    def test_positivity_time(self, rows):
        assert positivity_time(_trace(rows)) == 2.0
        assert positivity_time(_trace(rows[:2])) is None

    def test_positivity_time_floor(self, rows):
        trace = _trace(rows)
        assert positivity_time(trace, floor=1.5e-3) == 3.0
        assert positivity_time(trace, floor=5e-3) is None
        with pytest.raises(ValueError, match='floor'):
            positivity_time(trace, floor=-1.0)

    def test_positivity_must_last(self, rows):
        rows[0]['min_u'] = 1e-3
        assert positivity_time(_trace(rows)) == 2.0
        assert positivity_time(_trace(rows[2:])) == 2.0

    @pytest.fixture
    def structured(self):
        grid = make_grid(1, False, 1.0, 200)
        spec = BumpSpec(K0=1.0, R0=0.5, mu=1.0, delta=0.1)
        v0 = aggregating_v0(grid, spec)
        u0 = np.zeros(grid.n_cells)
        snaps = [
            State(u=u0, v=v0, t=0.0),
            State(u=u0, v=v0.copy(), t=0.5),
            State(u=u0, v=np.full(grid.n_cells, v0.mean()), t=1.0),
        ]
        trace = _trace([{'t': s.t} for s in snaps], snaps)
        return trace, grid, spec

    def test_structure_time(self, structured):
        trace, grid, spec = structured
        assert structure_time(trace, grid, spec) == 0.5

    def test_structure_defect_of_exact_attractant(self, structured):
        trace, grid, spec = structured
        assert structure_defect(trace, grid, spec, (0.0, 0.5)) < 1e-6
        assert structure_defect(trace, grid, spec, (0.0, 1.0)) == pytest.approx(1.0)
