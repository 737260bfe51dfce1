"""
Tests for the Simulation builder, the pipe verbs and end-to-end runs.
"""
import numpy as np
import pandas as pd
import pytest

from chemofront import ModelParams, Simulation, SimulationState
from chemofront.analysis import BarenblattParams, barenblatt_eval
from chemofront.core.errors import DomainError, GridMismatchError
from chemofront.harness import ScenarioConfig
from chemofront.verbs import (
    constant_attractant,
    freeze_attractant,
    keep_snapshots,
    on_grid,
    run,
    sample_every,
    save,
    track_front,
    until,
    with_bump,
    with_controls,
    with_model,
)


@pytest.fixture
def base():
    return (Simulation(ModelParams(m=2.0, chi=1.0))
            .with_bump(K0=1.0, R0=0.5, mu=1.0, delta=0.1)
            .on_grid(half_length=1.0, n_cells=100))


class TestSimulationInitialization:
    """Test Simulation construction."""

    def test_default_state(self):
        sim = Simulation()
        assert isinstance(sim.state, SimulationState)
        assert sim.state.params == ModelParams()
        assert sim.state.trace is None

    def test_repr(self, base):
        text = repr(base)
        assert 'chi=1.0' in text
        assert 'not run' in text

    def test_trace_before_run(self, base):
        with pytest.raises(ValueError, match='run'):
            base.trace

    def test_from_config(self):
        config = ScenarioConfig.from_dict({'scenario': 'ordering', 'grid': {'n_cells': 64}})
        sim = Simulation.from_config(config)
        assert sim.state.params.chi == 1.0
        assert sim.state.spec.mu == 1.0
        assert sim.state.n_cells == 64
        assert sim.state.controls.t_end == 0.1
        assert sim.state.sampling.every == 0.01


class TestSetupVerbs:
    """Test that verbs update a copy and leave the original untouched."""

    def test_immutability(self, base):
        changed = base.with_model(chi=5.0)
        assert base.state.params.chi == 1.0
        assert changed.state.params.chi == 5.0

    def test_with_bump_moves_front_center(self, base):
        sim = base.on_grid(half_length=2.0).with_bump(x0=0.3)
        assert sim.state.spec.x0 == 0.3
        assert sim.state.sampling.front_center == 0.3

    def test_from_barenblatt_clears_attractant(self):
        sim = Simulation().from_barenblatt(0.5)
        assert sim.state.initial == 'barenblatt'
        assert sim.state.attractant == 'constant'
        assert sim.state.v_level == 0.0

    def test_until_and_controls(self, base):
        sim = base.until(0.2, cfl_diffusion=0.1).with_controls(dt_max=1e-4)
        assert sim.state.controls.t_end == 0.2
        assert sim.state.controls.cfl_diffusion == 0.1
        assert sim.state.controls.dt_max == 1e-4

    def test_sampling_verbs(self, base):
        sim = base.sample_every(0.01).sample_at([0.005]).keep_snapshots(False)
        assert sim.state.sampling.every == 0.01
        assert sim.state.sampling.times == [0.005]
        assert not sim.state.sampling.keep_snapshots

    def test_track_front(self, base):
        sim = base.track_front(rel_threshold=0.01)
        assert sim.state.sampling.rel_threshold == 0.01
        assert sim.state.sampling.front_center == 0.0
        with pytest.raises(ValueError, match='rel_threshold'):
            base.track_front(rel_threshold=1.5)


class TestInitialState:
    """Test initial data assembly."""

    def test_bump_and_aggregating_attractant(self, base):
        state = base.initial_state()
        grid = base.make_grid()
        inside = np.abs(grid.centers) < 0.5
        assert np.all(state.u[inside] > 0)
        assert np.all(state.u[~inside] == 0)
        assert np.argmax(state.v) in (49, 50)

    def test_constant_attractant(self, base):
        state = base.constant_attractant(2.0).initial_state()
        assert np.all(state.v == 2.0)

    def test_explicit_fields(self, base):
        u0 = np.linspace(0.0, 1.0, 100)
        state = base.with_fields(u0=u0).initial_state()
        assert np.array_equal(state.u, u0)

    def test_explicit_field_wrong_length(self, base):
        with pytest.raises(GridMismatchError):
            base.with_fields(v0=np.ones(7)).initial_state()

    def test_bump_outside_domain(self, base):
        with pytest.raises(DomainError):
            base.with_bump(R0=0.5, x0=0.8).initial_state()


class TestExecution:
    """Test running and saving."""

    @pytest.fixture
    def done(self, base):
        return base.until(0.004).sample_every(0.002).run()

    def test_run_returns_new_simulation(self, base, done):
        assert base.state.trace is None
        assert len(done.trace) == 3
        assert '3 samples' in repr(done)

    def test_frame(self, done):
        frame = done.frame()
        assert isinstance(frame, pd.DataFrame)
        assert frame['t'].iloc[-1] == pytest.approx(0.004)
        assert np.all(np.isfinite(frame['front_rho']))

    def test_save(self, done, tmp_path):
        result = done.save(tmp_path)
        assert result is done
        assert (tmp_path / 'trace.csv').exists()
        assert any((tmp_path / 'snapshots').iterdir())

    def test_frozen_attractant(self, base):
        sim = base.freeze_attractant().until(0.002).run()
        first, last = sim.trace.snapshots[0], sim.trace.snapshots[-1]
        assert np.array_equal(first.v, last.v)


class TestPipeOperator:
    """Test the >> operator with verbs."""

    def test_full_pipeline(self):
        sim = (ModelParams(m=2.0, chi=1.0)
               >> Simulation()
               >> with_bump(K0=1.0, R0=0.5, mu=1.0, delta=0.1)
               >> on_grid(n_cells=100)
               >> until(0.002)
               >> with_controls(cfl_diffusion=0.1)
               >> sample_every(0.001)
               >> track_front(rel_threshold=0.01)
               >> run())
        assert isinstance(sim, Simulation)
        assert sim.state.controls.cfl_diffusion == 0.1
        assert len(sim.trace) == 3

    def test_call_is_pipe_entry(self):
        sim = Simulation()(ModelParams(chi=2.0))
        assert sim.state.params.chi == 2.0

    def test_setup_verbs(self, base):
        sim = base >> with_model(m=3.0) >> constant_attractant(0.5) >> freeze_attractant()
        assert sim.state.params.m == 3.0
        assert sim.state.v_level == 0.5
        assert sim.state.frozen_v

    def test_save_verb(self, base, tmp_path):
        sim = base >> until(0.001) >> keep_snapshots(False) >> run() >> save(tmp_path, False)
        assert (tmp_path / 'trace.csv').exists()
        assert not (tmp_path / 'snapshots').exists()
        assert sim.trace.final is not None


class TestPhysics:
    """End-to-end behavior of short runs."""

    def test_barenblatt_matches_exact_solution(self):
        sim = (Simulation(ModelParams(m=2.0, chi=0.0))
               .from_barenblatt()
               .on_grid(half_length=6.0, n_cells=400)
               .until(0.2)
               .run())
        grid = sim.make_grid()
        exact = barenblatt_eval(grid.centers, 0.2, BarenblattParams(m=2.0, N=1))
        assert np.max(np.abs(sim.trace.final.u - exact)) <= 0.05

    def test_strong_aggregation_pulls_front_in(self, base):
        sim = (base.with_model(chi=6.0)
               .on_grid(n_cells=200)
               .track_front(rel_threshold=0.05)
               .until(0.05)
               .sample_every(0.01)
               .run())
        rho = sim.frame()['front_rho'].to_numpy()
        assert rho[-1] < rho[0]

    def test_weak_aggregation_lets_front_spread(self, base):
        sim = (base.on_grid(n_cells=200)
               .track_front(rel_threshold=0.05)
               .until(0.02)
               .sample_every(0.005)
               .run())
        rho = sim.frame()['front_rho'].to_numpy()
        assert rho[-1] > rho[0]
