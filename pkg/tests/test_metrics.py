import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from dsrsim.dynamics import SimConfig, SourceKind, SourceProfile, Trajectory, UpdateLaw, simulate
from dsrsim.graph import build_pinned_system, grid_graph
from dsrsim.metrics import (
    FormationState,
    compute_metrics,
    deviation,
    integrate_positions,
    normalized_deviation,
    settling_time,
)

STEP = SourceProfile(kind=SourceKind.STEP, zd=1.0)


def make_traj(states, dt=1.0, zd=1.0, diverged=False):
    states = np.asarray(states, dtype=float)
    cfg = SimConfig(gamma=0.1, dt=dt, horizon=max(states.shape[0] - 1, 1))
    return Trajectory(
        states=states,
        source=np.full(states.shape[0], zd),
        config=cfg,
        profile=SourceProfile(kind=SourceKind.STEP, zd=zd),
        diverged=diverged,
        diverged_at=states.shape[0] - 1 if diverged else None,
    )


class TestSettlingTime:
    def test_already_constant(self):
        traj = make_traj(np.full((10, 3), 5.0))
        assert settling_time(traj, 5.0) == (0, 0.0, True)

    def test_geometric_decay_closed_form(self):
        # z[k] = 1 - 0.5^k: 0.5^6 = 0.015625 <= 0.02 < 0.5^5
        ks = np.arange(30)
        traj = make_traj((1 - 0.5**ks)[:, None], dt=0.1)
        k_ts, t_s, settled = settling_time(traj, 1.0, band=0.02)
        assert (k_ts, settled) == (6, True)
        assert_allclose(t_s, 0.6)

    def test_unsettled(self):
        ks = np.arange(5)
        traj = make_traj((1 - 0.5**ks)[:, None])
        assert settling_time(traj, 1.0, band=0.001) == (None, None, False)

    def test_must_stay_within_band(self):
        z = np.ones((20, 1))
        z[10] = 2.0  # late excursion restarts the clock
        traj = make_traj(z)
        k_ts, _, settled = settling_time(traj, 1.0)
        assert (k_ts, settled) == (11, True)

    def test_band_monotonicity(self):
        rng = np.random.default_rng(0)
        sys = build_pinned_system(grid_graph(3, 3))
        cfg = SimConfig(gamma=0.2, dt=1.0, horizon=400)
        traj = simulate(sys, cfg, STEP)
        bands = [0.01, 0.02, 0.05, 0.1]
        ks = [settling_time(traj, 1.0, band=b)[0] for b in bands]
        assert all(k is not None for k in ks)
        assert ks == sorted(ks, reverse=True)

    def test_zero_zd_rejected(self):
        traj = make_traj(np.zeros((4, 2)))
        with pytest.raises(ValueError, match="nonzero"):
            settling_time(traj, 0.0)


class TestDeviation:
    def test_identical_agents_zero(self):
        traj = make_traj(np.tile(np.linspace(0, 1, 9)[:, None], (1, 4)))
        assert deviation(traj, 1.0, 8) == 0.0

    def test_hand_case(self):
        # two agents at (0, 0.02): mean 0.01, 1-norm spread 0.02, dt=1, zd=0.02
        traj = make_traj(np.array([[0.0, 0.0], [0.0, 0.02]]), zd=0.02)
        assert_allclose(deviation(traj, 0.02, 1), 1.0, rtol=1e-15)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(1)
        states = rng.normal(size=(40, 6)) + 2.0
        traj = make_traj(states)
        perm = rng.permutation(6)
        traj_p = make_traj(states[:, perm])
        assert_allclose(deviation(traj, 2.0, 39), deviation(traj_p, 2.0, 39), rtol=1e-14)

    def test_linear_in_dt(self):
        rng = np.random.default_rng(2)
        states = rng.normal(size=(25, 4)) + 1.0
        d1 = deviation(make_traj(states, dt=1.0), 1.0, 20)
        d3 = deviation(make_traj(states, dt=3.0), 1.0, 20)
        assert_allclose(d3, 3.0 * d1, rtol=1e-14)

    def test_k_ts_beyond_horizon(self):
        traj = make_traj(np.zeros((5, 2)))
        with pytest.raises(ValueError, match="horizon"):
            deviation(traj, 1.0, 10)


class TestNormalizedDeviation:
    def test_values(self):
        assert_allclose(normalized_deviation(0.0103, 1.0), 0.0103)
        assert_allclose(normalized_deviation(0.0006, 0.4756), 0.0012616, rtol=1e-4)
        assert normalized_deviation(0.0, 2.0) == 0.0

    def test_unsettled_rejected(self):
        with pytest.raises(ValueError):
            normalized_deviation(0.5, None)
        with pytest.raises(ValueError):
            normalized_deviation(0.5, 0.0)


class TestIntegratePositions:
    def test_zero_velocity_holds_positions(self):
        traj = make_traj(np.zeros((12, 3)))
        x0 = np.array([1.0, 2.0, 3.0])
        x = integrate_positions(traj, x0)
        assert_array_equal(x, np.tile(x0, (12, 1)))

    def test_constant_velocity_telescopes(self):
        v = np.array([0.5, -1.0])
        traj = make_traj(np.tile(v, (8, 1)), dt=0.25)
        x = integrate_positions(traj, np.zeros(2))
        for k in range(8):
            assert_allclose(x[k], k * 0.25 * v, rtol=1e-15)

    def test_linearity(self):
        rng = np.random.default_rng(3)
        za, zb = rng.normal(size=(15, 4)), rng.normal(size=(15, 4))
        x0 = rng.normal(size=4)
        xa = integrate_positions(make_traj(za, dt=0.1), x0)
        xb = integrate_positions(make_traj(zb, dt=0.1), x0)
        xc = integrate_positions(make_traj(2.0 * za + 0.5 * zb, dt=0.1), x0)
        assert np.abs(xc - (2.0 * xa + 0.5 * xb - 1.5 * x0)).max() <= 1e-12

    def test_shape_validation(self):
        traj = make_traj(np.zeros((5, 3)))
        with pytest.raises(ValueError):
            integrate_positions(traj, np.zeros(2))


class TestFormationState:
    def test_holds_grid_positions(self):
        from dsrsim.graph import grid_positions

        x, y = grid_positions(2, 3)
        state = FormationState(x=x, y=y)
        assert state.initial_spacing == 1.0
        assert_array_equal(state.y, y)
        with pytest.raises(ValueError):
            state.x[0] = 7.0  # positions are read-only

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError, match="shape"):
            FormationState(x=np.zeros(3), y=np.zeros(4))


class TestComputeMetrics:
    def test_settled_run_consistency(self):
        sys = build_pinned_system(grid_graph(3, 3))
        cfg = SimConfig(gamma=0.2, dt=0.01, horizon=500)
        traj = simulate(sys, cfg, STEP)
        rec = compute_metrics(traj, 1.0)
        assert rec.settled and not rec.diverged
        assert rec.k_ts > 0
        assert_allclose(rec.t_s, rec.k_ts * 0.01)
        assert_allclose(rec.delta_star, rec.delta / rec.t_s, rtol=1e-14)

    def test_unsettled_run_reports_partial_delta(self):
        ks = np.arange(6)
        traj = make_traj((1 - 0.5**ks)[:, None] @ np.ones((1, 2)), zd=1.0)
        rec = compute_metrics(traj, 1.0, band=0.001)
        assert not rec.settled
        assert rec.k_ts is None and rec.t_s is None and rec.delta_star is None
        assert rec.delta == deviation(traj, 1.0, 5)

    def test_diverged_run(self):
        traj = make_traj(np.ones((4, 2)), diverged=True)
        rec = compute_metrics(traj, 1.0)
        assert rec.diverged and not rec.settled
        assert np.isnan(rec.delta)

    def test_constant_at_target(self):
        traj = make_traj(np.full((7, 2), 3.0), zd=3.0)
        rec = compute_metrics(traj, 3.0)
        assert rec.settled and rec.k_ts == 0
        assert rec.delta == 0.0 and rec.delta_star == 0.0
