"""Planar and per-node mean-field systems and their adaptive integrator."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from epigame import (
    GraphError,
    InfluenceGraph,
    MacroState,
    ProbabilityState,
    Trajectory,
    hetero_rhs,
    integrate_hetero,
    integrate_planar,
    planar_rhs,
    planar_rhs_xy,
)
from .conftest import example_params, random_valid_params


class TestPlanarRhs:
    def test_corners_are_fixed_points(self):
        p = example_params(zeta=8.0)
        assert planar_rhs(MacroState(0.0, 0.0), p) == (0.0, 0.0)
        assert planar_rhs(MacroState(1.0, 0.0), p) == (0.0, 0.0)

    def test_full_adoption_edge(self):
        # at x = 1 there is no transmission, so y decays at rate mu
        p = example_params(zeta=8.0)
        dx, dy = planar_rhs(MacroState(1.0, 0.5), p)
        assert dx == 0.0
        assert dy == pytest.approx(-0.5)

    def test_hand_computed_interior_value(self):
        # alpha=3, lambda=0.5, mu=1, c=3, zeta=8 at (x,y) = (0.25, 0.5):
        #   dx = 0.25*0.75*(0.5 + 4 - 4) = 0.09375
        #   dy = 3*0.5*0.75*0.5 - 0.5 = 0.0625
        p = example_params(zeta=8.0)
        dx, dy = planar_rhs(MacroState(0.25, 0.5), p)
        assert dx == pytest.approx(0.09375, abs=1e-15)
        assert dy == pytest.approx(0.0625, abs=1e-15)

    def test_one_directional_halves_transmission(self):
        p = example_params(zeta=8.0)
        _, dy_bi = planar_rhs(MacroState(0.2, 0.3), p, bidirectional=True)
        _, dy_one = planar_rhs(MacroState(0.2, 0.3), p, bidirectional=False)
        # dy = k*y(1-x)(1-y) - mu*y with k halved: the transmission part halves
        transmission_bi = dy_bi + p.mu * 0.3
        transmission_one = dy_one + p.mu * 0.3
        assert transmission_one == pytest.approx(transmission_bi / 2, rel=1e-15)

    def test_array_form_matches_scalar_form(self, rng):
        p = random_valid_params(rng)
        xs = rng.uniform(0, 1, 50)
        ys = rng.uniform(0, 1, 50)
        dxs, dys = planar_rhs_xy(xs, ys, p)
        for i in range(50):
            dx, dy = planar_rhs(MacroState(xs[i], ys[i]), p)
            assert dxs[i] == dx and dys[i] == dy

    @given(st.floats(0, 1), st.floats(0, 1))
    def test_field_points_inward_on_the_boundary(self, x, y):
        p = example_params(zeta=9.5)
        # y = 0 edge: dy = 0; x in {0,1}: dx = 0 -- the square is invariant
        assert planar_rhs(MacroState(x, 0.0), p)[1] == 0.0
        assert planar_rhs(MacroState(0.0, y), p)[0] == 0.0
        assert planar_rhs(MacroState(1.0, y), p)[0] == 0.0
        assert planar_rhs(MacroState(x, 1.0), p)[1] <= 0.0


class TestIntegratePlanar:
    def test_fixed_point_stays_put(self):
        p = example_params(zeta=8.0)
        traj = integrate_planar(MacroState(0.0, 0.0), p, horizon=10.0)
        assert np.all(traj.xs == 0.0) and np.all(traj.ys == 0.0)

    def test_protection_free_endemic_attractor(self):
        # zeta=5: protection dies out, prevalence settles at 1 - mu/(2*alpha*lambda) = 2/3
        p = example_params(zeta=5.0)
        final = integrate_planar(MacroState(0.3, 0.2), p, horizon=200.0).final_state()
        assert final.x == pytest.approx(0.0, abs=1e-6)
        assert final.y == pytest.approx(2.0 / 3.0, abs=1e-6)

    def test_subthreshold_epidemic_dies_out(self):
        p = example_params(zeta=5.0)
        p = type(p)(alpha=p.alpha, lam=0.15, mu=p.mu, c=p.c, zeta=p.zeta)  # 2*a*l = 0.9 < mu
        final = integrate_planar(MacroState(0.3, 0.6), p, horizon=300.0).final_state()
        assert abs(final.x) < 1e-5 and abs(final.y) < 1e-8

    def test_sample_grid_is_respected(self):
        p = example_params(zeta=8.0)
        traj = integrate_planar(MacroState(0.5, 0.1), p, horizon=10.0, sample_dt=0.5)
        assert traj.times[0] == 0.0 and traj.times[-1] == 10.0
        assert np.allclose(np.diff(traj.times), 0.5)

    def test_overshoot_is_tracked_and_bounded(self, rng):
        for _ in range(20):
            p = random_valid_params(rng)
            s0 = MacroState(rng.uniform(0, 1), rng.uniform(0, 1))
            traj = integrate_planar(s0, p, horizon=30.0)
            assert traj.meta["max_overshoot"] <= 10.0 * traj.meta["atol"]
            assert np.all(traj.xs >= 0) and np.all(traj.xs <= 1)
            assert np.all(traj.ys >= 0) and np.all(traj.ys <= 1)

    def test_tightening_tolerances_is_consistent(self):
        # halving both tolerances moves the final state by less than the
        # coarser tolerance (the solve is already resolved at the default)
        p = example_params(zeta=8.0)
        s0 = MacroState(0.35, 0.15)
        coarse = integrate_planar(s0, p, horizon=20.0, rtol=1e-8, atol=1e-10).final_state()
        fine = integrate_planar(s0, p, horizon=20.0, rtol=5e-9, atol=5e-11).final_state()
        assert math.hypot(coarse.x - fine.x, coarse.y - fine.y) < 1e-8

    def test_rejects_bad_arguments(self):
        p = example_params(zeta=8.0)
        with pytest.raises(ValueError):
            integrate_planar(MacroState(0.5, 0.5), p, horizon=0.0)
        with pytest.raises(ValueError):
            integrate_planar(MacroState(0.5, 0.5), p, horizon=1.0, rtol=-1e-8)

    def test_trajectory_validates_time_axis(self):
        p = example_params(zeta=8.0)
        with pytest.raises(ValueError):
            Trajectory(times=[1.0, 2.0], xs=[0.1, 0.2], ys=[0.1, 0.2], params=p)
        with pytest.raises(ValueError):
            Trajectory(times=[0.0, 0.0], xs=[0.1, 0.2], ys=[0.1, 0.2], params=p)

    def test_csv_round_trip(self, tmp_path):
        p = example_params(zeta=8.0)
        traj = integrate_planar(MacroState(0.5, 0.1), p, horizon=5.0, sample_dt=1.0)
        out = tmp_path / "traj.csv"
        traj.to_csv(out)
        data = np.loadtxt(out, delimiter=",", skiprows=1)
        assert data.shape == (6, 3)
        np.testing.assert_allclose(data[:, 1], traj.xs, rtol=0, atol=0)
        np.testing.assert_allclose(data[:, 2], traj.ys, rtol=0, atol=0)


class TestHeteroRhs:
    def test_complete_uniform_matches_planar_up_to_finite_size(self):
        # uniform marginals on the complete graph reproduce the planar field
        # exactly once the finite-size factor n/(n-1) on infection is undone
        p = example_params(zeta=8.0)
        n = 7
        g = InfluenceGraph.complete(n)
        a = np.full(n, p.alpha)
        x, y = 0.31, 0.44
        ps = ProbabilityState(np.full(n, x), np.full(n, y))
        dpx, dpy = hetero_rhs(ps, g, a, p)
        dx, dy = planar_rhs(MacroState(x, y), p)
        np.testing.assert_allclose(dpx, dx, rtol=1e-13, atol=1e-14)
        expected_dy = dy + (2 * p.alpha * p.lam * y * (1 - x) * (1 - y)) / (n - 1)
        np.testing.assert_allclose(dpy, expected_dy, rtol=1e-13, atol=1e-14)

    def test_no_infection_without_prevalence(self):
        p = example_params(zeta=8.0)
        g = InfluenceGraph.complete(5)
        ps = ProbabilityState(np.linspace(0.1, 0.9, 5), np.zeros(5))
        _, dpy = hetero_rhs(ps, g, np.full(5, p.alpha), p)
        np.testing.assert_array_equal(dpy, 0.0)

    def test_star_graph_hand_computation(self):
        # centre node 0 observes {1,2}; leaves observe {0}. With
        # p_x = (1, 0, 0), p_y = 0, c = 3, zeta = 5 the per-node payoffs are
        #   pi1 = (0, 1, 1), pi0 = (4, 3, 3)
        # and imitation averages the observed neighbours' own payoffs:
        #   centre: q01 = mean(0, 0) = 0, q10 = mean(1*3, 1*3) = 3 -> dpx0 = -3
        #   leaves: q01 = 1 * pi1[0] = 0, q10 = (1-1) * pi0[0] = 0 -> dpx = 0
        p = example_params(zeta=5.0)
        g = InfluenceGraph.from_adjacency([[1, 2], [0], [0]])
        ps = ProbabilityState([1.0, 0.0, 0.0], [0.0, 0.0, 0.0])
        dpx, dpy = hetero_rhs(ps, g, np.full(3, p.alpha), p)
        np.testing.assert_allclose(dpx, [-3.0, 0.0, 0.0], atol=1e-14)
        np.testing.assert_array_equal(dpy, 0.0)

    def test_isolated_behavioural_components_see_shared_prevalence(self):
        # two behavioural components, but prevalence couples everyone through
        # the well-mixed contact layer: the all-susceptible component still
        # feels infection pressure from the infected one
        p = example_params(zeta=8.0)
        g = InfluenceGraph.from_adjacency([[1], [0], [3], [2]])
        ps = ProbabilityState([0.0, 0.0, 0.0, 0.0], [0.8, 0.8, 0.0, 0.0])
        a = np.full(4, p.alpha)
        _, dpy = hetero_rhs(ps, g, a, p)
        assert dpy[2] > 0 and dpy[3] > 0

    def test_activity_heterogeneity_shifts_pressure(self):
        p = example_params(zeta=8.0)
        g = InfluenceGraph.complete(4)
        ps = ProbabilityState(np.zeros(4), np.full(4, 0.3))
        a = np.array([6.0, 2.0, 2.0, 2.0])
        _, dpy = hetero_rhs(ps, g, a, p)
        assert dpy[0] > dpy[1]  # the busier node gets infected faster
        np.testing.assert_allclose(dpy[1:], dpy[1], rtol=1e-14)

    def test_dimension_mismatch_raises(self):
        p = example_params(zeta=8.0)
        g = InfluenceGraph.complete(4)
        ps = ProbabilityState(np.zeros(3), np.zeros(3))
        with pytest.raises(GraphError):
            hetero_rhs(ps, g, np.full(4, p.alpha), p)
        ps4 = ProbabilityState(np.zeros(4), np.zeros(4))
        with pytest.raises(ValueError):
            hetero_rhs(ps4, g, np.full(3, p.alpha), p)


class TestIntegrateHetero:
    def test_macro_tracks_planar_on_complete_graph(self):
        p = example_params(zeta=5.0)
        n = 200
        g = InfluenceGraph.complete(n)
        a = np.full(n, p.alpha)
        ps0 = ProbabilityState(np.full(n, 0.3), np.full(n, 0.2))
        _, macro = integrate_hetero(ps0, g, a, p, horizon=60.0)
        planar = integrate_planar(MacroState(0.3, 0.2), p, horizon=60.0, sample_dt=macro.times[1])
        gap = max(
            np.max(np.abs(macro.xs - planar.xs[: macro.xs.size])),
            np.max(np.abs(macro.ys - planar.ys[: macro.ys.size])),
        )
        assert gap < 5.0 / n

    def test_uniform_start_stays_exchangeable(self):
        # identical nodes must keep identical marginals for all time
        p = example_params(zeta=8.0)
        n = 6
        g = InfluenceGraph.complete(n)
        ps0 = ProbabilityState(np.full(n, 0.5), np.full(n, 0.1))
        hetero, _ = integrate_hetero(ps0, g, np.full(n, p.alpha), p, horizon=20.0)
        assert np.max(hetero.p_x.std(axis=1)) < 1e-9
        assert np.max(hetero.p_y.std(axis=1)) < 1e-9

    def test_long_csv_layout(self, tmp_path):
        p = example_params(zeta=8.0)
        g = InfluenceGraph.complete(3)
        ps0 = ProbabilityState([0.2, 0.5, 0.8], [0.1, 0.1, 0.1])
        hetero, _ = integrate_hetero(ps0, g, np.full(3, p.alpha), p, horizon=2.0, sample_dt=1.0)
        out = tmp_path / "nodes.csv"
        hetero.to_csv(out)
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "t,node,p_x,p_y"
        assert len(lines) == 1 + 3 * 3  # 3 sample times x 3 nodes
