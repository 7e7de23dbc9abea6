"""Particle containers, time grid, noise sampling, serialization."""

import numpy as np
import pytest

from vortexmc import ParticleSet, TimeGrid, build_particles, sample_noise
from vortexmc.ensemble import (NoiseStore, gauges_to_csv, identity_gauges,
                               initial_trajectories, load_checkpoint,
                               save_checkpoint, trajectories_to_csv)


class TestTimeGrid:
    def test_dt_and_times(self):
        grid = TimeGrid(T=0.1, m=5)
        assert grid.dt == pytest.approx(0.02)
        np.testing.assert_allclose(grid.times,
                                   [0.0, 0.02, 0.04, 0.06, 0.08, 0.1])

    def test_validation(self):
        with pytest.raises(ValueError):
            TimeGrid(T=0.0, m=5)
        with pytest.raises(ValueError):
            TimeGrid(T=1.0, m=0)


class TestParticleSet:
    def test_from_raw_keeps_weights(self):
        pos = np.zeros((3, 3))
        w = np.full((3, 3), 0.5)
        p = ParticleSet.from_raw(pos, w, h=0.5)
        assert p.n == 3
        np.testing.assert_array_equal(p.weights, w)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            ParticleSet(np.zeros((3, 3)), np.zeros((4, 3)), h=1.0)

    def test_build_scales_by_cell_volume(self):
        # weights are omega(x) h^3 on the index lattice x = h (i, j, k)
        h = 0.5

        def omega(pts):
            return np.tile([1.0, 2.0, 3.0], (len(pts), 1))

        p = build_particles(((0, 1), (0, 1), (0, 1)), h, omega)
        assert p.n == 8
        np.testing.assert_allclose(p.weights,
                                   np.tile([0.125, 0.25, 0.375], (8, 1)))
        corner = p.positions[np.lexsort(p.positions.T)][-1]
        np.testing.assert_allclose(corner, [0.5, 0.5, 0.5])

    def test_build_scalar_callable_fallback(self):
        def omega(pt):
            x = np.asarray(pt, dtype=float)
            if x.ndim != 1:
                raise TypeError("one point at a time")
            return x

        p = build_particles(((0, 2), (0, 0), (0, 0)), 1.0, omega)
        assert p.n == 3
        np.testing.assert_allclose(sorted(p.weights[:, 0]), [0.0, 1.0, 2.0])

    def test_drop_zero_weights(self):
        def omega(pts):
            w = np.zeros((len(pts), 3))
            w[:, 2] = pts[:, 0]  # vanishes on the x=0 plane
            return w

        full = build_particles(((0, 1),) * 3, 1.0, omega)
        kept = build_particles(((0, 1),) * 3, 1.0, omega,
                               drop_zero_weights=True)
        assert full.n == 8
        assert kept.n == 4
        assert np.all(np.any(kept.weights != 0.0, axis=1))

    def test_drop_all_zero_raises(self):
        with pytest.raises(ValueError):
            build_particles(((0, 1),) * 3, 1.0,
                            lambda pts: np.zeros((len(pts), 3)),
                            drop_zero_weights=True)


class TestNoise:
    def test_shared_shape_broadcasts_over_particles(self):
        grid = TimeGrid(T=0.1, m=5)
        noise = sample_noise(grid, n=7, N=3, scheme="shared", seed=1)
        assert noise.increments.shape == (5, 1, 3, 3)
        step = noise.at(0)
        assert step.shape == (7, 3, 3)
        assert step.base is not None  # broadcast view, no copy
        np.testing.assert_array_equal(step[0], step[6])

    def test_independent_shape(self):
        grid = TimeGrid(T=0.1, m=5)
        noise = sample_noise(grid, n=7, N=3, scheme="independent", seed=1)
        assert noise.increments.shape == (5, 7, 3, 3)

    def test_same_seed_reproduces(self):
        grid = TimeGrid(T=0.1, m=4)
        a = sample_noise(grid, 5, 2, "independent", seed=42)
        b = sample_noise(grid, 5, 2, "independent", seed=42)
        assert a.increments.tobytes() == b.increments.tobytes()

    def test_schemes_coincide_for_single_particle(self):
        # with n = 1 the shared and independent draws are the same numbers
        grid = TimeGrid(T=0.1, m=5)
        a = sample_noise(grid, 1, 4, "shared", seed=9)
        b = sample_noise(grid, 1, 4, "independent", seed=9)
        assert a.increments.tobytes() == b.increments.tobytes()

    def test_variance_matches_dt(self):
        grid = TimeGrid(T=0.02, m=1)
        noise = sample_noise(grid, 1, 333334, "independent", seed=3)
        var = float(np.var(noise.increments))
        assert 0.0197 <= var <= 0.0203

    def test_unknown_scheme(self):
        with pytest.raises(ValueError):
            sample_noise(TimeGrid(T=0.1, m=2), 1, 1, "mixed", seed=0)

    def test_store_validates_scheme_shape(self):
        with pytest.raises(ValueError):
            NoiseStore(np.zeros((3, 4, 2, 3)), "shared", n=4)


class TestStorage:
    def make_state(self):
        grid = TimeGrid(T=0.04, m=2)
        pos = np.arange(9, dtype=float).reshape(3, 3)
        p = ParticleSet.from_raw(pos, np.ones((3, 3)), h=1.0)
        traj = initial_trajectories(grid, p, N=2)
        traj += np.random.Generator(np.random.Philox(key=5)).standard_normal(traj.shape)
        gauges = identity_gauges(grid.m, 3, 2)
        gauges[1, 0, 0] += 0.25
        return traj, gauges

    def test_checkpoint_roundtrip(self, tmp_path):
        traj, gauges = self.make_state()
        path = tmp_path / "state.npz"
        save_checkpoint(path, traj, gauges)
        traj2, gauges2 = load_checkpoint(path)
        assert traj.tobytes() == traj2.tobytes()
        assert gauges.tobytes() == gauges2.tobytes()

    def test_checkpoint_bytes_reproducible(self, tmp_path):
        traj, gauges = self.make_state()
        a, b = tmp_path / "a.npz", tmp_path / "b.npz"
        save_checkpoint(a, traj, gauges)
        save_checkpoint(b, traj, gauges)
        assert a.read_bytes() == b.read_bytes()

    def test_trajectories_csv(self, tmp_path):
        traj, gauges = self.make_state()
        path = tmp_path / "traj.csv"
        trajectories_to_csv(path, traj)
        lines = path.read_text().splitlines()
        assert lines[0] == "r,k,sigma,x,y,z"
        assert len(lines) == 1 + traj.shape[0] * 3 * 2
        r, k, sigma, x, y, z = lines[1].split(",")
        assert (int(r), int(k), int(sigma)) == (0, 0, 0)
        np.testing.assert_allclose(
            [float(x), float(y), float(z)], traj[0, 0, 0])

    def test_gauges_csv(self, tmp_path):
        traj, gauges = self.make_state()
        path = tmp_path / "g.csv"
        gauges_to_csv(path, gauges)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("r,k,sigma,g11")
        row = np.array([float(v) for v in lines[1].split(",")[3:]])
        np.testing.assert_array_equal(row.reshape(3, 3), gauges[0, 0, 0])
