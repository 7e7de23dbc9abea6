"""State containers for the interacting particle system.

Array layouts (all float64, 0-based indices):

    trajectories : (m+1, n, N, 3)    position of copy sigma of particle k at t_r
    gauges       : (m+1, n, N, 3, 3) gauge matrix G(t_r, 0) of that copy
    noise        : (m, n or 1, N, 3) Brownian increment over [t_r, t_{r+1}]

Containers are built single-threaded and read concurrently afterwards.
Noise is drawn from a counter-based generator (Philox) in one fixed-order
pass, so a (seed, shape) pair always yields the same store regardless of
thread count or evaluation order. Under the shared scheme the increment
array has a singleton particle axis: every particle of a copy sigma rides
the same Brownian path. With a single particle the two schemes consume the
generator identically and coincide bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SCHEME_SHARED = "shared"
SCHEME_INDEPENDENT = "independent"
SCHEMES = (SCHEME_SHARED, SCHEME_INDEPENDENT)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid 0 = t_0 < ... < t_m = T."""

    T: float
    m: int

    def __post_init__(self):
        if not (np.isfinite(self.T) and self.T > 0.0):
            raise ValueError(f"final time must be positive, got {self.T}")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"step count must be an integer >= 1, got {self.m}")

    @property
    def dt(self) -> float:
        return self.T / self.m

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.m + 1)


@dataclass(frozen=True)
class ParticleSet:
    """Initial positions with pre-scaled vorticity weights.

    ``weights`` already carry the quadrature volume (h^3 for lattice
    discretizations, or whatever scaling a raw construction implies), so
    downstream sums never rescale. ``h`` is the generating spacing and
    feeds the default mollification length delta = h/2.
    """

    positions: np.ndarray
    weights: np.ndarray
    h: float

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape[0] < 1:
            raise ValueError(f"positions must have shape (n, 3), n >= 1, got {pos.shape}")
        if w.shape != pos.shape:
            raise ValueError("weights must match positions in shape")
        if not (np.all(np.isfinite(pos)) and np.all(np.isfinite(w))):
            raise ValueError("non-finite particle data")
        if not (np.isfinite(self.h) and self.h > 0.0):
            raise ValueError(f"spacing h must be positive, got {self.h}")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    @classmethod
    def from_raw(cls, positions, weights, h: float) -> "ParticleSet":
        """Build from already-scaled weights, bypassing h^3 scaling."""
        return cls(positions, weights, h)


def build_particles(index_ranges, h: float, omega0,
                    drop_zero_weights: bool = False) -> ParticleSet:
    """Discretize an initial vorticity field on the lattice h * (i, j, k).

    ``index_ranges`` gives one inclusive (lo, hi) integer range per axis;
    ``omega0`` maps positions (n, 3) -> vorticities (n, 3) (a per-point
    function is accepted too). Weights are h^3 * omega0(x_k).
    """
    if len(index_ranges) != 3:
        raise ValueError("index_ranges must give one (lo, hi) range per axis")
    axes = []
    for lo, hi in index_ranges:
        if hi < lo:
            raise ValueError(f"empty lattice range ({lo}, {hi})")
        axes.append(np.arange(lo, hi + 1))
    if not (np.isfinite(h) and h > 0.0):
        raise ValueError(f"spacing h must be positive, got {h}")
    grids = np.meshgrid(*axes, indexing="ij")
    positions = h * np.stack(grids, axis=-1).reshape(-1, 3).astype(float)
    try:
        w = np.asarray(omega0(positions), dtype=float)
        if w.shape != positions.shape:
            raise ValueError
    except (ValueError, TypeError, IndexError):
        w = np.array([omega0(p) for p in positions], dtype=float)
    if w.shape != positions.shape or not np.all(np.isfinite(w)):
        raise ValueError("omega0 must produce finite 3-vectors per point")
    weights = (h ** 3) * w
    if drop_zero_weights:
        keep = np.any(weights != 0.0, axis=1)
        if not np.any(keep):
            raise ValueError("all particle weights are zero; nothing to retain")
        positions, weights = positions[keep], weights[keep]
    return ParticleSet(positions, weights, h)


@dataclass(frozen=True)
class NoiseStore:
    """Pre-sampled Brownian increments for one run.

    ``increments`` has shape (m, 1, N, 3) under the shared scheme and
    (m, n, N, 3) under the independent scheme; ``at`` broadcasts to the
    full particle axis either way.
    """

    increments: np.ndarray
    scheme: str
    n: int

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown noise scheme {self.scheme!r}")
        shape = self.increments.shape
        width = 1 if self.scheme == SCHEME_SHARED else self.n
        if len(shape) != 4 or shape[1] != width or shape[3] != 3:
            raise ValueError(
                f"increments shape {shape} inconsistent with "
                f"{self.scheme} scheme at n={self.n}")

    @property
    def m(self) -> int:
        return self.increments.shape[0]

    @property
    def N(self) -> int:
        return self.increments.shape[2]

    def at(self, r: int) -> np.ndarray:
        """Increments over [t_r, t_{r+1}] as a (n, N, 3) view."""
        z = self.increments[r]
        if z.shape[0] == self.n:
            return z
        return np.broadcast_to(z, (self.n,) + z.shape[1:])


def sample_noise(grid: TimeGrid, n: int, N: int, scheme: str,
                 seed: int) -> NoiseStore:
    """Draw every Brownian increment of a run in one deterministic pass."""
    if scheme not in SCHEMES:
        raise ValueError(f"unknown noise scheme {scheme!r}; expected one of {SCHEMES}")
    if n < 1 or N < 1:
        raise ValueError("particle and copy counts must be >= 1")
    key = int(seed) & 0xFFFFFFFFFFFFFFFF
    gen = np.random.Generator(np.random.Philox(key=key))
    n_axis = 1 if scheme == SCHEME_SHARED else n
    increments = gen.standard_normal((grid.m, n_axis, N, 3)) * np.sqrt(grid.dt)
    return NoiseStore(increments=increments, scheme=scheme, n=n)


def identity_gauges(m: int, n: int, N: int) -> np.ndarray:
    """Gauge array (m+1, n, N, 3, 3) holding the identity everywhere."""
    g = np.zeros((m + 1, n, N, 3, 3))
    g[..., 0, 0] = g[..., 1, 1] = g[..., 2, 2] = 1.0
    return g


def initial_trajectories(grid: TimeGrid, particles: ParticleSet, N: int) -> np.ndarray:
    """Trajectory array with t_0 filled and later rows zeroed."""
    x = np.zeros((grid.m + 1, particles.n, N, 3))
    x[0] = particles.positions[:, None, :]
    return x


def save_checkpoint(path, trajectories: np.ndarray, gauges: np.ndarray) -> None:
    """Binary snapshot of both ensembles (numpy .npz)."""
    _check_state(trajectories, gauges)
    np.savez_compressed(path, trajectories=trajectories, gauges=gauges)


def load_checkpoint(path):
    with np.load(path) as data:
        return data["trajectories"].copy(), data["gauges"].copy()


def _check_state(trajectories, gauges):
    if trajectories.ndim != 4 or trajectories.shape[3] != 3:
        raise ValueError(f"bad trajectory shape {trajectories.shape}")
    if gauges.shape != trajectories.shape[:3] + (3, 3):
        raise ValueError(f"gauge shape {gauges.shape} does not match trajectories")


def _fmt(v: float) -> str:
    return repr(float(v))


def trajectories_to_csv(path, trajectories: np.ndarray) -> None:
    """CSV snapshot, one row per (r, k, sigma): r,k,sigma,x,y,z."""
    x = np.asarray(trajectories, dtype=float)
    if x.ndim != 4 or x.shape[3] != 3:
        raise ValueError(f"bad trajectory shape {x.shape}")
    with open(path, "w", encoding="utf-8") as f:
        f.write("r,k,sigma,x,y,z\n")
        for r in range(x.shape[0]):
            for k in range(x.shape[1]):
                for s in range(x.shape[2]):
                    p = x[r, k, s]
                    f.write(f"{r},{k},{s},{_fmt(p[0])},{_fmt(p[1])},{_fmt(p[2])}\n")


def gauges_to_csv(path, gauges: np.ndarray) -> None:
    """CSV snapshot, one row per (r, k, sigma): r,k,sigma,g11..g33
    (row-major matrix entries)."""
    g = np.asarray(gauges, dtype=float)
    if g.ndim != 5 or g.shape[3:] != (3, 3):
        raise ValueError(f"bad gauge shape {g.shape}")
    names = ",".join(f"g{i}{j}" for i in range(1, 4) for j in range(1, 4))
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"r,k,sigma,{names}\n")
        for r in range(g.shape[0]):
            for k in range(g.shape[1]):
                for s in range(g.shape[2]):
                    vals = ",".join(_fmt(v) for v in g[r, k, s].reshape(9))
                    f.write(f"{r},{k},{s},{vals}\n")
