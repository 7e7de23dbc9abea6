"""Reference flows, field reconstruction and streamline tracing.

The closed-form fields are vectorized over leading axes: they accept a
single point (3,) or a batch (..., 3) and return matching shapes. The
initial-condition helpers return both the velocity and its analytic curl,
which is what the lattice discretizations consume as vorticity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensemble import ParticleSet, TimeGrid, build_particles
from .solver import SolverConfig, Solution, velocity_at_points, strain_at_points


def lamb_oseen_exact(x, t: float, nu: float = 0.5) -> np.ndarray:
    """Decaying rectilinear vortex of unit circulation along the z-axis.

    u(x, y, z, t) = (1 / 2 pi) (-y, x, 0) / (x^2 + y^2)
                    * (1 - exp(-(x^2 + y^2) / (4 nu t)))

    Defined for t > 0; on the axis (x, y) -> (0, 0) the limit (0, 0, 0)
    is returned.
    """
    if not (np.isfinite(t) and t > 0.0):
        raise ValueError(f"lamb_oseen_exact needs t > 0, got {t}")
    if not (np.isfinite(nu) and nu > 0.0):
        raise ValueError(f"viscosity must be positive, got {nu}")
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 3:
        raise ValueError("points must have a trailing axis of size 3")
    rho2 = x[..., 0] ** 2 + x[..., 1] ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = -np.expm1(-rho2 / (4.0 * nu * t)) / (2.0 * np.pi * rho2)
    factor = np.where(rho2 == 0.0, 0.0, factor)
    return np.stack([-x[..., 1] * factor, x[..., 0] * factor,
                     np.zeros_like(factor)], axis=-1)


def taylor_green_initial(points):
    """Taylor-Green velocity and its curl.

    u = (cos x sin y sin z, -sin x cos y sin z, 0)
    w = (sin x cos y cos z, cos x sin y cos z, -2 cos x cos y sin z)
    """
    p = np.asarray(points, dtype=float)
    x, y, z = p[..., 0], p[..., 1], p[..., 2]
    sx, cx = np.sin(x), np.cos(x)
    sy, cy = np.sin(y), np.cos(y)
    sz, cz = np.sin(z), np.cos(z)
    u = np.stack([cx * sy * sz, -sx * cy * sz, np.zeros_like(x)], axis=-1)
    w = np.stack([sx * cy * cz, cx * sy * cz, -2.0 * cx * cy * sz], axis=-1)
    return u, w


def isotropic_initial(points):
    """A fully three-dimensional trigonometric test field and its curl.

    u = (cos x sin y (sin z + sin 2z),
         sin x cos y (sin 2z - sin z),
         -sin x sin y cos 2z)
    """
    p = np.asarray(points, dtype=float)
    x, y, z = p[..., 0], p[..., 1], p[..., 2]
    sx, cx = np.sin(x), np.cos(x)
    sy, cy = np.sin(y), np.cos(y)
    sz, cz = np.sin(z), np.cos(z)
    s2z, c2z = np.sin(2.0 * z), np.cos(2.0 * z)
    u = np.stack([cx * sy * (sz + s2z),
                  sx * cy * (s2z - sz),
                  -sx * sy * c2z], axis=-1)
    w = np.stack([sx * cy * (cz - 3.0 * c2z),
                  cx * sy * (cz + 3.0 * c2z),
                  -2.0 * cx * cy * sz], axis=-1)
    return u, w


def lamb_oseen_particles() -> ParticleSet:
    """Filament discretization of the unit line vortex: 41 particles at
    (0, 0, k/2) for k = -20..20, each with raw weight (0, 0, 1/2)."""
    ks = np.arange(-20, 21)
    positions = np.stack([np.zeros_like(ks, dtype=float),
                          np.zeros_like(ks, dtype=float),
                          ks / 2.0], axis=-1)
    weights = np.tile([0.0, 0.0, 0.5], (ks.size, 1))
    return ParticleSet.from_raw(positions, weights, h=0.5)


def taylor_green_particles(h: float = np.pi / 16,
                           index_ranges=((-16, 48), (-16, 48), (-16, 48)),
                           drop_zero_weights: bool = False) -> ParticleSet:
    """Lattice discretization of the Taylor-Green vorticity."""
    return build_particles(index_ranges, h,
                           lambda p: taylor_green_initial(p)[1],
                           drop_zero_weights=drop_zero_weights)


def isotropic_particles(h: float = np.pi / 16,
                        index_ranges=((-16, 48), (-16, 48), (-16, 48)),
                        drop_zero_weights: bool = False) -> ParticleSet:
    """Lattice discretization of the three-dimensional test vorticity."""
    return build_particles(index_ranges, h,
                           lambda p: isotropic_initial(p)[1],
                           drop_zero_weights=drop_zero_weights)


def reconstruct_velocity(x, r: int, sol: Solution, particles: ParticleSet,
                         cfg: SolverConfig) -> np.ndarray:
    """Velocity at point x and time index r from a solved ensemble
    (full interaction sum, no exclusion)."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = x[None, :] if single else x
    u = velocity_at_points(pts, r, sol.trajectories, sol.gauges, particles, cfg)
    return u[0] if single else u


def reconstruct_strain(x, r: int, sol: Solution, particles: ParticleSet,
                       cfg: SolverConfig) -> np.ndarray:
    """Symmetric velocity-gradient matrix at point x and time index r."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = x[None, :] if single else x
    s = strain_at_points(pts, r, sol.trajectories, sol.gauges, particles, cfg)
    return s[0] if single else s


def divergence_probe(field_fn, points, step: float = 1e-3) -> np.ndarray:
    """Central-difference divergence of a velocity function at each point."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    div = np.zeros(pts.shape[0])
    for axis in range(3):
        e = np.zeros(3)
        e[axis] = step
        hi = field_fn(pts + e)
        lo = field_fn(pts - e)
        div += (hi[:, axis] - lo[:, axis]) / (2.0 * step)
    return div


@dataclass(frozen=True)
class Streamline:
    """Integral curve of a frozen-time velocity field."""

    points: np.ndarray
    time: float


def trace_streamlines_field(field_fn, seeds, step: float, count: int,
                            bounds) -> list:
    """Trace fixed-step fourth-order Runge-Kutta streamlines.

    ``bounds`` is an axis-aligned box ((xmin, ymin, zmin), (xmax, ymax,
    zmax)); integration of a curve stops when it leaves the box. Seeds
    starting outside yield single-point streamlines. ``field_fn`` maps
    (M, 3) points to (M, 3) velocities.
    """
    seeds = np.atleast_2d(np.asarray(seeds, dtype=float))
    lo = np.asarray(bounds[0], dtype=float)
    hi = np.asarray(bounds[1], dtype=float)
    if step <= 0.0 or count < 0:
        raise ValueError("step must be positive and count >= 0")

    def inside(p):
        return np.all(p >= lo, axis=-1) & np.all(p <= hi, axis=-1)

    paths = [[s.copy()] for s in seeds]
    active = inside(seeds)
    pos = seeds.copy()
    for _ in range(count):
        if not np.any(active):
            break
        idx = np.flatnonzero(active)
        p = pos[idx]
        k1 = field_fn(p)
        k2 = field_fn(p + 0.5 * step * k1)
        k3 = field_fn(p + 0.5 * step * k2)
        k4 = field_fn(p + step * k3)
        p_next = p + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        still = inside(p_next)
        for j, i in enumerate(idx):
            if still[j]:
                paths[i].append(p_next[j].copy())
            else:
                active[i] = False
        pos[idx[still]] = p_next[still]
    return [np.array(path) for path in paths]


def trace_streamlines(sol: Solution, particles: ParticleSet, grid: TimeGrid,
                      cfg: SolverConfig, seeds, r: int, step: float,
                      count: int, bounds) -> list:
    """Streamlines of the reconstructed velocity frozen at time index r."""
    def field_fn(pts):
        return velocity_at_points(pts, r, sol.trajectories, sol.gauges,
                                  particles, cfg)
    t = float(grid.times[r])
    return [Streamline(points=p, time=t)
            for p in trace_streamlines_field(field_fn, seeds, step, count, bounds)]
