"""Validation oracles and benchmark comparisons.

Three independent ways of checking the solver live here:

  * lattice error norms and point-table comparisons against closed-form
    or recorded reference velocities (bundled CSVs),
  * a forward-representation check for the gauge machinery: with zero
    drift and a constant strain matrix the representation collapses to a
    matrix exponential acting on a heat-semigroup mean, which scipy's
    scaling-and-squaring expm supplies as the oracle,
  * an empirical bridge-duality check: conditional means of a constant-
    drift diffusion pinned by terminal binning, compared forward vs
    time-reversed.

Both checks sample exact Gaussian endpoint laws (constant coefficients),
so the only error sources are Monte Carlo noise and, for the gauge
recursion, its O(dt) stepping, which is the point of the dt knob.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
from scipy.linalg import expm

from .ensemble import ParticleSet, TimeGrid
from .solver import SolverConfig, Solution
from .fields import reconstruct_velocity

# Discrete L1 errors reported for the bundled benchmark runs.
LAMB_OSEEN_L1 = {1: 0.91, 20: 0.66, 100: 0.19}
TAYLOR_GREEN_L1 = {0.02: 0.26, 0.01: 0.20}


@dataclass(frozen=True)
class LatticeSpec:
    """Regular probe lattice: points spacing * (i, j, k) over inclusive
    integer ranges, in C order (i outermost)."""

    ranges: tuple
    spacing: float
    time_index: int | None = None

    def __post_init__(self):
        if len(self.ranges) != 3:
            raise ValueError("ranges must give one (lo, hi) pair per axis")
        for lo, hi in self.ranges:
            if hi < lo:
                raise ValueError(f"empty lattice range ({lo}, {hi})")
        if not (np.isfinite(self.spacing) and self.spacing > 0.0):
            raise ValueError("spacing must be positive")

    @property
    def counts(self) -> tuple:
        return tuple(hi - lo + 1 for lo, hi in self.ranges)

    @property
    def cell_volume(self) -> float:
        return float(self.spacing ** 3)

    def points(self) -> np.ndarray:
        axes = [np.arange(lo, hi + 1) for lo, hi in self.ranges]
        grids = np.meshgrid(*axes, indexing="ij")
        return self.spacing * np.stack(grids, axis=-1).reshape(-1, 3).astype(float)


# The error lattice used by the line-vortex benchmark: (i/10, j/10, k/10),
# -10 <= i, j, k <= 9.
LAMB_OSEEN_ERROR_LATTICE = LatticeSpec(ranges=((-10, 9), (-10, 9), (-10, 9)),
                                       spacing=0.1)


def l1_error(approx_fn, exact_fn, lattice: LatticeSpec) -> float:
    """Discrete L1 distance: sum of 1-norms of the velocity difference
    over the lattice, times the cell volume."""
    pts = lattice.points()
    diff = np.asarray(approx_fn(pts), dtype=float) - np.asarray(exact_fn(pts), dtype=float)
    if diff.shape != (pts.shape[0], 3):
        raise ValueError("field functions must return (M, 3) arrays")
    return float(np.sum(np.abs(diff)) * lattice.cell_volume)


def lattice_l2_relative_error(approx, exact) -> float:
    """Relative lattice-L2 error between two (M, 3) velocity samples."""
    approx = np.asarray(approx, dtype=float)
    exact = np.asarray(exact, dtype=float)
    denom = np.sqrt(np.sum(exact * exact))
    if denom == 0.0:
        raise ValueError("exact field is identically zero on the lattice")
    return float(np.sqrt(np.sum((approx - exact) ** 2)) / denom)


@dataclass
class ComparisonReport:
    """Point-by-point velocity comparison plus run metadata."""

    points: np.ndarray
    exact: np.ndarray
    approx: np.ndarray
    metadata: dict = field(default_factory=dict)
    l1: float | None = None

    @property
    def abs_diff(self) -> np.ndarray:
        return np.abs(self.approx - self.exact)

    @property
    def max_abs_diff(self) -> float:
        return float(np.max(self.abs_diff))

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as f:
            for key in sorted(self.metadata):
                f.write(f"# {key}: {self.metadata[key]}\n")
            if self.l1 is not None:
                f.write(f"# l1_error: {self.l1!r}\n")
            writer = csv.writer(f)
            writer.writerow(["x", "y", "z",
                             "exact_u", "exact_v", "exact_w",
                             "approx_u", "approx_v", "approx_w"])
            for p, e, a in zip(self.points, self.exact, self.approx):
                writer.writerow([repr(float(v)) for v in (*p, *e, *a)])

    def render(self) -> str:
        """Aligned plain-text table."""
        lines = [f"{'point':<24} {'exact':<26} {'approx':<26} {'|diff|':<10}"]
        for p, e, a in zip(self.points, self.exact, self.approx):
            pt = "(" + ", ".join(f"{v:.2f}" for v in p) + ")"
            ex = "(" + ", ".join(f"{v: .3f}" for v in e) + ")"
            ap = "(" + ", ".join(f"{v: .3f}" for v in a) + ")"
            d = f"{np.max(np.abs(a - e)):.4f}"
            lines.append(f"{pt:<24} {ex:<26} {ap:<26} {d:<10}")
        if self.l1 is not None:
            lines.append(f"l1_error = {self.l1:.4f}")
        return "\n".join(lines)


def table_compare(sol: Solution, particles: ParticleSet, cfg: SolverConfig,
                  points, exact, r: int, metadata=None,
                  l1: float | None = None) -> ComparisonReport:
    """Reconstruct the velocity at probe points and tabulate against
    reference values."""
    points = np.asarray(points, dtype=float)
    exact = np.asarray(exact, dtype=float)
    if exact.shape != points.shape:
        raise ValueError("exact values must match points in shape")
    approx = reconstruct_velocity(points, r, sol, particles, cfg)
    return ComparisonReport(points=points, exact=exact, approx=approx,
                            metadata=dict(metadata or {}), l1=l1)


def _load_table(name: str, run_columns) -> dict:
    path = resources.files("vortexmc.reference_data").joinpath(name)
    rows = []
    with path.open("r", encoding="utf-8") as f:
        reader = csv.DictReader(line for line in f if not line.startswith("#"))
        rows = list(reader)
    xy = np.array([[float(row["x"]), float(row["y"])] for row in rows])
    exact = np.array([[float(row["exact_u"]), float(row["exact_v"])] for row in rows])
    runs = {}
    for key, (cu, cv) in run_columns.items():
        runs[key] = np.array([[float(row[cu]), float(row[cv])] for row in rows])
    return {"xy": xy, "exact": exact, "runs": runs}


def load_lamb_oseen_table() -> dict:
    """Bundled line-vortex benchmark table: 25 probe points in the z=0
    plane at t=0.1, exact + recorded N=1/20/100 velocities (x,y parts)."""
    table = _load_table("lamb_oseen_table.csv",
                        {1: ("n1_u", "n1_v"), 20: ("n20_u", "n20_v"),
                         100: ("n100_u", "n100_v")})
    table["points"] = np.concatenate(
        [table["xy"], np.zeros((table["xy"].shape[0], 1))], axis=1)
    table["l1"] = dict(LAMB_OSEEN_L1)
    return table


def load_taylor_green_table() -> dict:
    """Bundled Taylor-Green benchmark table: 25 probe points in the z=0.1
    plane at t=1, exact + recorded dt=0.02/0.01 velocities (x,y parts)."""
    table = _load_table("taylor_green_table.csv",
                        {0.02: ("dt02_u", "dt02_v"), 0.01: ("dt01_u", "dt01_v")})
    table["points"] = np.concatenate(
        [table["xy"], np.full((table["xy"].shape[0], 1), 0.1)], axis=1)
    table["l1"] = dict(TAYLOR_GREEN_L1)
    return table


@dataclass(frozen=True)
class FkCheckResult:
    monte_carlo: np.ndarray
    oracle: np.ndarray
    rel_error: float


def fk_oracle_check(nu: float, T: float, strain, f0, f0_mean, samples: int,
                    seed: int, dt: float = 1e-3, x0=(0.0, 0.0, 0.0)) -> FkCheckResult:
    """Check the forward representation against a matrix-exponential oracle.

    Zero drift, constant strain matrix S: the represented vector field at
    (x0, T) is exp(S T) E[f0(X_T)] with X_T = x0 + sqrt(2 nu T) xi. The
    Monte Carlo side draws the exact Brownian endpoint law, averages f0,
    and applies the gauge matrix carried by the numerical backward
    recursion Q(t-dt) = Q(t)(I + S dt) from Q(T) = I (path-independent for
    constant S, so carried once). ``f0_mean`` must be the exact heat-
    semigroup mean E[f0(X_T)]; it is trivially f0's value for constant f0
    and f0(x0) for affine f0.
    """
    strain = np.asarray(strain, dtype=float)
    if strain.shape != (3, 3):
        raise ValueError("strain must be a 3x3 matrix")
    if not (nu > 0.0 and T > 0.0 and dt > 0.0):
        raise ValueError("nu, T and dt must be positive")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    x0 = np.asarray(x0, dtype=float)
    f0_mean = np.asarray(f0_mean, dtype=float)

    steps = max(1, int(round(T / dt)))
    dt_eff = T / steps
    gauge = np.eye(3)
    for _ in range(steps):
        gauge = gauge @ (np.eye(3) + strain * dt_eff)

    gen = np.random.Generator(np.random.Philox(key=int(seed) & 0xFFFFFFFFFFFFFFFF))
    endpoints = x0 + np.sqrt(2.0 * nu * T) * gen.standard_normal((samples, 3))
    values = np.asarray(f0(endpoints), dtype=float)
    if values.shape != (samples, 3):
        raise ValueError("f0 must map (M, 3) points to (M, 3) vectors")
    monte_carlo = gauge @ values.mean(axis=0)

    oracle = expm(strain * T) @ f0_mean
    norm = float(np.linalg.norm(oracle))
    if norm == 0.0:
        raise ValueError("oracle is the zero vector; relative error undefined")
    rel_error = float(np.linalg.norm(monte_carlo - oracle) / norm)
    return FkCheckResult(monte_carlo=monte_carlo, oracle=oracle, rel_error=rel_error)


def fk_error_slope(nu: float, T: float, strain, f0, f0_mean, sample_sizes,
                   seeds, dt: float = 1e-3, x0=(0.0, 0.0, 0.0)) -> float:
    """Log-log slope of the root-mean-square relative error over seeds as
    a function of sample count (expected near -1/2)."""
    sample_sizes = list(sample_sizes)
    if len(sample_sizes) < 2:
        raise ValueError("need at least two sample sizes for a slope")
    rms = []
    for size in sample_sizes:
        errs = [fk_oracle_check(nu, T, strain, f0, f0_mean, size, s,
                                dt=dt, x0=x0).rel_error for s in seeds]
        rms.append(np.sqrt(np.mean(np.square(errs))))
    slope = np.polyfit(np.log(sample_sizes), np.log(rms), 1)[0]
    return float(slope)


class EmptyBinError(RuntimeError):
    """Terminal-state bin too sparse for a conditional mean."""


@dataclass(frozen=True)
class DualityResult:
    lhs: np.ndarray
    rhs: np.ndarray
    stderr: np.ndarray
    lhs_count: int
    rhs_count: int

    @property
    def std_err(self) -> float:
        return float(np.max(self.stderr))

    def passes(self, n_sigma: float = 3.0) -> bool:
        return bool(np.all(np.abs(self.lhs - self.rhs) <= n_sigma * self.stderr))


def duality_check(drift, nu: float, T: float, samples: int, seed: int,
                  xi=(0.0, 0.0, 0.0), eta=(0.3, 0.0, 0.0),
                  bin_width: float = 0.2) -> DualityResult:
    """Compare pinned-diffusion midpoint means forward and time-reversed.

    Forward paths follow dX = b dt + sqrt(2 nu) dB from xi; reversed paths
    use drift -b from eta. Pinning is approximated by keeping paths whose
    endpoint lands in the axis-aligned cube of side ``bin_width`` centered
    on the opposite pin, and the duality statement equates the conditional
    midpoint means. Constant drift makes both legs exactly Gaussian, so
    endpoints and midpoints are drawn directly.
    """
    drift = np.asarray(drift, dtype=float)
    if drift.shape != (3,):
        raise ValueError("drift must be a constant 3-vector")
    if not (nu > 0.0 and T > 0.0 and bin_width > 0.0):
        raise ValueError("nu, T and bin_width must be positive")
    if samples < 2:
        raise ValueError("samples must be >= 2")
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    gen = np.random.Generator(np.random.Philox(key=int(seed) & 0xFFFFFFFFFFFFFFFF))
    half_sd = np.sqrt(nu * T)  # per-component SD of one half-interval leg

    def conditional_mean(start, b, pin):
        mid = start + b * (T / 2.0) + half_sd * gen.standard_normal((samples, 3))
        end = mid + b * (T / 2.0) + half_sd * gen.standard_normal((samples, 3))
        keep = np.all(np.abs(end - pin) <= bin_width / 2.0, axis=1)
        count = int(np.count_nonzero(keep))
        if count < 2:
            raise EmptyBinError(
                f"only {count} of {samples} paths reached the terminal bin; "
                "increase samples or widen bins")
        sel = mid[keep]
        return sel.mean(axis=0), sel.std(axis=0, ddof=1) / np.sqrt(count), count

    lhs, se_l, n_l = conditional_mean(xi, drift, eta)
    rhs, se_r, n_r = conditional_mean(eta, -drift, xi)
    stderr = np.sqrt(se_l ** 2 + se_r ** 2)
    return DualityResult(lhs=lhs, rhs=rhs, stderr=stderr,
                         lhs_count=n_l, rhs_count=n_r)
