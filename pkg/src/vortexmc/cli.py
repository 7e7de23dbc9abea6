"""Command-line entry points.

Subcommands: simulate, validate-lamb-oseen, validate-taylor-green,
check-fk, check-duality, streamlines. Every run writes its outputs plus a
manifest.json into the output directory (default: VORTEXMC_OUTPUT_DIR or
the working directory). Exit codes: 0 success, 1 validation-threshold
failure, 2 usage or configuration error, 3 numerical blow-up or
non-convergence. Diagnostics go to stderr; output files are the product.

The manifest holds the semantic config (everything that can change
results), the package version, iteration diagnostics and sha256 checksums
of all outputs. It deliberately excludes wall time, thread count and
directory paths, so reruns of the same (config, seed) are byte-identical
at any thread count; timing lives in the progress log on stderr.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .config import (ConfigError, RunConfig, parse_config, resolved_delta,
                     resolved_steps, resolved_threads, serialize_config,
                     validate_config)
from .ensemble import (ParticleSet, TimeGrid, save_checkpoint,
                       trajectories_to_csv, gauges_to_csv)
from .fields import (isotropic_particles, lamb_oseen_exact,
                     lamb_oseen_particles, taylor_green_initial,
                     taylor_green_particles, divergence_probe,
                     reconstruct_velocity, trace_streamlines)
from .kernels import velocity_pair_sum
from .solver import BlowUpError, SolverConfig, solve
from .validation import (LAMB_OSEEN_ERROR_LATTICE, EmptyBinError, LatticeSpec,
                         duality_check, fk_error_slope, fk_oracle_check,
                         l1_error, lattice_l2_relative_error,
                         load_lamb_oseen_table, load_taylor_green_table,
                         table_compare)

log = logging.getLogger(__name__)

# Default strain matrix for check-fk: symmetric and trace-free, like a
# physical strain tensor.
FK_STRAIN = np.array([[0.30, 0.10, 0.00],
                      [0.10, -0.20, 0.05],
                      [0.00, 0.05, -0.10]])


def _fmt(v: float) -> str:
    return repr(float(v))


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def export_field(path, sol, particles, grid, cfg, lattice, r) -> None:
    """Velocity field on a lattice as CSV: x,y,z,t,u,v,w (shortest
    round-trip decimals). Re-exports of the same solution are
    byte-identical."""
    pts = lattice.points()
    u = reconstruct_velocity(pts, r, sol, particles, cfg)
    t = float(grid.times[r])
    with open(path, "w", encoding="utf-8") as f:
        f.write("x,y,z,t,u,v,w\n")
        for p, v in zip(pts, u):
            f.write(",".join(_fmt(c) for c in (*p, t, *v)) + "\n")


def write_manifest(path, cfg: RunConfig, results: dict, outputs: dict) -> None:
    doc = {
        "version": __version__,
        "config": serialize_config(cfg, semantic_only=True),
        "results": results,
        "outputs": {name: {"file": os.path.basename(str(p)),
                           "sha256": _sha256(p)}
                    for name, p in sorted(outputs.items())},
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, sort_keys=True, indent=2)
        f.write("\n")


def load_particles_csv(path, h: float) -> ParticleSet:
    """Custom particle file: header x,y,z,wx,wy,wz, one particle per row.
    Weights are used as-is (raw mode)."""
    with open(path, "r", encoding="utf-8") as f:
        reader = csv.DictReader(line for line in f if not line.startswith("#"))
        need = ("x", "y", "z", "wx", "wy", "wz")
        if reader.fieldnames is None or [c.strip() for c in reader.fieldnames] != list(need):
            raise ConfigError(
                f"{path}: particle file header must be {','.join(need)}")
        rows = [[float(row[c]) for c in need] for row in reader]
    if not rows:
        raise ConfigError(f"{path}: no particles")
    data = np.array(rows)
    return ParticleSet.from_raw(data[:, :3], data[:, 3:], h)


def build_particles_for(cfg: RunConfig) -> ParticleSet:
    ranges = ((cfg.lattice_min, cfg.lattice_max),) * 3
    if cfg.initializer == "lamb_oseen":
        return lamb_oseen_particles()
    if cfg.initializer == "taylor_green":
        return taylor_green_particles(h=cfg.h or np.pi / 16, index_ranges=ranges,
                                      drop_zero_weights=cfg.drop_zero_weights)
    if cfg.initializer == "isotropic":
        return isotropic_particles(h=cfg.h or np.pi / 16, index_ranges=ranges,
                                   drop_zero_weights=cfg.drop_zero_weights)
    if cfg.initializer == "custom":
        if cfg.h is None and cfg.delta == "auto":
            raise ConfigError("custom initializer with delta = auto needs h")
        return load_particles_csv(cfg.particles_file, cfg.h or 1.0)
    raise ConfigError(f"unknown initializer {cfg.initializer!r}")


def build_run(cfg: RunConfig):
    particles = build_particles_for(cfg)
    grid = TimeGrid(T=cfg.T, m=resolved_steps(cfg))
    scfg = SolverConfig(nu=cfg.nu,
                        delta=resolved_delta(cfg, particles.h),
                        tol=cfg.tol,
                        max_iters=cfg.max_iters,
                        scheme=cfg.scheme,
                        include_self=(cfg.self_interaction == "include_all"),
                        threads=resolved_threads(cfg))
    return particles, grid, scfg


def _out(cfg: RunConfig, name: str) -> str:
    os.makedirs(cfg.output_dir, exist_ok=True)
    return os.path.join(cfg.output_dir, name)


def _config_from_args(args, **forced) -> RunConfig:
    """File config (if given) + flag overrides + forced protocol keys."""
    overrides = {key: getattr(args, key, None) for key in (
        "initializer", "nu", "T", "m", "N", "scheme", "delta", "tol",
        "max_iters", "seed", "threads", "self_interaction", "output_dir",
        "particles_file", "h", "lattice_min", "lattice_max")}
    if getattr(args, "drop_zero_weights", False):
        overrides["drop_zero_weights"] = True
    overrides.update(forced)
    config_path = getattr(args, "config", None)
    if config_path:
        return parse_config(config_path, overrides=overrides)
    values = {k: v for k, v in overrides.items() if v is not None}
    if "output_dir" not in values:
        values["output_dir"] = os.environ.get("VORTEXMC_OUTPUT_DIR", ".")
    if "initializer" not in values:
        raise ConfigError("missing required key 'initializer' (flag or config file)")
    return validate_config(RunConfig(**values))


def _add_common_flags(sp, default_initializer=None):
    sp.add_argument("--config", help="run configuration file (key = value lines)")
    sp.add_argument("--initializer", default=default_initializer,
                    choices=("lamb_oseen", "taylor_green", "isotropic", "custom"))
    sp.add_argument("--nu", type=float, help="kinematic viscosity")
    sp.add_argument("--final-time", dest="T", type=float, help="final time T")
    sp.add_argument("--steps", dest="m", type=int, help="time steps (default T/0.02)")
    sp.add_argument("--copies", dest="N", type=int, help="independent copies N")
    sp.add_argument("--scheme", choices=("shared", "independent"))
    sp.add_argument("--delta", type=lambda s: s if s == "auto" else float(s),
                    help="mollification length, or 'auto' for h/2")
    sp.add_argument("--tol", type=float, help="update-norm tolerance")
    sp.add_argument("--max-iters", dest="max_iters", type=int)
    sp.add_argument("--seed", type=int, help="noise seed")
    sp.add_argument("--threads", type=lambda s: s if s == "auto" else int(s),
                    help="worker threads (performance only)")
    sp.add_argument("--self-interaction", dest="self_interaction",
                    choices=("include_all", "exclude_self"))
    sp.add_argument("--output-dir", dest="output_dir")
    sp.add_argument("--particles-file", dest="particles_file",
                    help="custom initializer CSV: x,y,z,wx,wy,wz")
    sp.add_argument("--h", type=float, help="lattice spacing")
    sp.add_argument("--lattice-min", dest="lattice_min", type=int)
    sp.add_argument("--lattice-max", dest="lattice_max", type=int)
    sp.add_argument("--drop-zero-weights", dest="drop_zero_weights",
                    action="store_true", default=False)


def _parse_lattice(spec: str) -> LatticeSpec:
    try:
        lo, hi, spacing = spec.split(",")
        return LatticeSpec(ranges=((int(lo), int(hi)),) * 3, spacing=float(spacing))
    except (ValueError, ConfigError):
        raise ConfigError(f"bad lattice spec {spec!r}; expected lo,hi,spacing") from None


def _solve_or_fail(particles, grid, cfg, scfg):
    sol = solve(particles, grid, cfg.N, scfg, cfg.seed)
    if not sol.converged:
        print(f"error: iteration did not reach tol={scfg.tol} in "
              f"{scfg.max_iters} iterations "
              f"(final update_norm={sol.final_update_norm:.3e})", file=sys.stderr)
    return sol


def cmd_simulate(args) -> int:
    cfg = _config_from_args(args)
    particles, grid, scfg = build_run(cfg)
    sol = _solve_or_fail(particles, grid, cfg, scfg)
    outputs = {}
    traj_path = _out(cfg, "trajectories.csv")
    trajectories_to_csv(traj_path, sol.trajectories)
    outputs["trajectories"] = traj_path
    if args.gauges_csv:
        gpath = _out(cfg, "gauges.csv")
        gauges_to_csv(gpath, sol.gauges)
        outputs["gauges"] = gpath
    if args.checkpoint:
        cpath = _out(cfg, "checkpoint.npz")
        save_checkpoint(cpath, sol.trajectories, sol.gauges)
        outputs["checkpoint"] = cpath
    if args.export_lattice:
        lattice = _parse_lattice(args.export_lattice)
        fpath = _out(cfg, "field.csv")
        export_field(fpath, sol, particles, grid, scfg, lattice, grid.m)
        outputs["field"] = fpath
    results = {"converged": sol.converged,
               "iterations_used": sol.iterations_used,
               "final_update_norm": sol.final_update_norm,
               "particles": particles.n, "copies": cfg.N}
    write_manifest(_out(cfg, "manifest.json"), cfg, results, outputs)
    return 0 if sol.converged else 3


def cmd_validate_lamb_oseen(args) -> int:
    # delta = 0.1 reproduces the recorded benchmark errors; the generic
    # auto rule (h/2 = 0.25) over-smooths this filament
    cfg = _config_from_args(args, initializer="lamb_oseen",
                            N=(args.N if args.N is not None else 100),
                            delta=(args.delta if args.delta is not None else 0.1))
    particles, grid, scfg = build_run(cfg)
    sol = _solve_or_fail(particles, grid, cfg, scfg)
    t_final = grid.T

    def approx_fn(pts):
        return reconstruct_velocity(pts, grid.m, sol, particles, scfg)

    def exact_fn(pts):
        return lamb_oseen_exact(pts, t_final, cfg.nu)

    err = l1_error(approx_fn, exact_fn, LAMB_OSEEN_ERROR_LATTICE)
    table = load_lamb_oseen_table()
    exact3 = np.concatenate([table["exact"],
                             np.zeros((table["exact"].shape[0], 1))], axis=1)
    report = table_compare(sol, particles, scfg, table["points"], exact3,
                           grid.m,
                           metadata={"benchmark": "lamb_oseen", "t": t_final,
                                     "copies": cfg.N, "seed": cfg.seed,
                                     "delta": scfg.delta}, l1=err)
    report_path = _out(cfg, "comparison.csv")
    report.to_csv(report_path)
    print(report.render(), file=sys.stderr)
    results = {"l1_error": err, "threshold": args.max_l1,
               "converged": sol.converged,
               "iterations_used": sol.iterations_used,
               "final_update_norm": sol.final_update_norm}
    write_manifest(_out(cfg, "manifest.json"), cfg, results,
                   {"comparison": report_path})
    if not sol.converged:
        return 3
    if err > args.max_l1:
        print(f"error: l1_error {err:.4f} exceeds threshold {args.max_l1}",
              file=sys.stderr)
        return 1
    return 0


def _taylor_green_static_error(h: float, probes, exact) -> float:
    """Relative lattice-L2 error of the t=0 reconstruction (gauges = I)
    from a Taylor-Green lattice of spacing h covering [-pi, 3pi)."""
    per = int(round(np.pi / h))
    particles = taylor_green_particles(
        h=h, index_ranges=((-per, 3 * per - 1),) * 3)
    approx = velocity_pair_sum(probes, particles.positions, particles.weights,
                               delta=0.5 * h)
    return lattice_l2_relative_error(approx, exact)


def cmd_validate_taylor_green(args) -> int:
    if args.full:
        return _taylor_green_full(args)
    cfg = _config_from_args(args, initializer="taylor_green",
                            nu=getattr(args, "nu", None) or 1.0 / 1600.0,
                            T=getattr(args, "T", None) or 0.2,
                            scheme=getattr(args, "scheme", None) or "independent",
                            drop_zero_weights=True,
                            h=args.h or np.pi / 4,
                            lattice_min=0,
                            lattice_max=int(round(2 * np.pi / (args.h or np.pi / 4))) - 1)
    # (a) static t=0 refinement: error strictly decreases under h -> h/2
    probe = LatticeSpec(ranges=((4, 12),) * 3, spacing=np.pi / 8)
    probes = probe.points()
    exact = taylor_green_initial(probes)[0]
    h0 = np.pi / 4
    err_coarse = _taylor_green_static_error(h0, probes, exact)
    err_fine = _taylor_green_static_error(h0 / 2.0, probes, exact)
    refined = err_fine < err_coarse
    print(f"refinement: l2_rel(h=pi/4)={err_coarse:.4f} "
          f"l2_rel(h=pi/8)={err_fine:.4f} decreased={refined}", file=sys.stderr)
    # (b) coarse dynamic solve stays finite, divergence-free, converged
    particles, grid, scfg = build_run(cfg)
    sol = _solve_or_fail(particles, grid, cfg, scfg)
    gen = np.random.Generator(np.random.Philox(key=cfg.seed & 0xFFFFFFFFFFFFFFFF))
    pts = gen.uniform(0.5, 2 * np.pi - 0.5, size=(20, 3))
    u = reconstruct_velocity(pts, grid.m, sol, particles, scfg)
    finite = bool(np.all(np.isfinite(u)))
    step = 1e-3
    div = divergence_probe(
        lambda p: reconstruct_velocity(p, grid.m, sol, particles, scfg),
        pts, step=step)
    scale = max(float(np.max(np.abs(u))), 1.0)
    div_ok = bool(np.max(np.abs(div)) <= 1e-6 * scale / step)
    results = {"refinement_error_coarse": err_coarse,
               "refinement_error_fine": err_fine,
               "refinement_decreased": refined,
               "solve_converged": sol.converged,
               "iterations_used": sol.iterations_used,
               "field_finite": finite,
               "divergence_ok": div_ok,
               "max_abs_divergence": float(np.max(np.abs(div)))}
    write_manifest(_out(cfg, "manifest.json"), cfg, results, {})
    if not sol.converged:
        return 3
    ok = refined and finite and div_ok
    if not ok:
        print("error: Taylor-Green property checks failed", file=sys.stderr)
    return 0 if ok else 1


def _taylor_green_full(args) -> int:
    print("warning: full-scale Taylor-Green regression (65^3 particles, "
          "T=1); this runs for many hours", file=sys.stderr)
    cfg = _config_from_args(args, initializer="taylor_green",
                            nu=getattr(args, "nu", None) or 1.0 / 1600.0,
                            T=getattr(args, "T", None) or 1.0,
                            scheme=getattr(args, "scheme", None) or "independent")
    particles, grid, scfg = build_run(cfg)
    sol = _solve_or_fail(particles, grid, cfg, scfg)
    table = load_taylor_green_table()
    dt_key = 0.02 if abs(grid.dt - 0.02) < 1e-12 else 0.01 if abs(grid.dt - 0.01) < 1e-12 else None
    if dt_key is None:
        print(f"error: no reference column for dt={grid.dt}", file=sys.stderr)
        return 2
    reference = table["runs"][dt_key]
    approx = reconstruct_velocity(table["points"], grid.m, sol, particles, scfg)
    diff = np.max(np.abs(approx[:, :2] - reference))
    spacing = table["xy"][1, 0] - table["xy"][0, 0]
    l1 = float(np.sum(np.abs(approx[:, :2] - table["exact"])) * spacing ** 2)
    report = table_compare(sol, particles, scfg, table["points"],
                           np.concatenate([table["exact"],
                                           np.zeros((25, 1))], axis=1),
                           grid.m, metadata={"benchmark": "taylor_green",
                                             "dt": grid.dt, "seed": cfg.seed},
                           l1=l1)
    report_path = _out(cfg, "comparison.csv")
    report.to_csv(report_path)
    results = {"max_abs_diff_vs_reference": float(diff),
               "per_point_tolerance": args.point_tol,
               "l1_error_vs_exact": l1,
               "converged": sol.converged,
               "iterations_used": sol.iterations_used}
    write_manifest(_out(cfg, "manifest.json"), cfg, results,
                   {"comparison": report_path})
    if not sol.converged:
        return 3
    if diff > args.point_tol:
        print(f"error: max per-point deviation {diff:.4f} exceeds "
              f"{args.point_tol}", file=sys.stderr)
        return 1
    return 0


def cmd_check_fk(args) -> int:
    cfg = _config_from_args(args, initializer="lamb_oseen")

    def f0(pts):
        return pts + np.array([1.0, 1.0, 1.0])

    f0_mean = np.array([1.0, 1.0, 1.0])  # affine f0 is heat-invariant at x0=0
    result = fk_oracle_check(cfg.nu, 1.0, FK_STRAIN, f0, f0_mean,
                             args.samples, cfg.seed, dt=args.dt)
    slope = None
    if not args.skip_slope:
        slope = fk_error_slope(cfg.nu, 1.0, FK_STRAIN, f0, f0_mean,
                               sample_sizes=(10 ** 3, 10 ** 4, 10 ** 5),
                               seeds=range(cfg.seed + 1, cfg.seed + 17),
                               dt=args.dt)
    rel_ok = result.rel_error <= args.rel_tol
    slope_ok = slope is None or -0.6 <= slope <= -0.4
    print(f"fk_check rel_error={result.rel_error:.5f} tol={args.rel_tol} "
          f"slope={slope if slope is None else round(slope, 3)}", file=sys.stderr)
    results = {"rel_error": result.rel_error, "rel_tol": args.rel_tol,
               "monte_carlo": [float(v) for v in result.monte_carlo],
               "oracle": [float(v) for v in result.oracle],
               "slope": slope, "samples": args.samples, "dt": args.dt}
    write_manifest(_out(cfg, "manifest.json"), cfg, results, {})
    return 0 if (rel_ok and slope_ok) else 1


def cmd_check_duality(args) -> int:
    cfg = _config_from_args(args, initializer="lamb_oseen")
    drift = np.array([1.0, 0.5, -0.2])
    passes = 0
    for rep in range(args.repetitions):
        result = duality_check(drift, cfg.nu, 1.0, args.samples,
                               seed=cfg.seed + rep, bin_width=args.bin_width)
        passes += int(result.passes())
    needed = args.min_passes
    print(f"duality_check passes={passes}/{args.repetitions} "
          f"required={needed}", file=sys.stderr)
    results = {"passes": passes, "repetitions": args.repetitions,
               "required": needed, "samples": args.samples,
               "bin_width": args.bin_width}
    write_manifest(_out(cfg, "manifest.json"), cfg, results, {})
    return 0 if passes >= needed else 1


def cmd_streamlines(args) -> int:
    cfg = _config_from_args(args)
    particles, grid, scfg = build_run(cfg)
    sol = _solve_or_fail(particles, grid, cfg, scfg)
    if args.seeds:
        seeds = np.array([[float(c) for c in p.split(",")]
                          for p in args.seeds.split(";")])
    else:
        seeds = np.array([[0.5, 0.0, 0.0], [1.0, 0.0, 0.0], [1.5, 0.0, 0.0],
                          [0.0, 0.5, 0.5], [0.0, 1.0, 0.5], [0.0, 1.5, 0.5]])
    bound = args.bound
    lines = trace_streamlines(sol, particles, grid, scfg, seeds, grid.m,
                              step=args.step, count=args.count,
                              bounds=((-bound,) * 3, (bound,) * 3))
    path = _out(cfg, "streamlines.csv")
    with open(path, "w", encoding="utf-8") as f:
        f.write("streamline,point,x,y,z\n")
        for i, line in enumerate(lines):
            for j, p in enumerate(line.points):
                f.write(f"{i},{j},{_fmt(p[0])},{_fmt(p[1])},{_fmt(p[2])}\n")
    results = {"streamlines": len(lines), "time": float(grid.times[grid.m]),
               "step": args.step, "count": args.count,
               "converged": sol.converged,
               "iterations_used": sol.iterations_used}
    write_manifest(_out(cfg, "manifest.json"), cfg, results,
                   {"streamlines": path})
    return 0 if sol.converged else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vortexmc",
        description="Monte Carlo random-vortex simulator for 3D "
                    "incompressible viscous flow")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="run one simulation from a config")
    _add_common_flags(sp)
    sp.add_argument("--export-lattice", help="field export lattice: lo,hi,spacing")
    sp.add_argument("--checkpoint", action="store_true",
                    help="also write a binary checkpoint")
    sp.add_argument("--gauges-csv", dest="gauges_csv", action="store_true",
                    help="also write gauges.csv")
    sp.set_defaults(handler=cmd_simulate)

    sp = sub.add_parser("validate-lamb-oseen",
                        help="benchmark against the exact line vortex")
    _add_common_flags(sp, default_initializer="lamb_oseen")
    sp.add_argument("--max-l1", dest="max_l1", type=float, default=0.30,
                    help="discrete L1 error threshold")
    sp.set_defaults(handler=cmd_validate_lamb_oseen)

    sp = sub.add_parser("validate-taylor-green",
                        help="Taylor-Green property checks (desk scale)")
    _add_common_flags(sp, default_initializer="taylor_green")
    sp.add_argument("--full", action="store_true",
                    help="full-scale 65^3 benchmark regression (very long)")
    sp.add_argument("--point-tol", dest="point_tol", type=float, default=0.05,
                    help="per-point tolerance vs stored reference (--full)")
    sp.set_defaults(handler=cmd_validate_taylor_green)

    sp = sub.add_parser("check-fk",
                        help="gauge machinery vs matrix-exponential oracle")
    _add_common_flags(sp, default_initializer="lamb_oseen")
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--dt", type=float, default=1e-3)
    sp.add_argument("--rel-tol", dest="rel_tol", type=float, default=0.05)
    sp.add_argument("--skip-slope", dest="skip_slope", action="store_true")
    sp.set_defaults(handler=cmd_check_fk)

    sp = sub.add_parser("check-duality",
                        help="pinned-diffusion midpoint duality check")
    _add_common_flags(sp, default_initializer="lamb_oseen")
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--repetitions", type=int, default=100)
    sp.add_argument("--min-passes", dest="min_passes", type=int, default=95)
    sp.add_argument("--bin-width", dest="bin_width", type=float, default=0.2)
    sp.set_defaults(handler=cmd_check_duality)

    sp = sub.add_parser("streamlines",
                        help="trace streamlines of a simulated field")
    _add_common_flags(sp, default_initializer="lamb_oseen")
    sp.add_argument("--seeds", help="seed points 'x,y,z;x,y,z;...'")
    sp.add_argument("--step", type=float, default=0.01)
    sp.add_argument("--count", type=int, default=2000)
    sp.add_argument("--bound", type=float, default=2.0,
                    help="half-width of the tracing box")
    sp.set_defaults(handler=cmd_streamlines)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BlowUpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except EmptyBinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
