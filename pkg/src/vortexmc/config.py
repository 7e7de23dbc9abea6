"""Flat key=value run configuration with strict parsing.

One config file describes one run. Lines are ``key = value``; ``#``
starts a comment; unknown keys, bad types and out-of-range values are
rejected with the offending key and line number. CLI flags override file
values. ``serialize_config`` and ``parse_config_text`` round-trip.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

INITIALIZERS = ("lamb_oseen", "taylor_green", "isotropic", "custom")
SCHEMES = ("shared", "independent")
SELF_INTERACTION = ("include_all", "exclude_self")

_DT_DEFAULT = 0.02


class ConfigError(ValueError):
    """Invalid configuration content."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved run parameters (see module docstring for the file format).

    ``delta`` and ``threads`` accept the string "auto": delta resolves to
    half the particle spacing, threads to the CPU count. ``m`` defaults to
    T / 0.02 rounded (at least 1). ``h``, ``lattice_min``/``lattice_max``
    and ``drop_zero_weights`` shape the lattice initializers;
    ``particles_file`` feeds the custom initializer.
    """

    initializer: str
    nu: float = 0.5
    T: float = 0.1
    m: int | None = None
    N: int = 1
    scheme: str = "shared"
    delta: float | str = "auto"
    tol: float = 1e-7
    max_iters: int = 200
    seed: int = 0
    threads: int | str = "auto"
    self_interaction: str = "include_all"
    output_dir: str = "."
    particles_file: str | None = None
    h: float | None = None
    lattice_min: int = -16
    lattice_max: int = 48
    drop_zero_weights: bool = False


def _parse_float(raw: str) -> float:
    return float(raw)


def _parse_int(raw: str) -> int:
    if raw.strip().lower().startswith("0x"):
        return int(raw, 16)
    return int(raw)


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _parse_delta(raw: str):
    return "auto" if raw.strip() == "auto" else float(raw)


def _parse_threads(raw: str):
    return "auto" if raw.strip() == "auto" else int(raw)


_PARSERS = {
    "initializer": str,
    "nu": _parse_float,
    "T": _parse_float,
    "m": _parse_int,
    "N": _parse_int,
    "scheme": str,
    "delta": _parse_delta,
    "tol": _parse_float,
    "max_iters": _parse_int,
    "seed": _parse_int,
    "threads": _parse_threads,
    "self_interaction": str,
    "output_dir": str,
    "particles_file": str,
    "h": _parse_float,
    "lattice_min": _parse_int,
    "lattice_max": _parse_int,
    "drop_zero_weights": _parse_bool,
}


def validate_config(cfg: RunConfig) -> RunConfig:
    """Range- and enum-check a config; returns it unchanged on success."""
    def bad(msg):
        raise ConfigError(msg)

    if cfg.initializer not in INITIALIZERS:
        bad(f"initializer must be one of {INITIALIZERS}, got {cfg.initializer!r}")
    if not cfg.nu > 0.0:
        bad(f"nu must be > 0, got {cfg.nu}")
    if not cfg.T > 0.0:
        bad(f"T must be > 0, got {cfg.T}")
    if cfg.m is not None and cfg.m < 1:
        bad(f"m must be >= 1, got {cfg.m}")
    if cfg.N < 1:
        bad(f"N must be >= 1, got {cfg.N}")
    if cfg.scheme not in SCHEMES:
        bad(f"scheme must be one of {SCHEMES}, got {cfg.scheme!r}")
    if cfg.delta != "auto" and not cfg.delta >= 0.0:
        bad(f"delta must be >= 0 or 'auto', got {cfg.delta}")
    if not cfg.tol > 0.0:
        bad(f"tol must be > 0, got {cfg.tol}")
    if cfg.max_iters < 1:
        bad(f"max_iters must be >= 1, got {cfg.max_iters}")
    if cfg.threads != "auto" and cfg.threads < 1:
        bad(f"threads must be >= 1 or 'auto', got {cfg.threads}")
    if cfg.self_interaction not in SELF_INTERACTION:
        bad(f"self_interaction must be one of {SELF_INTERACTION}, "
            f"got {cfg.self_interaction!r}")
    if cfg.initializer == "custom" and not cfg.particles_file:
        bad("initializer 'custom' requires particles_file")
    if cfg.h is not None and not cfg.h > 0.0:
        bad(f"h must be > 0, got {cfg.h}")
    if cfg.lattice_max < cfg.lattice_min:
        bad(f"lattice_max {cfg.lattice_max} below lattice_min {cfg.lattice_min}")
    return cfg


def parse_config_text(text: str, source: str = "<config>",
                      overrides: dict | None = None) -> RunConfig:
    """Parse config text; ``overrides`` (already-typed values) win over
    file content."""
    values: dict = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw_line!r}")
        key, _, raw_value = line.partition("=")
        key = key.strip()
        raw_value = raw_value.strip()
        if key not in _PARSERS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _PARSERS[key](raw_value)
        except (TypeError, ValueError):
            raise ConfigError(
                f"{source}:{lineno}: bad value for {key!r}: {raw_value!r}") from None
    if overrides:
        for key, value in overrides.items():
            if key not in _PARSERS:
                raise ConfigError(f"unknown key {key!r} in overrides")
            if value is not None:
                values[key] = value
    if "output_dir" not in values:
        values["output_dir"] = os.environ.get("VORTEXMC_OUTPUT_DIR", ".")
    if "initializer" not in values:
        raise ConfigError(f"{source}: missing required key 'initializer'")
    return validate_config(RunConfig(**values))


def parse_config(path, overrides: dict | None = None) -> RunConfig:
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    return parse_config_text(text, source=str(path), overrides=overrides)


def serialize_config(cfg: RunConfig, *, semantic_only: bool = False) -> str:
    """Emit a config file that parses back to ``cfg``.

    ``semantic_only`` drops the keys that cannot change results (threads,
    output_dir); the manifest stores that form so reruns at any thread
    count, from any directory, produce identical manifests.
    """
    skip = {"threads", "output_dir"} if semantic_only else set()
    lines = []
    for f in fields(cfg):
        if f.name in skip:
            continue
        value = getattr(cfg, f.name)
        if value is None:
            continue
        if isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


def resolved_steps(cfg: RunConfig) -> int:
    if cfg.m is not None:
        return cfg.m
    return max(1, int(round(cfg.T / _DT_DEFAULT)))


def resolved_threads(cfg: RunConfig) -> int:
    if cfg.threads == "auto":
        return os.cpu_count() or 1
    return int(cfg.threads)


def resolved_delta(cfg: RunConfig, h: float) -> float:
    """Mollification length: explicit value, or half the particle spacing."""
    if cfg.delta == "auto":
        if not (h and h > 0.0):
            raise ConfigError("delta = auto needs a particle spacing h")
        return 0.5 * float(h)
    return float(cfg.delta)


def with_overrides(cfg: RunConfig, **kwargs) -> RunConfig:
    """Typed replace + revalidate."""
    return validate_config(replace(cfg, **kwargs))
