"""Config parsing and the command-line front end."""

import json
import hashlib
import os

import numpy as np
import pytest

from vortexmc import ConfigError, RunConfig, parse_config
from vortexmc.cli import main
from vortexmc.config import (parse_config_text, resolved_delta,
                             resolved_steps, resolved_threads,
                             serialize_config, validate_config,
                             with_overrides)


class TestConfigParsing:
    def test_basic_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(
            "# line-vortex check\n"
            "initializer = lamb_oseen\n"
            "nu = 0.25\n"
            "N = 20   # copies\n"
            "seed = 0x10\n"
            "drop_zero_weights = true\n")
        cfg = parse_config(path)
        assert cfg.initializer == "lamb_oseen"
        assert cfg.nu == 0.25
        assert cfg.N == 20
        assert cfg.seed == 16
        assert cfg.drop_zero_weights is True
        assert cfg.scheme == "shared"  # default preserved

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match=":2"):
            parse_config_text("initializer = lamb_oseen\nnusq = 1\n")

    def test_duplicate_key(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config_text("initializer = lamb_oseen\nnu = 1\nnu = 2\n")

    def test_bad_value(self):
        with pytest.raises(ConfigError, match=":2"):
            parse_config_text("initializer = lamb_oseen\nnu = fast\n")

    def test_missing_initializer(self):
        with pytest.raises(ConfigError, match="initializer"):
            parse_config_text("nu = 1.0\n")

    def test_overrides_win(self):
        cfg = parse_config_text("initializer = lamb_oseen\nnu = 1.0\n",
                                overrides={"nu": 2.5, "m": None})
        assert cfg.nu == 2.5
        assert cfg.m is None

    def test_env_output_dir(self, monkeypatch):
        monkeypatch.setenv("VORTEXMC_OUTPUT_DIR", "/tmp/elsewhere")
        cfg = parse_config_text("initializer = lamb_oseen\n")
        assert cfg.output_dir == "/tmp/elsewhere"

    def test_validation_errors(self):
        base = RunConfig(initializer="lamb_oseen")
        for kw in ({"nu": 0.0}, {"T": -1.0}, {"N": 0}, {"scheme": "magic"},
                   {"delta": -0.5}, {"tol": 0.0}, {"max_iters": 0},
                   {"threads": 0}, {"self_interaction": "sometimes"},
                   {"initializer": "custom"}, {"h": 0.0},
                   {"lattice_min": 3, "lattice_max": 2}):
            with pytest.raises(ConfigError):
                with_overrides(base, **kw)

    def test_serialize_roundtrip(self):
        cfg = validate_config(RunConfig(initializer="taylor_green", nu=0.125,
                                        m=7, delta=0.3, threads=2,
                                        drop_zero_weights=True))
        assert parse_config_text(serialize_config(cfg)) == cfg

    def test_serialize_semantic_drops_environment_keys(self):
        cfg = RunConfig(initializer="lamb_oseen", threads=8,
                        output_dir="/data/runs")
        text = serialize_config(cfg, semantic_only=True)
        assert "threads" not in text
        assert "output_dir" not in text
        assert "initializer = lamb_oseen" in text

    def test_resolution_rules(self):
        cfg = RunConfig(initializer="lamb_oseen")
        assert resolved_steps(cfg) == 5  # T=0.1 at the 0.02 default step
        assert resolved_steps(with_overrides(cfg, m=12)) == 12
        assert resolved_delta(cfg, h=0.5) == pytest.approx(0.25)
        assert resolved_delta(with_overrides(cfg, delta=0.4), h=0.5) == 0.4
        with pytest.raises(ConfigError):
            resolved_delta(cfg, h=None)
        assert resolved_threads(with_overrides(cfg, threads=3)) == 3
        assert resolved_threads(cfg) >= 1


def write_particles(tmp_path, rows=None):
    path = tmp_path / "particles.csv"
    lines = ["x,y,z,wx,wy,wz"]
    rows = rows if rows is not None else [
        "0.0,0.0,0.0,0.0,0.0,0.4",
        "0.0,0.0,0.5,0.0,0.0,0.4",
    ]
    path.write_text("\n".join(lines + rows) + "\n")
    return path


def run_cli(args, out_dir):
    return main(args + ["--output-dir", str(out_dir)])


class TestCliBasics:
    def test_help_exits_clean(self, capsys):
        assert main(["--help"]) == 0
        assert "simulate" in capsys.readouterr().out

    def test_no_command_is_usage_error(self):
        assert main([]) == 2

    def test_missing_initializer(self, tmp_path):
        assert run_cli(["simulate"], tmp_path) == 2

    def test_bad_config_file(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("initializer = lamb_oseen\nnu = -1\n")
        assert run_cli(["simulate", "--config", str(bad)], tmp_path) == 2

    def test_missing_config_file(self, tmp_path):
        assert run_cli(["simulate", "--config", str(tmp_path / "no.cfg")],
                       tmp_path) == 2

    def test_bad_particles_header(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("a,b,c\n1,2,3\n")
        code = run_cli(["simulate", "--initializer", "custom",
                        "--particles-file", str(path), "--h", "0.5"],
                       tmp_path)
        assert code == 2


class TestSimulateCommand:
    def simulate_args(self, particles):
        return ["simulate", "--initializer", "custom",
                "--particles-file", str(particles), "--h", "0.5",
                "--final-time", "0.04", "--steps", "2", "--copies", "2",
                "--seed", "11", "--export-lattice=-2,1,0.5",
                "--checkpoint", "--gauges-csv"]

    def test_end_to_end_outputs(self, tmp_path):
        particles = write_particles(tmp_path)
        out = tmp_path / "run1"
        assert run_cli(self.simulate_args(particles), out) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["results"]["converged"] is True
        assert manifest["config"].startswith("initializer = custom")
        assert "threads" not in manifest["config"]
        for name in ("trajectories", "gauges", "checkpoint", "field"):
            entry = manifest["outputs"][name]
            blob = (out / entry["file"]).read_bytes()
            assert hashlib.sha256(blob).hexdigest() == entry["sha256"]
        field_lines = (out / "field.csv").read_text().splitlines()
        assert field_lines[0] == "x,y,z,t,u,v,w"
        # lattice spec -2,1,0.5 is index range -2..1 scaled by 0.5
        assert len(field_lines) == 1 + 4 ** 3

    def test_thread_count_does_not_change_outputs(self, tmp_path):
        particles = write_particles(tmp_path)
        outs = {}
        for threads in ("1", "4"):
            out = tmp_path / f"run_t{threads}"
            args = self.simulate_args(particles) + ["--threads", threads]
            assert run_cli(args, out) == 0
            outs[threads] = ((out / "manifest.json").read_bytes(),
                             (out / "field.csv").read_bytes())
        assert outs["1"] == outs["4"]

    def test_non_convergence_exit_code(self, tmp_path):
        particles = write_particles(tmp_path)
        # independent copies break the rigid-translation fixed point, so
        # one Picard sweep cannot hit an impossible tolerance
        args = ["simulate", "--initializer", "custom",
                "--particles-file", str(particles), "--h", "0.5",
                "--final-time", "0.04", "--steps", "2",
                "--scheme", "independent", "--copies", "2",
                "--max-iters", "1", "--tol", "1e-30"]
        assert run_cli(args, tmp_path / "nc") == 3


class TestValidationCommands:
    def test_validate_lamb_oseen_tiny_threshold_fails(self, tmp_path):
        # N=1 with a generous runtime but an impossible error bar: the
        # command must exit 1 and still write its report
        out = tmp_path / "lo"
        code = run_cli(["validate-lamb-oseen", "--copies", "1",
                        "--seed", "0", "--max-l1", "0.0001"], out)
        assert code == 1
        assert (out / "comparison.csv").exists()
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["results"]["l1_error"] > 0.0001

    def test_check_fk_quick(self, tmp_path):
        out = tmp_path / "fk"
        code = run_cli(["check-fk", "--samples", "20000", "--skip-slope",
                        "--dt", "0.01", "--rel-tol", "0.08"], out)
        assert code == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["results"]["rel_error"] <= 0.08
        assert manifest["results"]["slope"] is None

    def test_check_duality_quick(self, tmp_path):
        out = tmp_path / "dual"
        code = run_cli(["check-duality", "--samples", "40000",
                        "--repetitions", "3", "--min-passes", "2"], out)
        assert code == 0

    def test_check_duality_empty_bin_exit(self, tmp_path):
        code = run_cli(["check-duality", "--samples", "50",
                        "--repetitions", "1", "--min-passes", "1",
                        "--bin-width", "0.01"], tmp_path / "d2")
        assert code == 1


class TestStreamlinesCommand:
    def test_writes_csv(self, tmp_path):
        particles = write_particles(tmp_path)
        out = tmp_path / "sl"
        code = run_cli(["streamlines", "--initializer", "custom",
                        "--particles-file", str(particles), "--h", "0.5",
                        "--final-time", "0.04", "--steps", "2",
                        "--seeds", "0.5,0,0;9,9,9", "--step", "0.05",
                        "--count", "10"], out)
        assert code == 0
        lines = (out / "streamlines.csv").read_text().splitlines()
        assert lines[0] == "streamline,point,x,y,z"
        ids = {line.split(",")[0] for line in lines[1:]}
        assert ids == {"0", "1"}
        # the out-of-bounds seed contributes exactly one point
        assert sum(1 for l in lines[1:] if l.startswith("1,")) == 1
