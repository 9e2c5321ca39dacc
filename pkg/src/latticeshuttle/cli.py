"""Command-line front end.

Subcommands: transport, entangle, sweep-tau, sweep-n, witness-check,
oracle-check.  Options resolve in three layers: built-in defaults, then a
``--config`` file of ``key=value`` lines (``#`` starts a comment, unknown
keys are errors), then explicit flags.  Every run echoes its fully resolved
configuration to stderr in the same key=value format, so an echoed config
can be fed back in as a config file.

Exit codes: 0 on success, 2 on configuration errors, 3 when the propagator
fails to converge, 1 when a check subcommand finds a violation.
"""

from __future__ import annotations

import argparse
import math
import sys

from .analytic import PhysicalUnits, to_physical_time, total_time
from .propagator import ConvergenceError
from .sweep import (
    SweepConfig,
    run_entangle_point,
    run_oracle_check,
    run_sweep_n,
    run_sweep_tau,
    run_transport,
    run_witness_check,
    sweep_csv_text,
    trajectory_csv_text,
)

__all__ = ["main", "entry_point", "parse_config", "ConfigError"]


class ConfigError(Exception):
    """Bad configuration file or option values."""


_CONFIG_TYPES = {
    "experiment": str,
    "sites": int,
    "u_over_j": float,
    "tau_over_th": float,
    "points": int,
    "tol": float,
    "seed": int,
    "threads": int,
    "shots": int,
    "j_over_h_khz": float,
    "out": str,
}

# Per-subcommand defaults that differ from the SweepConfig baseline.
_POINT_DEFAULTS = {"sweep_n": 7, "oracle_check": 120}
_TOL_DEFAULTS = {"oracle_check": 1e-9}


def parse_config(path: str) -> dict:
    """Read a key=value config file; unknown keys and bad values are errors."""
    values: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(
                f"{path}:{lineno}: expected key=value, got {line!r}"
            )
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _CONFIG_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _CONFIG_TYPES[key](val)
        except ValueError as exc:
            raise ConfigError(
                f"{path}:{lineno}: invalid value {val!r} for key {key!r}"
            ) from exc
    return values


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--sites", type=int, help="chain length N")
    common.add_argument("--u-over-j", type=float, help="interaction U in units of J")
    common.add_argument(
        "--tau-over-th", type=float, help="crossfade duration over hop time"
    )
    common.add_argument("--tol", type=float, help="propagator tolerance")
    common.add_argument(
        "--points", type=int, help="number of sweep points or check samples"
    )
    common.add_argument("--threads", type=int, help="worker processes for sweeps")
    common.add_argument("--out", help="output CSV path (default: stdout)")
    common.add_argument("--config", help="key=value config file")
    common.add_argument(
        "--shots", type=int, help="finite-shot samples per witness setting"
    )
    common.add_argument(
        "--j-over-h-khz",
        type=float,
        help="reference hopping J/h in kHz for physical-time reporting",
    )

    parser = argparse.ArgumentParser(
        prog="latticeshuttle",
        description=(
            "Simulate directed atom transport and edge-pair entanglement "
            "on a dynamic optical superlattice chain."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser(
        "transport",
        parents=[common],
        help="walk one atom across the chain, write its trajectory CSV",
    )
    sub.add_parser(
        "entangle",
        parents=[common],
        help="run the full edge-pair protocol once, write one record",
    )
    sub.add_parser(
        "sweep-tau",
        parents=[common],
        help="sweep the crossfade duration at fixed chain length",
    )
    sub.add_parser(
        "sweep-n",
        parents=[common],
        help="sweep the chain length at fixed crossfade duration",
    )
    sub.add_parser(
        "witness-check",
        parents=[common],
        help="verify witness positivity, ideal value, and settings",
    )
    sub.add_parser(
        "oracle-check",
        parents=[common],
        help="compare the propagator against the closed-form amplitudes",
    )
    return parser


def _experiment_name(command: str) -> str:
    return command.replace("-", "_")


def _resolve(args: argparse.Namespace) -> SweepConfig:
    experiment = _experiment_name(args.command)
    cfg = SweepConfig(
        experiment=experiment,
        points=_POINT_DEFAULTS.get(experiment, SweepConfig.points),
        tol=_TOL_DEFAULTS.get(experiment, SweepConfig.tol),
    )
    if args.config:
        for key, value in parse_config(args.config).items():
            setattr(cfg, key, value)
    for key in (
        "sites",
        "u_over_j",
        "tau_over_th",
        "tol",
        "points",
        "threads",
        "out",
        "shots",
        "j_over_h_khz",
    ):
        value = getattr(args, key)
        if value is not None:
            setattr(cfg, key, value)
    cfg.experiment = experiment

    if cfg.sites < 2:
        raise ConfigError(f"sites must be at least 2, got {cfg.sites}")
    if cfg.u_over_j <= 0:
        raise ConfigError(f"u_over_j must be positive, got {cfg.u_over_j}")
    if cfg.tau_over_th < 0:
        raise ConfigError(
            f"tau_over_th must be non-negative, got {cfg.tau_over_th}"
        )
    if cfg.points < 1:
        raise ConfigError(f"points must be at least 1, got {cfg.points}")
    if cfg.tol <= 0:
        raise ConfigError(f"tol must be positive, got {cfg.tol}")
    if cfg.threads < 1:
        raise ConfigError(f"threads must be at least 1, got {cfg.threads}")
    if cfg.shots < 0:
        raise ConfigError(f"shots must be non-negative, got {cfg.shots}")
    if cfg.j_over_h_khz < 0:
        raise ConfigError(
            f"j_over_h_khz must be non-negative, got {cfg.j_over_h_khz}"
        )
    return cfg


def _echo_config(cfg: SweepConfig) -> None:
    for key in _CONFIG_TYPES:
        value = getattr(cfg, key)
        text = repr(value) if isinstance(value, float) else str(value)
        print(f"{key}={text}", file=sys.stderr)


def _write_output(text: str, cfg: SweepConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _physical_note(duration: float, cfg: SweepConfig) -> str:
    if cfg.j_over_h_khz <= 0:
        return ""
    units = PhysicalUnits(cfg.j_over_h_khz * 1e3)
    return f" ({to_physical_time(duration, units) * 1e3:.4g} ms)"


def _cmd_transport(cfg: SweepConfig) -> int:
    result = run_transport(cfg)
    _write_output(trajectory_csv_text(result, cfg), cfg)
    print(
        f"arrival_probability={result.arrival_probability!r} "
        f"target_site={result.target_site} "
        f"duration={result.total_duration!r}"
        f"{_physical_note(result.total_duration, cfg)}",
        file=sys.stderr,
    )
    return 0


def _cmd_entangle(cfg: SweepConfig) -> int:
    record = run_entangle_point(
        cfg.sites, cfg.u_over_j, cfg.tau_over_th, cfg.tol
    )
    _write_output(sweep_csv_text([record], cfg, "entangle"), cfg)
    duration = total_time(cfg.sites, 1.0, cfg.u_over_j)
    print(
        f"p_1n={record.p_1n!r} c_1n={record.c_1n!r} "
        f"witness={record.witness!r} "
        f"ideal_duration={duration!r}{_physical_note(duration, cfg)}",
        file=sys.stderr,
    )
    if math.isnan(record.p_1n):
        return 3
    return 0


def _cmd_sweep_tau(cfg: SweepConfig) -> int:
    records = run_sweep_tau(cfg)
    _write_output(sweep_csv_text(records, cfg, "sweep_tau"), cfg)
    return 0


def _cmd_sweep_n(cfg: SweepConfig) -> int:
    records = run_sweep_n(cfg)
    _write_output(sweep_csv_text(records, cfg, "sweep_n"), cfg)
    return 0


def _cmd_witness_check(cfg: SweepConfig) -> int:
    report = run_witness_check(cfg)
    for key, value in report.items():
        print(f"{key}={value}")
    ok = (
        report["min_product_witness"] >= -1e-12
        and report["ideal_witness"] <= -0.9
        and report["reconstruction_error"] <= 1e-12
    )
    return 0 if ok else 1


def _cmd_oracle_check(cfg: SweepConfig) -> int:
    report = run_oracle_check(
        samples=cfg.points, seed=cfg.seed, tolerance=cfg.tol
    )
    for key, value in report.items():
        print(f"{key}={value}")
    return 0 if report["max"] <= 1e-8 else 1


_HANDLERS = {
    "transport": _cmd_transport,
    "entangle": _cmd_entangle,
    "sweep-tau": _cmd_sweep_tau,
    "sweep-n": _cmd_sweep_n,
    "witness-check": _cmd_witness_check,
    "oracle-check": _cmd_oracle_check,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    _echo_config(cfg)
    try:
        return _HANDLERS[args.command](cfg)
    except ConvergenceError as exc:
        print(f"propagation failed to converge: {exc}", file=sys.stderr)
        return 3


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
