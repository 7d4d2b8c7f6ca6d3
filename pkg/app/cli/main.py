#!/usr/bin/env python3
"""Command-line entry point.

Usage:
    maxbloch run <config>
    maxbloch sweep <config> --vary key=v1,v2,...
    maxbloch plotdata <snapshot-glob> --quantity <q> --out <path>
    maxbloch check <config>

Exit codes: 0 success, 2 configuration error, 3 physics singularity,
4 numerical blowup or non-converged fixed point.
"""

from __future__ import annotations

import argparse
import glob
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from backend.core.errors import ConfigurationError, SimulationError
from backend.services.persistence.plot_data import QUANTITIES, emit_plot_data
from backend.services.persistence.snapshot_format import SnapshotFormatError
from backend.services.run_service import check, resolve_output_dir, run, sweep
from cli.config_loader import apply_override, load_config, parse_config_text, validate_config
from cli.logging_config import LEVEL_NAMES, configure_logging, get_logger


logger = get_logger(__name__)

EXIT_OK = 0


def parse_vary(spec: str) -> Tuple[str, List[str]]:
    """Split `key=v1,v2,...` into the key and its raw values.

    Raises:
        ConfigurationError: When the argument has no key or no values.
    """

    key, sep, values = spec.partition("=")
    key = key.strip()
    raw = [v.strip() for v in values.split(",") if v.strip()]
    if not sep or not key or not raw:
        raise ConfigurationError(f"--vary expects key=v1,v2,..., got {spec!r}", field="vary")
    return key, raw


def _cmd_run(args: argparse.Namespace) -> int:
    config = load_config(Path(args.config))
    result = run(config, output_dir=Path(args.out) if args.out else None)
    print(result.output_dir)
    return result.exit_code


def _cmd_sweep(args: argparse.Namespace) -> int:
    path = Path(args.config)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    data = parse_config_text(text, source=str(path))
    key, values = parse_vary(args.vary)

    members = []
    for raw in values:
        config = validate_config(apply_override(data, key, raw), base_dir=path.parent)
        members.append((f"{key}={raw}", config))
    base_dir = Path(args.out) if args.out else resolve_output_dir(members[0][1])
    results = sweep(members, base_dir, max_workers=args.workers)
    for name, code in results.items():
        print(f"{name}\t{code}")
    return max(results.values())


def _cmd_plotdata(args: argparse.Namespace) -> int:
    files = sorted(glob.glob(args.snapshots))
    if not files:
        raise ConfigurationError(f"no snapshot files match {args.snapshots!r}", field="snapshots")
    emit_plot_data([Path(f) for f in files], args.quantity, Path(args.out), probe=args.probe)
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    config = load_config(Path(args.config))
    print(json.dumps(check(config), sort_keys=True, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maxbloch", description="Self-consistent Maxwell-Bloch simulator")
    parser.add_argument("--log-level", default="INFO", type=str.upper, choices=LEVEL_NAMES, help="Log level")
    parser.add_argument("--log-dir", default=None, help="Also write rotating log files into this directory")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="Run one simulation")
    p_run.add_argument("config", help="YAML run config")
    p_run.add_argument("--out", default=None, help="Output directory (overrides outputs.directory)")
    p_run.set_defaults(handler=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="Run one simulation per value of a config key")
    p_sweep.add_argument("config", help="YAML run config")
    p_sweep.add_argument("--vary", required=True, help="Dotted key and values, e.g. physics.detuning=-50,50")
    p_sweep.add_argument("--out", default=None, help="Parent output directory")
    p_sweep.add_argument("--workers", type=int, default=None, help="Number of worker processes")
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_plot = sub.add_parser("plotdata", help="Export one quantity from snapshots as columns")
    p_plot.add_argument("snapshots", help="Snapshot file or glob pattern")
    p_plot.add_argument("--quantity", required=True, help=f"One of: {', '.join(QUANTITIES)}")
    p_plot.add_argument("--out", required=True, help="Output text file")
    p_plot.add_argument("--probe", type=float, default=None, help="Position sampled for time series")
    p_plot.set_defaults(handler=_cmd_plotdata)

    p_check = sub.add_parser("check", help="Validate a config and print the regime report at t = 0")
    p_check.add_argument("config", help="YAML run config")
    p_check.set_defaults(handler=_cmd_check)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(log_level=args.log_level, log_dir=args.log_dir)
    try:
        return args.handler(args)
    except (SimulationError, SnapshotFormatError) as exc:
        logger.error("%s", exc)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
