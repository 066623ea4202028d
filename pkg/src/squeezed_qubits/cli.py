"""Command line entry point.

Exit codes: 0 success, 1 verification failure, 2 bad configuration or
unknown preset, 3 numerical failure (partial outputs are written and
``summary.json`` carries ``"status": "failed"``).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

from .harness.config import ConfigError, ExperimentConfig, config_from_dict, load_config, parse_number, set_path
from .harness.presets import PRESETS, get_preset
from .harness.runner import RunFailure, run, sweep
from .harness.verify import verify

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _add_config_args(p):
    p.add_argument("--preset", help="start from a named preset (see list-presets)")
    p.add_argument("--config", help="JSON config file; merged over the preset if both are given")
    p.add_argument("--out", help="output directory")
    p.add_argument("--regime", action="append", choices=["markov", "nonmarkov", "markov_unsqueezed"],
                   help="regime to run (repeatable; default from config)")
    p.add_argument("--tmax", type=float)
    p.add_argument("--kt", type=float, help="bath temperature KT in units of omega0")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--theta", type=parse_number, help="squeeze phase, e.g. 0.5 or pi/6")


def build_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if args.preset:
        try:
            cfg = get_preset(args.preset).config
        except KeyError as exc:
            raise ConfigError(str(exc)) from None
    if args.config:
        cfg = load_config(args.config, cfg)
    if args.regime:
        cfg = config_from_dict({"regimes": args.regime}, cfg)
    overrides = {
        "integrator.t_max": args.tmax,
        "bath.kt": args.kt,
        "initial_state.epsilon": args.epsilon,
        "bath.r": args.r,
        "bath.theta": args.theta,
    }
    for path, value in overrides.items():
        if value is not None:
            cfg = set_path(cfg, path, value)
    if args.out:
        cfg = replace(cfg, output=args.out)
    return cfg


def cmd_run(args) -> int:
    cfg = build_config(args)
    try:
        result = run(cfg)
    except RunFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for regime, rr in result.regimes.items():
        print(f"{regime}: {rr.esd.cycle_count} dead interval(s), "
              f"C(0)={rr.concurrence[0]:.6g}, asymptote={rr.esd.asymptotic_concurrence:.6g}")
    print(f"outputs written to {result.out_dir} ({result.runtime:.1f} s)")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = build_config(args)
    values = [parse_number(v) for v in args.values.split(",") if v.strip()]
    if not values:
        raise ConfigError("no sweep values given")
    set_path(cfg, args.param, values[0])  # validate the path before running anything
    summaries = sweep(cfg, args.param, values, jobs=args.jobs)
    print(f"sweep_summary.csv written to {cfg.output}")
    return EXIT_NUMERIC if any(s["status"] != "ok" for s in summaries) else EXIT_OK


def cmd_verify(args) -> int:
    try:
        preset = get_preset(args.preset)
    except KeyError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    report = verify(preset, args.out)
    print(json.dumps(report, indent=2, default=float))
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_list(args) -> int:
    for name, p in PRESETS.items():
        print(f"{name:24s} {p.description}")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="squeezed-qubits",
                                 description="Two qubits in a common squeezed reservoir: entanglement dynamics.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one experiment")
    _add_config_args(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run one experiment per parameter value")
    _add_config_args(p)
    p.add_argument("--param", required=True, help="dotted config path, e.g. bath.kt")
    p.add_argument("--values", required=True, help="comma-separated values, e.g. 0,2,5 or pi/6,pi")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run a preset and check its acceptance assertions")
    p.add_argument("preset")
    p.add_argument("--out", help="keep outputs in this directory")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("list-presets", help="list named presets")
    p.set_defaults(func=cmd_list)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
