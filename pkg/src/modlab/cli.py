"""Command-line experiment runner.

Subcommands: run, refine, list-checks, print-schema.
Exit codes: 0 all checks pass, 1 at least one check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import platform
import sys
import time

import numpy as np

from .checks import list_checks, run_checks, run_refinement
from .config import ConfigError, ExperimentConfig, schema_text


def _environment():
    return {"python": platform.python_version(),
            "numpy": np.__version__,
            "machine": platform.machine()}


def _write_report(report, out_dir, name):
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name + ".json")
    with open(path, "w") as fh:
        json.dump(report, fh, indent=1)
        fh.write("\n")
    return path


def _write_csv(rows, fieldnames, out_dir, name):
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name + ".csv")
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in fieldnames})
    return path


def _load_config(args):
    config = ExperimentConfig.load(args.config)
    if args.seed is not None:
        config.seed = args.seed
    if args.out is not None:
        config.out_dir = args.out
    return config


def cmd_run(args):
    config = _load_config(args)
    t0 = time.perf_counter()
    records, timings = run_checks(config)
    total = time.perf_counter() - t0
    status = "pass" if all(r["passed"] for r in records) else "fail"
    report = {
        "config": config.to_dict(),
        "checks": records,
        "status": status,
        "environment": _environment(),
        "timings": {**timings, "total": total},
    }
    path = _write_report(report, config.out_dir, "report")
    _write_csv(records, ["name", "value", "threshold", "direction", "passed"],
               config.out_dir, "checks")
    for r in records:
        flag = "pass" if r["passed"] else "FAIL"
        cmp_ = "<" if r["direction"] == "below" else ">"
        print(f"[{flag}] {r['name']}: {r['value']:.3e} {cmp_} "
              f"{r['threshold']:.1e}")
    print(f"report written to {path}")
    return 0 if status == "pass" else 1


def cmd_refine(args):
    config = _load_config(args)
    try:
        ladder = [int(x) for x in args.ladder.split(",") if x]
    except ValueError:
        raise ConfigError("ladder must be a comma-separated list of rungs")
    if not ladder or sorted(ladder) != ladder or len(set(ladder)) != len(ladder):
        raise ConfigError("ladder must be strictly increasing")
    if any(r not in (1, 2, 3) for r in ladder):
        raise ConfigError("ladder rungs must be chosen from 1, 2, 3")
    records, rows = run_refinement(config, ladder)
    status = "pass" if all(r["passed"] for r in records) else "fail"
    report = {
        "config": config.to_dict(),
        "ladder": ladder,
        "checks": records,
        "status": status,
        "environment": _environment(),
        "timings": {},
    }
    path = _write_report(report, config.out_dir, "refine_report")
    _write_csv(rows, ["resolution", "check", "residual"], config.out_dir,
               "refinement")
    for r in records:
        flag = "pass" if r["passed"] else "FAIL"
        seq = ", ".join(f"{v:.3e}" for v in r["sequence"])
        print(f"[{flag}] {r['name']}: {seq}")
    print(f"report written to {path}")
    return 0 if status == "pass" else 1


def cmd_list_checks(args):
    for kind, name in list_checks():
        print(f"{kind}: {name}")
    return 0


def cmd_print_schema(args):
    print(schema_text())
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="modlab",
        description="configuration-driven verification runs for the "
                    "modular-theory laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run the configured check suites")
    run_p.add_argument("--config", required=True, help="path to a JSON config")
    run_p.add_argument("--seed", type=int, default=None,
                       help="override the configured seed")
    run_p.add_argument("--out", default=None,
                       help="override the configured output directory")
    run_p.set_defaults(fn=cmd_run)

    ref_p = sub.add_parser("refine",
                           help="re-run resolution-dependent checks on a "
                                "refinement ladder")
    ref_p.add_argument("--config", required=True)
    ref_p.add_argument("--ladder", required=True,
                       help="comma-separated rung indices, e.g. 1,2,3")
    ref_p.add_argument("--seed", type=int, default=None)
    ref_p.add_argument("--out", default=None)
    ref_p.set_defaults(fn=cmd_refine)

    lc_p = sub.add_parser("list-checks", help="list the registered checks")
    lc_p.set_defaults(fn=cmd_list_checks)

    ps_p = sub.add_parser("print-schema",
                          help="print the configuration schema")
    ps_p.set_defaults(fn=cmd_print_schema)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already
        return int(exc.code) if exc.code else 0
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
