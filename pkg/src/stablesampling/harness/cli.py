"""Command-line entry point.

Usage::

    stablesampling <command> --config run.yaml --seed 1 --reps 1000 --out results/

Commands: ``sample-region``, ``sample-queue``, ``sensitivity``,
``benchmark`` and ``validate``.  ``--seed``/``--reps``/``--out`` override
the config file.  ``validate`` exits with status 1 when any test fails.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from ..io import write_csv, write_json, write_jsonl, write_region_csv
from ..stats import mean_se
from .config import ConfigError, ExperimentConfig, load_config
from .experiments import (
    run_batch_means_comparison,
    run_bias_benchmark,
    run_sample_queue,
    run_sample_region,
    run_sensitivity_table,
    run_validation_battery,
)

log = logging.getLogger("stablesampling")


def _meta(config: ExperimentConfig, command: str) -> dict:
    return {"command": command, "config": config.to_dict()}


def cmd_sample_region(config, out: Path):
    samples = run_sample_region(config)
    path = write_region_csv(out / "region.csv", samples, _meta(config, "sample-region"))
    sizes = [len(s) for s in samples]
    print(f"{len(samples)} replications, mean points {np.mean(sizes):.4g}; wrote {path}")
    return 0


def cmd_sample_queue(config, out: Path):
    states, runtimes = run_sample_queue(config)
    rows = []
    for rep, s in enumerate(states):
        r = s.residuals
        rows.append(
            {
                "replication": rep,
                "count": s.count,
                "age": s.age,
                "kappa_a": s.kappa_a,
                "kappa_v": s.kappa_v,
                "mean_residual": float(r.mean()) if r.size else 0.0,
                "max_residual": float(r.max()) if r.size else 0.0,
            }
        )
    cols = ["replication", "count", "age", "kappa_a", "kappa_v", "mean_residual", "max_residual"]
    write_csv(out / "queue.csv", rows, cols, _meta(config, "sample-queue"))
    write_jsonl(out / "states.jsonl", ({"replication": i, **s.to_dict()} for i, s in enumerate(states)))
    m, se = mean_se([s.count for s in states])
    print(f"mean q = {m:.4f} (se {se:.4f}), expected {config.system.system().mean_queue:.4f}")
    print(f"mean time per replication {np.mean(runtimes) * 1e3:.3f} ms")
    return 0


def cmd_sensitivity(config, out: Path):
    reports = run_sensitivity_table(config)
    rows = [r.as_dict() for r in reports]
    cols = list(rows[0])
    write_csv(out / "sensitivity.csv", rows, cols, _meta(config, "sensitivity"))
    records = []
    for rep in reports:
        for i, s in enumerate(rep.samples):
            records.append({"lam": rep.lam, "nu": rep.nu, "replication": i, **s.__dict__})
    write_jsonl(out / "sensitivity_samples.jsonl", records)
    for r in rows:
        print(
            f"(lam, nu) = ({r['lam']:g}, {r['nu']:g}): "
            f"dR/dlam {r['d_lam_mean']:.5g} dR/dnu {r['d_nu_mean']:.5g} "
            f"dRmax/dlam {r['d_lam_max']:.5g} dRmax/dnu {r['d_nu_max']:.5g} (empty {r['empty']})"
        )
    return 0


def cmd_benchmark(config, out: Path):
    t0 = time.perf_counter()
    rows, crossings = run_bias_benchmark(config)
    t1 = time.perf_counter()
    batch_rows, kappa = run_batch_means_comparison(config)
    t2 = time.perf_counter()
    bias = [r.as_dict() for r in rows]
    write_csv(out / "bias.csv", bias, list(bias[0]), _meta(config, "benchmark"))
    batch = [r.as_dict() for r in batch_rows]
    meta = _meta(config, "benchmark")
    meta["kappa_estimate"] = kappa
    write_csv(out / "batch_means.csv", batch, list(batch[0]), meta)
    report = {
        "bias": bias,
        "crossings": {str(k): v for k, v in crossings.items()},
        "batch_means": batch,
        "kappa_estimate": kappa,
        "runtime_seconds": {"bias": t1 - t0, "batch_means": t2 - t1},
    }
    write_json(out / "benchmark.json", report)
    for r in rows:
        print(f"{r.start:>5} n={r.n:<7d} Phi={r.mean:.4f} bias={100 * r.relative_bias:.3f}%")
    print(f"E kappa ~ {kappa:.1f}")
    return 0


def cmd_validate(config, out: Path):
    report = run_validation_battery(config)
    write_json(out / "validation.json", report.as_dict())
    for t in report.tests:
        print(f"{t.name:<16} p = {t.pvalue:.4g}  {'pass' if t.passed else 'FAIL'}")
    print("all tests passed" if report.passed else "validation FAILED")
    return 0 if report.passed else 1


COMMANDS = {
    "sample-region": cmd_sample_region,
    "sample-queue": cmd_sample_queue,
    "sensitivity": cmd_sensitivity,
    "benchmark": cmd_benchmark,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stablesampling", description="Exact sampling of stable regions and GI/GI/inf queues")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("--config", type=Path, help="YAML experiment file (defaults apply when omitted)")
        p.add_argument("--seed", type=int)
        p.add_argument("--reps", type=int)
        p.add_argument("--out", type=Path, help="output directory")
        p.add_argument("--workers", type=int, help="worker processes (default 1)")
        p.add_argument("--debug", action="store_true", help="log sampler draw counts")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.debug else logging.WARNING, format="%(name)s: %(message)s")
    try:
        config = load_config(args.config) if args.config else ExperimentConfig()
        changes = {}
        if args.seed is not None:
            changes["seed"] = args.seed
        if args.reps is not None:
            changes["replications"] = args.reps
        if args.workers is not None:
            changes["workers"] = args.workers
        config = ExperimentConfig.from_dict({**config.to_dict(), **changes})
        out = args.out or Path(config.out or "results")
        return COMMANDS[args.command](config, out)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
