"""CSV and JSON-lines writers.

CSV files open with ``#`` comment lines describing how they were produced
(seed, parameters, column meaning), followed by a header row.  Floats are
written with ``repr`` so identical inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

__all__ = ["write_csv", "read_csv", "write_jsonl", "read_jsonl", "write_region_csv", "write_json"]


def _cell(x):
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, np.integer):
        return str(int(x))
    return x


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_csv(path, rows: Iterable[Mapping], columns, meta: Mapping | None = None):
    """Write ``rows`` under ``columns`` with ``meta`` as leading ``# key: value`` lines."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        for key, value in (meta or {}).items():
            fh.write(f"# {key}: {json.dumps(_plain(value), sort_keys=True)}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_cell(row[c]) for c in columns])
    return path


def read_csv(path):
    """Return ``(meta, rows)``; numeric-looking cells stay strings."""
    meta, lines = {}, []
    with Path(path).open() as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(": ")
                meta[key] = json.loads(value)
            else:
                lines.append(line)
    return meta, list(csv.DictReader(lines))


def write_jsonl(path, records: Iterable[Mapping]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        for rec in records:
            fh.write(json.dumps(_plain(rec), sort_keys=True) + "\n")
    return path


def read_jsonl(path):
    with Path(path).open() as fh:
        return [json.loads(line) for line in fh if line.strip()]


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n")
    return path


def write_region_csv(path, samples, meta: Mapping | None = None):
    """One row per point: ``replication, t, v``; certificate indices go to the header."""
    rows = []
    kappas = []
    for rep, s in enumerate(samples):
        kappas.append([rep, s.kappa_a, s.kappa_v])
        rows.extend({"replication": rep, "t": t, "v": v} for t, v in zip(s.t, s.v))
    meta = dict(meta or {})
    meta["kappa_a_kappa_v"] = kappas
    return write_csv(path, rows, ["replication", "t", "v"], meta)
