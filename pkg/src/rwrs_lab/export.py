"""CSV / JSON writers for profiles, sceneries, batches and reports.

Every CSV starts with a versioned comment line carrying the kind of table and
its metadata (seed, configuration) as compact sorted JSON.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

SCHEMA = "rwrs-lab-csv/1"


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return str(v)


def csv_text(kind: str, meta: dict, columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    buf.write(f"# {SCHEMA} kind={kind} meta={json.dumps(meta, sort_keys=True, separators=(',', ':'))}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path, kind: str, meta: dict, columns, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(csv_text(kind, meta, columns, rows))
    return path


def jsonable(x):
    """Plain-Python copy of ``x`` with numpy values and non-finite floats made JSON-safe."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n")
    return path


def read_csv(path) -> tuple[dict, list[str], list[list[str]]]:
    """Return ``(header info, column names, rows)`` of a file written here."""
    lines = Path(path).read_text().splitlines()
    head = lines[0]
    if not head.startswith(f"# {SCHEMA} "):
        raise ValueError(f"{path} does not carry the {SCHEMA} header")
    kind_part, meta_part = head[len(f"# {SCHEMA} "):].split(" meta=", 1)
    info = {"kind": kind_part.split("=", 1)[1], "meta": json.loads(meta_part)}
    rows = list(csv.reader(lines[1:]))
    return info, rows[0], rows[1:]


def profile_rows(profile):
    return zip(profile.sites, profile.counts)


def alpha_rows(lags, alpha):
    return zip(lags, alpha)


def scenery_rows(window):
    return zip(range(window.left, window.right + 1), window.values)


def batch_rows(batch):
    for r in range(batch.replicates):
        for j, t in enumerate(batch.times):
            yield r, t, batch.raw[r, j], batch.normalized[r, j]


def delta_rows(delta):
    for r in range(delta.values.shape[0]):
        for j, t in enumerate(delta.times):
            yield r, t, delta.values[r, j]


def field_rows(f):
    for j, t in enumerate(f.times):
        for x, v in zip(f.edges, f.values[j]):
            yield t, x, v
