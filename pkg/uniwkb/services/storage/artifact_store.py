"""
artifact_store.py
-----------------
Single source of truth for every filesystem path the CLI writes to:

data/
└── artifacts/
    ├── runs.jsonl                        # one timestamped record per CLI run
    ├── spectrum/
    │   └── <potential>_spectrum_<N>.<csv|json>
    ├── transmit/
    ├── wavefunction/
    ├── error-control/
    └── compare/

All functions create directories on demand.  Artifacts are deterministic apart
from their ``created_at`` stamp, which strip_timestamp() removes.
"""
from __future__ import annotations

import csv
import json
import math
import re
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, List, Mapping, Sequence

import numpy as np

from uniwkb import __version__
from uniwkb.core.config import ARTIFACTS_DIR, CSV_SIGNIFICANT_DIGITS
from uniwkb.core.errors import ValidationError

ARTIFACT_KINDS = ("spectrum", "transmit", "wavefunction", "error-control", "compare")
FORMATS = ("csv", "json")
UNITS = "m = ħ = 1 unless given in params; lengths in x, energies in V"


# ── Paths ─────────────────────────────────────────────────────────────────────

def _safe(name: str) -> str:
    """Strip characters that are unsafe in file names."""
    return re.sub(r"[^\w\-.]", "_", name)


def get_artifacts_root() -> Path:
    p = Path(ARTIFACTS_DIR)
    p.mkdir(parents=True, exist_ok=True)
    return p


def get_artifacts_dir(kind: str) -> Path:
    """
    kind must be one of: 'spectrum', 'transmit', 'wavefunction', 'error-control', 'compare'
    """
    if kind not in ARTIFACT_KINDS:
        raise ValidationError(f"artifact kind must be one of {list(ARTIFACT_KINDS)}, got {kind!r}")
    p = get_artifacts_root() / kind
    p.mkdir(parents=True, exist_ok=True)
    return p


def get_runs_jsonl() -> Path:
    return get_artifacts_root() / "runs.jsonl"


def next_artifact_path(kind: str, potential: str, fmt: str) -> Path:
    """Auto-number artifacts: morse_spectrum_1.csv, morse_spectrum_2.csv, …"""
    if fmt not in FORMATS:
        raise ValidationError(f"format must be one of {list(FORMATS)}, got {fmt!r}")
    d = get_artifacts_dir(kind)
    prefix = f"{_safe(potential)}_{kind}"
    existing = sorted(d.glob(f"{prefix}_*.{fmt}"))
    n = len(existing) + 1
    return d / f"{prefix}_{n}.{fmt}"


# ── Value formatting ──────────────────────────────────────────────────────────

def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _meta(meta: Mapping[str, object]) -> dict:
    full = {"version": __version__, "units": UNITS}
    full.update(meta)
    full["created_at"] = _now()
    return full


def format_number(value) -> str:
    """17 significant digits, '.' separator, independent of the locale."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (complex, np.complexfloating)):
        return f"{format_number(value.real)}{'+' if value.imag >= 0 else '-'}{format_number(abs(value.imag))}j"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{CSV_SIGNIFICANT_DIGITS}g}"
    return "" if value is None else str(value)


def _jsonable(value):
    """Plain JSON types; non-finite floats become null, complex numbers {re, im}."""
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": _jsonable(float(value.real)), "im": _jsonable(float(value.imag))}
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


# ── Writers ───────────────────────────────────────────────────────────────────

def write_csv_artifact(path: Path, meta: Mapping[str, object], columns: Sequence[str],
                       rows: Iterable[Sequence[object]]) -> Path:
    """'#'-prefixed key=value header block, then a column line and the rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        for key, value in _meta(meta).items():
            if isinstance(value, Mapping):
                value = ",".join(f"{k}={format_number(v)}" for k, v in value.items())
            elif isinstance(value, (list, tuple)):
                value = ",".join(format_number(v) for v in value)
            else:
                value = format_number(value)
            f.write(f"# {key}={value}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_number(v) for v in row])
    return path


def write_json_artifact(path: Path, meta: Mapping[str, object], data: List[Mapping[str, object]]) -> Path:
    """{"meta": {...}, "data": [...]} with indent=2."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"meta": _jsonable(_meta(meta)), "data": _jsonable(list(data))}
    path.write_text(json.dumps(payload, indent=2, allow_nan=False), encoding="utf-8")
    return path


def read_json_artifact(path: Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def read_csv_artifact(path: Path):
    """(meta lines as a dict of strings, column names, rows of strings)."""
    meta, rows = {}, []
    with Path(path).open("r", encoding="utf-8", newline="") as f:
        body = []
        for line in f:
            if line.startswith("# "):
                key, _, value = line[2:].rstrip("\n").partition("=")
                meta[key] = value
            else:
                body.append(line)
    reader = csv.reader(body)
    columns = next(reader, [])
    rows = [row for row in reader if row]
    return meta, columns, rows


_TIMESTAMP_PATTERNS = (
    re.compile(r'^# created_at=.*\n', re.MULTILINE),
    re.compile(r'\s*"created_at": "[^"]*",?'),
)


def strip_timestamp(text: str) -> str:
    """Drop created_at stamps so two runs can be compared byte for byte."""
    for pattern in _TIMESTAMP_PATTERNS:
        text = pattern.sub("", text)
    return text


# ── Run log (runs.jsonl) ──────────────────────────────────────────────────────

def append_run_record(record: Mapping[str, object]) -> None:
    """Append one run as a JSON line to runs.jsonl."""
    entry = dict(_jsonable(record))
    entry["timestamp"] = _now()
    path = get_runs_jsonl()
    with path.open("a", encoding="utf-8") as f:
        f.write(json.dumps(entry) + "\n")


def read_run_records() -> List[dict]:
    """Read all runs from runs.jsonl; returns [] if the file is absent."""
    path = get_runs_jsonl()
    if not path.exists():
        return []
    records = []
    with path.open("r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError:
                    pass
    return records
