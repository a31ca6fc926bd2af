"""Configuration files and result tables.

Text format::

    3 4
    0.0 0.0 1.0
    ...
    # kind: simplex

Line 1 holds ``d n``; the next ``n`` lines hold ``d`` coordinates written
with 17 significant digits. Trailing ``# key: value`` lines carry optional
metadata. A ``.json`` path selects the structured equivalent
``{"d": .., "n": .., "vectors": [[..], ..], "metadata": {..}}``.
"""

from __future__ import annotations

import csv
import json
import logging
import os
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .sphere import Configuration

log = logging.getLogger(__name__)

WARN_DEVIATION = 1e-12
MAX_DEVIATION = 1e-9

CSV_FIELDS = ("d", "n", "k", "method", "value", "seed", "iterations", "runtime_ms", "certificate")


class ConfigFormatError(ValueError):
    """A configuration file is malformed or its rows are not unit vectors."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def dumps_text(config: Configuration, metadata: dict | None = None) -> str:
    lines = [f"{config.dim} {config.n}"]
    lines += [" ".join(_fmt(x) for x in row) for row in config.vectors]
    for key, val in (metadata or {}).items():
        lines.append(f"# {key}: {val}")
    return "\n".join(lines) + "\n"


def dumps_json(config: Configuration, metadata: dict | None = None) -> str:
    doc = {
        "d": config.dim,
        "n": config.n,
        # repr-exact floats; json round-trips doubles
        "vectors": [[float(x) for x in row] for row in config.vectors],
        "metadata": metadata or {},
    }
    return json.dumps(doc, indent=1) + "\n"


def _checked(rows: np.ndarray, source: str) -> Configuration:
    norms = np.linalg.norm(rows, axis=1)
    dev = np.abs(norms - 1.0)
    worst = float(dev.max()) if dev.size else 0.0
    if worst > MAX_DEVIATION:
        i = int(np.argmax(dev))
        raise ConfigFormatError(f"{source}: row {i + 1} has norm {norms[i]!r}, more than {MAX_DEVIATION} from 1")
    if worst > WARN_DEVIATION:
        log.warning("%s: renormalizing rows (max norm deviation %.3g)", source, worst)
        return Configuration(rows)
    # within 1e-12: keep the coordinates exactly as written
    return Configuration.from_unit_rows(rows, WARN_DEVIATION)


def loads_text(text: str, source: str = "<text>") -> tuple[Configuration, dict]:
    meta = {}
    body = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].partition(":")
            if key.strip():
                meta[key.strip()] = val.strip()
            continue
        body.append(line)
    if not body:
        raise ConfigFormatError(f"{source}: empty file")
    try:
        d, n = (int(x) for x in body[0].split())
    except ValueError:
        raise ConfigFormatError(f"{source}: first line must be 'd n', got {body[0]!r}") from None
    if d < 1 or n < 1:
        raise ConfigFormatError(f"{source}: need d, n >= 1")
    if len(body) - 1 != n:
        raise ConfigFormatError(f"{source}: header promises {n} rows, found {len(body) - 1}")
    try:
        rows = np.array([[float(x) for x in line.split()] for line in body[1:]], dtype=float)
    except ValueError as exc:
        raise ConfigFormatError(f"{source}: {exc}") from None
    if rows.shape != (n, d):
        raise ConfigFormatError(f"{source}: every row must have {d} coordinates")
    return _checked(rows, source), meta


def loads_json(text: str, source: str = "<json>") -> tuple[Configuration, dict]:
    try:
        doc = json.loads(text)
        rows = np.array(doc["vectors"], dtype=float)
        d = int(doc.get("d", rows.shape[1] if rows.ndim == 2 else 0))
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        raise ConfigFormatError(f"{source}: {exc}") from None
    if rows.ndim != 2 or rows.shape[1] != d or rows.shape[0] < 1:
        raise ConfigFormatError(f"{source}: vectors must be an n x {d} array")
    if "n" in doc and int(doc["n"]) != rows.shape[0]:
        raise ConfigFormatError(f"{source}: n={doc['n']} but {rows.shape[0]} vectors given")
    return _checked(rows, source), dict(doc.get("metadata") or {})


def save_config(path, config: Configuration, metadata: dict | None = None) -> None:
    path = Path(path)
    text = dumps_json(config, metadata) if path.suffix == ".json" else dumps_text(config, metadata)
    path.write_text(text)


def load_config(path) -> tuple[Configuration, dict]:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return loads_json(text, str(path))
    return loads_text(text, str(path))


@dataclass
class ResultRow:
    d: int
    n: int
    k: int
    method: str
    value: float | str
    seed: int = 0
    iterations: int = 0
    runtime_ms: float = 0.0
    certificate: str = ""

    def as_csv(self) -> dict:
        row = asdict(self)
        if isinstance(self.value, float):
            row["value"] = _fmt(self.value)
        row["runtime_ms"] = f"{self.runtime_ms:.3f}"
        return row


def write_rows(path, rows, append: bool = False) -> None:
    path = Path(path)
    fresh = not append or not path.exists() or os.path.getsize(path) == 0
    with open(path, "a" if append else "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
        if fresh:
            writer.writeheader()
        for row in rows:
            writer.writerow(row.as_csv())


def read_rows(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
