"""Plot-ready result tables: CSV with a units row plus a JSON sidecar."""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__

__all__ = ["ResultTable", "canonical_json", "config_hash", "format_value"]


def canonical_json(obj) -> str:
    """Key-sorted, whitespace-free JSON used for hashing."""
    return json.dumps(_plain(obj), sort_keys=True, separators=(",", ":"), allow_nan=True)


def config_hash(config: dict) -> str:
    """SHA-256 of the canonical serialization of ``config``."""
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()


def format_value(x) -> str:
    """Scientific notation with 12 significant digits."""
    return f"{float(x):.11e}"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


@dataclass
class ResultTable:
    """Rectangular numeric table with one unit per column.

    Parameters
    ----------
    columns, units : sequence of str
    rows : array_like, shape (m, len(columns))
    metadata : dict
        Written to the JSON sidecar next to ``summary``.
    summary : dict
        Extracted scalars.
    """

    columns: tuple
    units: tuple
    rows: np.ndarray
    metadata: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)

    def __post_init__(self):
        self.columns = tuple(self.columns)
        self.units = tuple(self.units)
        if len(self.columns) != len(self.units):
            raise ValueError("one unit per column is required")
        rows = np.asarray(self.rows, dtype=float)
        if rows.size == 0:
            rows = rows.reshape(0, len(self.columns))
        if rows.ndim != 2 or rows.shape[1] != len(self.columns):
            raise ValueError("rows must have shape (m, len(columns))")
        self.rows = rows

    def __len__(self):
        return self.rows.shape[0]

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    def csv_text(self) -> str:
        lines = [",".join(self.columns), ",".join(self.units)]
        lines += [",".join(format_value(x) for x in r) for r in self.rows]
        return "\n".join(lines) + "\n"

    def sidecar(self) -> dict:
        return _plain(
            {"columns": list(self.columns), "units": list(self.units), "rows": len(self),
             **self.metadata, "summary": self.summary}
        )

    def write(self, out_dir, stem: str) -> tuple:
        """Write ``<stem>.csv`` and ``<stem>.json``; returns both paths."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path, json_path = out / f"{stem}.csv", out / f"{stem}.json"
        csv_path.write_text(self.csv_text(), encoding="utf-8")
        json_path.write_text(json.dumps(self.sidecar(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return csv_path, json_path

    @classmethod
    def read(cls, csv_path) -> "ResultTable":
        """Read a table written by :meth:`write`, with its sidecar if present."""
        p = Path(csv_path)
        with p.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        columns, units = rows[0], rows[1]
        data = np.array([[float(x) for x in r] for r in rows[2:]], dtype=float)
        meta, summary = {}, {}
        side = p.with_suffix(".json")
        if side.exists():
            meta = json.loads(side.read_text(encoding="utf-8"))
            summary = meta.pop("summary", {})
            for k in ("columns", "units", "rows"):
                meta.pop(k, None)
        return cls(columns, units, data.reshape(-1, len(columns)), meta, summary)


def metadata(config: dict, seed: int, command: str) -> dict:
    """Sidecar header: toolkit version, config hash and seed."""
    return {"toolkit_version": __version__, "config_hash": config_hash(config), "seed": int(seed), "command": command}
