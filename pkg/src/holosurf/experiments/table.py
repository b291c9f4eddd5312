"""Result tables and their CSV serialization."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .. import __version__


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


@dataclass
class ResultTable:
    """Rectangular table plus a metadata block written as ``#`` comments."""

    columns: List[str]
    rows: List[tuple] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.metadata.setdefault("artifact_version", __version__)
        for row in self.rows:
            self._check(row)

    def _check(self, row):
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} cells, table has {len(self.columns)} columns")

    def append(self, row: Sequence):
        row = tuple(row)
        self._check(row)
        self.rows.append(row)

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def where(self, **match) -> List[dict]:
        """Rows (as dicts) whose named cells equal the given values."""
        out = []
        for r in self.rows:
            d = dict(zip(self.columns, r))
            if all(d.get(k) == v for k, v in match.items()):
                out.append(d)
        return out

    def to_csv(self, path: Optional[str] = None, include_timing: bool = True) -> str:
        buf = io.StringIO()
        for key, value in self.metadata.items():
            if key == "wall_time_s" and not include_timing:
                continue
            if key == "config":
                for line in str(value).splitlines():
                    buf.write(f"# config: {line}\n")
                continue
            buf.write(f"# {key}: {_fmt(value)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(v) for v in row])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text


def read_csv(text: str) -> ResultTable:
    """Parse CSV written by :meth:`ResultTable.to_csv` (numeric cells become floats)."""
    meta: Dict[str, Any] = {}
    config_lines = []
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            if key == "config":
                config_lines.append(value)
            else:
                meta[key] = value
        elif line:
            body.append(line)
    if config_lines:
        meta["config"] = "\n".join(config_lines) + "\n"
    reader = csv.reader(body)
    columns = next(reader)
    rows = []
    for rec in reader:
        cells = []
        for cell in rec:
            try:
                cells.append(float(cell))
            except ValueError:
                cells.append(cell)
        rows.append(tuple(cells))
    return ResultTable(columns, rows, meta)


def write_matrix_csv(matrix, path: Optional[str] = None) -> str:
    """Row-major complex matrix dump: each cell becomes a ``re,im`` pair."""
    mat = np.asarray(matrix)
    buf = io.StringIO()
    for row in mat:
        cells = []
        for z in row:
            z = complex(z)
            cells.append(f"{z.real!r},{z.imag!r}")
        buf.write(",".join(cells) + "\n")
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def read_matrix_csv(text: str) -> np.ndarray:
    rows = []
    for line in text.strip().splitlines():
        vals = np.array([float(v) for v in line.split(",")])
        rows.append(vals[0::2] + 1j * vals[1::2])
    return np.array(rows)
