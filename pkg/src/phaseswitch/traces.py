"""Tagged numeric series and their CSV/JSON export."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import numpy as np


@dataclass
class TraceSeries:
    """An ``(x, y[, sigma_y])`` series with units, a tag and per-point flags.

    ``flags`` marks points whose value is ill-defined (for example a phase
    at vanishing amplitude); it is all-False when nothing was flagged.
    """

    x: np.ndarray
    y: np.ndarray
    tag: str = ""
    x_unit: str = ""
    y_unit: str = ""
    sigma_y: Optional[np.ndarray] = None
    flags: np.ndarray = field(default=None)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y)
        if self.x.shape != self.y.shape or self.x.ndim != 1:
            raise ValueError("x and y must be 1-d arrays of equal length")
        if self.sigma_y is not None:
            self.sigma_y = np.asarray(self.sigma_y, dtype=float)
            if self.sigma_y.shape != self.x.shape:
                raise ValueError("sigma_y must match x")
        if self.flags is None:
            self.flags = np.zeros(self.x.shape, dtype=bool)
        else:
            self.flags = np.asarray(self.flags, dtype=bool)

    def __len__(self):
        return self.x.size

    def to_records(self) -> list[dict]:
        rows = []
        for i in range(len(self)):
            row = {"tag": self.tag, "x": _num(self.x[i]), "y": _num(self.y[i])}
            if self.sigma_y is not None:
                row["sigma_y"] = _num(self.sigma_y[i])
            row["x_unit"] = self.x_unit
            row["y_unit"] = self.y_unit
            row["flag"] = int(self.flags[i])
            rows.append(row)
        return rows


def _num(v):
    v = complex(v) if np.iscomplexobj(v) else float(v)
    if isinstance(v, complex):
        return v.real if v.imag == 0 else repr(v)
    return v


def _fmt(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def traces_to_csv(traces: Iterable[TraceSeries]) -> str:
    """Long-format CSV: one row per point, columns
    ``tag, x, y, sigma_y, x_unit, y_unit, flag``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["tag", "x", "y", "sigma_y", "x_unit", "y_unit", "flag"])
    for tr in traces:
        for row in tr.to_records():
            writer.writerow([row["tag"], _fmt(row["x"]), _fmt(row["y"]),
                             _fmt(row["sigma_y"]) if "sigma_y" in row else "",
                             row["x_unit"], row["y_unit"], row["flag"]])
    return buf.getvalue()


def traces_to_json(traces: Iterable[TraceSeries]) -> str:
    payload = []
    for tr in traces:
        entry = {
            "tag": tr.tag, "x_unit": tr.x_unit, "y_unit": tr.y_unit,
            "x": [float(v) for v in tr.x],
            "y": [_num(v) for v in tr.y],
            "flags": [int(f) for f in tr.flags],
        }
        if tr.sigma_y is not None:
            entry["sigma_y"] = [float(v) for v in tr.sigma_y]
        payload.append(entry)
    return json.dumps(payload, indent=1) + "\n"


def write_traces(traces: Iterable[TraceSeries], path: str | Path,
                 fmt: str = "csv") -> Path:
    traces = list(traces)
    text = traces_to_csv(traces) if fmt == "csv" else traces_to_json(traces)
    path = Path(path)
    path.write_text(text)
    return path


def read_traces(path: str | Path) -> list[TraceSeries]:
    """Inverse of :func:`traces_to_csv`; rows are grouped by tag in order."""
    groups: dict[str, dict] = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            grp = groups.setdefault(row["tag"], {
                "x": [], "y": [], "s": [], "f": [],
                "x_unit": row["x_unit"], "y_unit": row["y_unit"]})
            grp["x"].append(float(row["x"]))
            grp["y"].append(float(row["y"]))
            grp["s"].append(row["sigma_y"])
            grp["f"].append(int(row["flag"]))
    out = []
    for tag, grp in groups.items():
        sigma = None
        if all(s != "" for s in grp["s"]):
            sigma = [float(s) for s in grp["s"]]
        out.append(TraceSeries(grp["x"], grp["y"], tag=tag,
                               x_unit=grp["x_unit"], y_unit=grp["y_unit"],
                               sigma_y=sigma, flags=grp["f"]))
    return out
