"""CSV / JSON report files.

All text files are UTF-8 with LF endings and are written atomically
(temporary file in the target directory, then rename).
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .evaluation import RocCurve
from .experiments import DETECTORS


def atomic_write_bytes(path, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def _fmt(x: float) -> str:
    # repr() is the shortest string that parses back to the same double
    return repr(float(x))


def curve_csv(curve: RocCurve) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["threshold", "fpr", "tpr"])
    for t, f, p in zip(curve.thresholds, curve.fpr, curve.tpr):
        w.writerow([_fmt(t), _fmt(f), _fmt(p)])
    return buf.getvalue()


def write_curve_csv(curve: RocCurve, path) -> None:
    atomic_write_text(path, curve_csv(curve))


def read_curve_csv(path) -> RocCurve:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    cols = {k: np.array([float(r[k]) for r in rows]) for k in ("threshold", "fpr", "tpr")}
    return RocCurve(cols["threshold"], cols["fpr"], cols["tpr"])


def rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


@dataclass
class AucReport:
    """AUC per (image id, detector), laid out as images x detectors."""

    aucs: dict[tuple[str, str], float] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def add(self, image_id: str, detector: str, value: float) -> None:
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"AUC out of range for {image_id}/{detector}: {value}")
        self.aucs[(image_id, detector)] = float(value)

    def image_ids(self) -> list[str]:
        return sorted({i for i, _ in self.aucs})

    def detectors(self) -> list[str]:
        present = {d for _, d in self.aucs}
        return [d for d in DETECTORS if d in present] + sorted(present - set(DETECTORS))

    def get(self, image_id: str, detector: str) -> float | None:
        return self.aucs.get((image_id, detector))

    def table(self) -> tuple[list[str], list[list]]:
        dets = self.detectors()
        rows = []
        for i in self.image_ids():
            rows.append([i] + [self.get(i, d) if self.get(i, d) is not None else "" for d in dets])
        return ["image"] + dets, rows

    def to_csv(self) -> str:
        return rows_csv(*self.table())

    def to_json(self) -> str:
        doc = {
            "metadata": self.metadata,
            "auc": {i: {d: v for (ii, d), v in self.aucs.items() if ii == i}
                    for i in self.image_ids()},
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "AucReport":
        doc = json.loads(text)
        rep = cls(metadata=doc.get("metadata", {}))
        for i, row in doc["auc"].items():
            for d, v in row.items():
                rep.add(i, d, v)
        return rep

    def format_table(self, digits: int = 2) -> str:
        header, rows = self.table()
        cells = [header] + [[r[0]] + [f"{v:.{digits}f}" if v != "" else "-" for v in r[1:]]
                            for r in rows]
        widths = [max(len(str(row[c])) for row in cells) for c in range(len(header))]
        return "\n".join("  ".join(str(v).ljust(w) for v, w in zip(row, widths)).rstrip()
                         for row in cells) + "\n"


def run_metadata(command: str, **params) -> dict:
    return {
        "command": command,
        "tool": "edgebench",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "parameters": params,
    }
