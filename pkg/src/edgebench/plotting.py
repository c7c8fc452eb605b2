"""Figures written to disk with matplotlib (Agg backend).

SVG output is made byte-reproducible: fixed hash salt and no date stamp.
"""

from __future__ import annotations

import io
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .reports import atomic_write_bytes  # noqa: E402

RC = {
    "svg.hashsalt": "edgebench",
    "svg.fonttype": "none",
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.2,
}

MAX_PLOT_POINTS = 2000


def thin(fpr, tpr, max_points: int = MAX_PLOT_POINTS):
    """Subsample a curve for drawing; endpoints and the corners are kept."""
    fpr = np.asarray(fpr)
    tpr = np.asarray(tpr)
    n = len(fpr)
    if n <= max_points:
        return fpr, tpr
    idx = np.unique(np.r_[np.linspace(0, n - 1, max_points).round().astype(int), 0, n - 1])
    return fpr[idx], tpr[idx]


def _save(fig, path) -> None:
    path = Path(path)
    fmt = path.suffix.lstrip(".") or "svg"
    meta = {"Date": None} if fmt in ("svg", "pdf") else {}
    buf = io.BytesIO()
    fig.savefig(buf, format=fmt, metadata=meta)
    plt.close(fig)
    atomic_write_bytes(path, buf.getvalue())


def plot_roc(curves, path, title: str = "") -> None:
    """Overlay ROC curves (``{label: RocCurve}``) on the unit square with the chance line."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5, 4.5))
        ax.plot([0, 1], [0, 1], ls="--", color="0.6", lw=0.8, label="chance")
        for label, curve in curves.items():
            f, t = thin(curve.fpr, curve.tpr)
            ax.plot(f, t, label=f"{label} (AUC {curve.auc:.2f})")
        ax.set_xlim(0, 1)
        ax.set_ylim(0, 1)
        ax.set_aspect("equal")
        ax.set_xlabel("False positive rate")
        ax.set_ylabel("True positive rate")
        if title:
            ax.set_title(title)
        ax.legend(loc="lower right", frameon=False)
        fig.tight_layout()
        _save(fig, path)


def plot_auc_series(xs, aucs, path, xlabel: str, title: str = "") -> None:
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(4, 3))
        ax.plot(list(xs), list(aucs), marker="o")
        ax.set_xlabel(xlabel)
        ax.set_ylabel("AUC")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        _save(fig, path)


def plot_auc_table(report, path, title: str = "") -> None:
    """Grouped bars: one group per image, one bar per detector."""
    header, rows = report.table()
    dets = header[1:]
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(1.2 + 1.4 * max(len(rows), 1), 3.5))
        width = 0.8 / max(len(dets), 1)
        for k, det in enumerate(dets):
            ys = [r[1 + k] if r[1 + k] != "" else np.nan for r in rows]
            ax.bar(np.arange(len(rows)) + k * width - 0.4 + width / 2, ys, width, label=det)
        ax.set_xticks(np.arange(len(rows)))
        ax.set_xticklabels([r[0] for r in rows])
        ax.set_ylim(0, 1)
        ax.set_ylabel("AUC")
        if title:
            ax.set_title(title)
        ax.legend(ncol=3, frameon=False, loc="lower center")
        fig.tight_layout()
        _save(fig, path)


def save_edge_map(edges, path) -> None:
    """8-bit raster, edge = 255."""
    from PIL import Image

    raster = np.where(np.asarray(edges, dtype=bool), 255, 0).astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(raster, "L").save(buf, format="PNG")
    atomic_write_bytes(path, buf.getvalue())
