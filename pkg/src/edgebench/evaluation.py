"""Confusion counts, ROC curves and AUC, plus the Canny and LoG sweeps."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .detectors import canny_gradient, hysteresis, laplacian_sobel_score, non_max_suppression
from .kernels import GaussianParams, log_kernel


class DegenerateGroundTruthError(ValueError):
    """Ground truth has no edge pixels or no non-edge pixels."""


class ConfusionCounts(NamedTuple):
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def confusion(pred, gt) -> ConfusionCounts:
    pred = np.asarray(pred, dtype=bool)
    gt = np.asarray(gt, dtype=bool)
    if pred.shape != gt.shape:
        raise ValueError(f"confusion: shape mismatch {pred.shape} vs {gt.shape}")
    tp = int(np.count_nonzero(pred & gt))
    fp = int(np.count_nonzero(pred & ~gt))
    fn = int(np.count_nonzero(~pred & gt))
    return ConfusionCounts(tp, fp, pred.size - tp - fp - fn, fn)


def rates(c: ConfusionCounts) -> tuple[float, float, float]:
    """``(tpr, tnr, fpr)``.

    An empty positive class gives ``tpr = 0``; an empty negative class gives
    ``tnr = 1`` and ``fpr = 0``.
    """
    pos = c.tp + c.fn
    neg = c.tn + c.fp
    tpr = c.tp / pos if pos else 0.0
    if not neg:
        return tpr, 1.0, 0.0
    return tpr, c.tn / neg, c.fp / neg


def auc(fpr, tpr) -> float:
    """Trapezoidal area under points already sorted by FPR."""
    fpr = np.asarray(fpr, dtype=np.float64)
    tpr = np.asarray(tpr, dtype=np.float64)
    if fpr.shape != tpr.shape or fpr.ndim != 1:
        raise ValueError("fpr and tpr must be 1D sequences of equal length")
    if np.any(np.diff(fpr) < 0):
        raise ValueError("ROC points must be sorted by ascending FPR")
    if fpr.size < 2:
        return 0.0
    return float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2))


@dataclass(frozen=True)
class RocCurve:
    """ROC points ordered by ascending FPR, from (0, 0) to (1, 1).

    ``thresholds[i]`` is the decision value that produced point ``i``; the
    endpoints use ``inf`` (nothing predicted) and ``-inf`` (everything).
    """

    thresholds: np.ndarray
    fpr: np.ndarray
    tpr: np.ndarray

    @property
    def auc(self) -> float:
        return auc(self.fpr, self.tpr)

    @property
    def points(self) -> list[tuple[float, float, float]]:
        return list(zip(self.thresholds.tolist(), self.fpr.tolist(), self.tpr.tolist()))

    def __len__(self) -> int:
        return len(self.fpr)

    @classmethod
    def from_points(cls, points) -> "RocCurve":
        """Sort ``(threshold, fpr, tpr)`` triples and close the curve at both ends."""
        pts = sorted(points, key=lambda p: (p[1], p[2]))
        if not pts or (pts[0][1], pts[0][2]) != (0.0, 0.0):
            pts.insert(0, (np.inf, 0.0, 0.0))
        if (pts[-1][1], pts[-1][2]) != (1.0, 1.0):
            pts.append((-np.inf, 1.0, 1.0))
        t, f, p = (np.array(col, dtype=np.float64) for col in zip(*pts))
        return cls(t, f, p)


def _class_sizes(gt: np.ndarray) -> tuple[int, int]:
    pos = int(np.count_nonzero(gt))
    neg = gt.size - pos
    if pos == 0 or neg == 0:
        raise DegenerateGroundTruthError(
            f"ground truth needs both edge and non-edge pixels (edges={pos}, non-edges={neg})"
        )
    return pos, neg


def roc_from_scores(scores, gt) -> RocCurve:
    """Exact ROC of ``scores >= t`` over every distinct score value ``t``.

    Binary maps work too: a {0, 1} score map yields the two-segment curve of a
    single operating point.
    """
    s = np.asarray(scores, dtype=np.float64).ravel()
    g = np.asarray(gt, dtype=bool)
    if np.shape(scores) != g.shape:
        raise ValueError(f"roc_from_scores: shape mismatch {np.shape(scores)} vs {g.shape}")
    if not np.all(np.isfinite(s)):
        raise ValueError("scores must be finite")
    g = g.ravel()
    pos, neg = _class_sizes(g)

    order = np.argsort(-s, kind="stable")
    s_sorted = s[order]
    tp_cum = np.cumsum(g[order])
    # last index of each run of equal scores
    ends = np.flatnonzero(np.r_[s_sorted[1:] != s_sorted[:-1], True])
    tp = tp_cum[ends]
    fp = (ends + 1) - tp
    thresholds = np.r_[np.inf, s_sorted[ends]]
    tpr = np.r_[0.0, tp / pos]
    fpr = np.r_[0.0, fp / neg]
    return RocCurve(thresholds, fpr, tpr)


def canny_roc(img, g, gt, numtrials: int = 80, nms_enabled: bool = False) -> RocCurve:
    """ROC of the Canny pipeline with ``high = 2 * low``.

    ``low`` takes ``numtrials`` evenly spaced values in ``[0, maxmag / 2]``;
    trials with ``high >= maxmag`` are skipped rather than recorded.
    """
    if numtrials < 2:
        raise ValueError("numtrials must be >= 2")
    gt = np.asarray(gt, dtype=bool)
    _class_sizes(gt)
    grad = canny_gradient(img, g)
    if grad.mag.shape != gt.shape:
        raise ValueError(f"canny_roc: shape mismatch {grad.mag.shape} vs {gt.shape}")
    maxmag = grad.maxmag
    s = non_max_suppression(grad) if nms_enabled else grad.mag

    points = []
    for low in np.linspace(0, maxmag / 2, numtrials):
        high = low * 2
        if high < maxmag:
            tpr, _, fpr = rates(confusion(hysteresis(s, low, high), gt))
            points.append((float(low), fpr, tpr))
    return RocCurve.from_points(points)


def _map(fn, items, jobs: int):
    if jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def log_magnitude_roc(img, gt, p: GaussianParams) -> RocCurve:
    return roc_from_scores(laplacian_sobel_score(img, log_kernel(p)), gt)


def sweep_log_sigma(img, gt, sigmas: Sequence[float], stepsize: int,
                    jobs: int = 1) -> list[tuple[float, RocCurve]]:
    if not sigmas:
        raise ValueError("sigma list is empty")
    curves = _map(lambda sg: log_magnitude_roc(img, gt, GaussianParams(sg, stepsize)),
                  list(sigmas), jobs)
    return list(zip(sigmas, curves))


def sweep_log_stepsize(img, gt, sigma: float, stepsizes: Sequence[int],
                       jobs: int = 1) -> list[tuple[int, RocCurve]]:
    if not stepsizes:
        raise ValueError("stepsize list is empty")
    curves = _map(lambda st: log_magnitude_roc(img, gt, GaussianParams(sigma, st)),
                  list(stepsizes), jobs)
    return list(zip(stepsizes, curves))
