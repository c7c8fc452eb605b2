"""Edge-detection pipelines.

Each detector comes as a score-map producer (non-negative float map, for ROC
sweeps) and, where it makes sense, a binary edge-map producer. The Canny
pipeline is written out step by step so non-maximum suppression can be
switched off.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .image import as_image, convolve_same, magnitude
from .kernels import GaussianParams, gaussian_kernel, sobel_pair


def gradient_score(img, pair) -> np.ndarray:
    """Convolve with both kernels of ``pair`` and return ``|gx| + |gy|``."""
    kx, ky = pair
    return magnitude(convolve_same(img, kx), convolve_same(img, ky))


# -- zero crossing ----------------------------------------------------------

def zero_cross_intensity(img) -> np.ndarray:
    """Zero crossings that keep the response strength.

    A pixel is marked with ``|img|`` when it is strictly positive and one of
    its lower, lower-right or right neighbours is strictly negative, or the
    other way round. The last row and column are never marked, and exact
    zeros never are either.
    """
    img = as_image(img)
    out = np.zeros_like(img)
    c = img[:-1, :-1]
    down, diag, right = img[1:, :-1], img[1:, 1:], img[:-1, 1:]
    pos = (c > 0) & ((down < 0) | (diag < 0) | (right < 0))
    neg = (c < 0) & ((down > 0) | (diag > 0) | (right > 0))
    hit = pos | neg
    out[:-1, :-1][hit] = np.abs(c[hit])
    return out


def zero_cross_binary(img) -> np.ndarray:
    return zero_cross_intensity(img) > 0


def laplacian_sobel_score(img, lap) -> np.ndarray:
    """Sobel magnitude of a Laplacian (or LoG) response."""
    return gradient_score(convolve_same(img, lap), sobel_pair())


# -- Canny ------------------------------------------------------------------

class GradientField(NamedTuple):
    mag: np.ndarray
    direction: np.ndarray  # atan2(gy, gx), radians

    @property
    def maxmag(self) -> float:
        return float(self.mag.max())


@dataclass(frozen=True)
class CannyParams:
    gauss: GaussianParams = field(default_factory=lambda: GaussianParams(1.0, 4))
    low_threshold: float = 10.0
    high_threshold: float = 20.0
    nms_enabled: bool = True

    def __post_init__(self):
        if self.low_threshold < 0 or self.high_threshold < 0:
            raise ValueError("hysteresis thresholds must be non-negative")
        if self.low_threshold > self.high_threshold:
            raise ValueError(
                f"low threshold {self.low_threshold} exceeds high threshold {self.high_threshold}"
            )


def canny_gradient(img, g) -> GradientField:
    smoothed = convolve_same(img, g)
    sx, sy = sobel_pair()
    gx = convolve_same(smoothed, sx)
    gy = convolve_same(smoothed, sy)
    return GradientField(magnitude(gx, gy), np.arctan2(gy, gx))


def non_max_suppression(f: GradientField) -> np.ndarray:
    """Keep interior pixels that are >= both neighbours across the gradient.

    Directions are folded into [0, 180) degrees and quantized into four bins.
    The one-pixel border is always zero.
    """
    mag = np.asarray(f.mag, dtype=np.float64)
    deg = np.asarray(f.direction, dtype=np.float64) * 180 / np.pi
    deg = np.where(deg < 0, deg + 180, deg)
    # atan2 == pi (or a tiny negative angle rounding up) lands on exactly 180
    deg[deg >= 180] = 0.0

    out = np.zeros_like(mag)
    rows, cols = mag.shape
    if rows < 3 or cols < 3:
        return out

    d = deg[1:-1, 1:-1]
    m = mag[1:-1, 1:-1]

    def at(di, dj):
        return mag[1 + di:rows - 1 + di, 1 + dj:cols - 1 + dj]

    horiz = ((d >= 0) & (d < 22.5)) | ((d >= 157.5) & (d < 180))
    diag_a = (d >= 22.5) & (d < 67.5)
    vert = (d >= 67.5) & (d < 112.5)
    diag_b = (d >= 112.5) & (d < 157.5)

    q = np.select([horiz, diag_a, vert, diag_b], [at(0, 1), at(1, -1), at(1, 0), at(-1, -1)])
    r = np.select([horiz, diag_a, vert, diag_b], [at(0, -1), at(-1, 1), at(-1, 0), at(1, 1)])
    keep = (m >= q) & (m >= r)
    out[1:-1, 1:-1] = np.where(keep, m, 0.0)
    return out


# 8-neighbourhood in bit order; bit k of a pattern is NEIGHBOURS[k]
NEIGHBOURS = ((-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1))


def _ring_components(pattern: int) -> int:
    on = [k for k in range(8) if pattern >> k & 1]
    seen = set()
    count = 0
    for start in on:
        if start in seen:
            continue
        count += 1
        stack = [start]
        seen.add(start)
        while stack:
            a = stack.pop()
            ya, xa = NEIGHBOURS[a]
            for b in on:
                yb, xb = NEIGHBOURS[b]
                if b not in seen and max(abs(ya - yb), abs(xa - xb)) == 1:
                    seen.add(b)
                    stack.append(b)
    return count


BRIDGE_LUT = np.array([_ring_components(p) >= 2 for p in range(256)], dtype=bool)


def bridge(b) -> np.ndarray:
    """Set 0-pixels whose 1-neighbours fall into two or more 8-connected groups.

    Connectivity is judged inside the 3x3 neighbourhood with the centre
    removed; pixels outside the image count as 0. One simultaneous pass.
    """
    b = np.asarray(b, dtype=bool)
    rows, cols = b.shape
    padded = np.pad(b, 1)
    code = np.zeros((rows, cols), dtype=np.uint8)
    for k, (dy, dx) in enumerate(NEIGHBOURS):
        code |= padded[1 + dy:1 + dy + rows, 1 + dx:1 + dx + cols].astype(np.uint8) << k
    return b | BRIDGE_LUT[code]


def hysteresis(s, low: float, high: float) -> np.ndarray:
    """``bridge(s > high) & (s > low)``, both comparisons strict."""
    if low > high:
        raise ValueError(f"low threshold {low} exceeds high threshold {high}")
    s = np.asarray(s, dtype=np.float64)
    return bridge(s > high) & (s > low)


def canny_edges(img, g, low: float, high: float, nms: bool = True,
                grad: GradientField | None = None) -> tuple[np.ndarray, float]:
    """Canny with an explicit Gaussian mask; returns ``(edges, maxmag)``.

    ``maxmag`` is taken before suppression. Pass a precomputed
    ``grad`` to skip the smoothing and Sobel steps.
    """
    if grad is None:
        grad = canny_gradient(img, g)
    s = non_max_suppression(grad) if nms else grad.mag
    return hysteresis(s, low, high), grad.maxmag


def canny(img, p: CannyParams) -> tuple[np.ndarray, float]:
    return canny_edges(img, gaussian_kernel(p.gauss), p.low_threshold,
                       p.high_threshold, p.nms_enabled)


def auto_thresholds(mag, non_edge_fraction: float = 0.7, ratio: float = 0.4,
                    bins: int = 64) -> tuple[float, float]:
    """Histogram-based (low, high) pair for a single binary Canny run.

    ``high`` is the upper edge of the first of ``bins`` magnitude bins at which
    the cumulative count exceeds ``non_edge_fraction`` of all pixels;
    ``low = ratio * high``. Used only for the binary "initial" ROC.
    """
    mag = np.asarray(mag, dtype=np.float64)
    top = float(mag.max())
    if top <= 0:
        return 0.0, 0.0
    counts, edges = np.histogram(mag, bins=bins, range=(0.0, top))
    idx = int(np.argmax(np.cumsum(counts) > non_edge_fraction * mag.size))
    high = float(edges[idx + 1])
    return ratio * high, high
