"""Image primitives: 'same' convolution, gradient magnitude, luma, thresholding.

Images, score maps and edge maps are plain 2D numpy arrays. Gray images and
score maps are float64 on the 0-255 scale; edge maps are bool.
"""

from __future__ import annotations

import numpy as np

# Rec.601 luma weights
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def as_image(a, name: str = "image") -> np.ndarray:
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 2D array, got shape {arr.shape}")
    return arr


def _same_shape(a: np.ndarray, b: np.ndarray, what: str) -> None:
    if a.shape != b.shape:
        raise ValueError(f"{what}: shape mismatch {a.shape} vs {b.shape}")


def convolve_full(img, kernel) -> np.ndarray:
    """Full 2D convolution, output shape ``(h + kh - 1, w + kw - 1)``."""
    img = as_image(img)
    k = as_image(kernel, "kernel")
    h, w = img.shape
    kh, kw = k.shape
    full = np.zeros((h + kh - 1, w + kw - 1))
    # shift-and-accumulate; kernels are small, images are not
    for a in range(kh):
        for b in range(kw):
            wgt = k[a, b]
            if wgt != 0.0:
                full[a:a + h, b:b + w] += wgt * img
    return full


def convolve_same(img, kernel) -> np.ndarray:
    """2D convolution with zero padding, cropped like MATLAB ``conv2(..., 'same')``.

    The kernel is flipped (true convolution). For a kernel of size ``kh x kw``
    the output at ``(r, c)`` is element ``(r + kh // 2, c + kw // 2)`` of the
    full convolution, which is the crop MATLAB uses for both odd and even
    kernel sizes.
    """
    img = as_image(img)
    k = as_image(kernel, "kernel")
    full = convolve_full(img, k)
    h, w = img.shape
    kh, kw = k.shape
    oy, ox = kh // 2, kw // 2
    return full[oy:oy + h, ox:ox + w].copy()


def magnitude(gx, gy) -> np.ndarray:
    """L1 gradient magnitude ``|gx| + |gy|``."""
    gx = as_image(gx, "gx")
    gy = as_image(gy, "gy")
    _same_shape(gx, gy, "magnitude")
    return np.abs(gx) + np.abs(gy)


def to_grayscale(r, g, b) -> np.ndarray:
    r, g, b = (as_image(c, n) for c, n in zip((r, g, b), "rgb"))
    _same_shape(r, g, "to_grayscale")
    _same_shape(r, b, "to_grayscale")
    wr, wg, wb = LUMA_WEIGHTS
    return wr * r + wg * g + wb * b


def threshold(scores, t: float) -> np.ndarray:
    """Binary edge map ``scores >= t``; equality counts as an edge."""
    if not np.isfinite(t):
        raise ValueError(f"threshold must be finite, got {t}")
    return as_image(scores, "scores") >= t
