"""Named convolution kernels.

All Gaussian-family constructors take a :class:`GaussianParams`; the mask
side is ``2 * stepsize + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import convolve_full


@dataclass(frozen=True)
class GaussianParams:
    sigma: float = 2.0
    stepsize: int = 6

    def __post_init__(self):
        if not (self.sigma > 0 and np.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if int(self.stepsize) != self.stepsize or self.stepsize < 1:
            raise ValueError(f"stepsize must be an integer >= 1, got {self.stepsize}")

    @property
    def side(self) -> int:
        return 2 * int(self.stepsize) + 1


def roberts_pair() -> tuple[np.ndarray, np.ndarray]:
    gx = np.array([[1.0, 0.0], [0.0, -1.0]])
    gy = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return gx, gy


def sobel_pair() -> tuple[np.ndarray, np.ndarray]:
    gx = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
    return gx, gx.T.copy()


def _offsets(p: GaussianParams) -> np.ndarray:
    s = int(p.stepsize)
    return np.arange(-s, s + 1, dtype=np.float64)


def gaussian_kernel(p: GaussianParams) -> np.ndarray:
    """Outer product of the sampled 1D normal pdf, normalized to sum 1."""
    x = _offsets(p)
    pdf = np.exp(-(x**2) / (2 * p.sigma**2)) / (p.sigma * np.sqrt(2 * np.pi))
    g = np.outer(pdf, pdf)
    return g / g.sum()


def gaussian_derivative_pair(p: GaussianParams) -> tuple[np.ndarray, np.ndarray]:
    """First derivative of Gaussian along columns (x) and rows (y).

    Built from the normalized :func:`gaussian_kernel` times ``-x / sigma**2``
    (resp. ``-y / sigma**2``).
    """
    g = gaussian_kernel(p)
    x = _offsets(p)
    kx = g * (-x[np.newaxis, :] / p.sigma**2)
    ky = g * (-x[:, np.newaxis] / p.sigma**2)
    return kx, ky


def laplacian_kernel() -> np.ndarray:
    return np.array([[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]])


def log_kernel(p: GaussianParams) -> np.ndarray:
    """Laplacian of Gaussian as the full convolution of the two masks.

    The result is ``(2 * stepsize + 3)`` on a side; nothing is cropped.
    """
    return convolve_full(gaussian_kernel(p), laplacian_kernel())
