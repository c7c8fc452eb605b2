"""Named detector configurations and their ROC evaluation.

``variant`` selects how a detector is turned into something an ROC sweep can
threshold:

* ``initial``   binary outputs scored as {0, 1} for laplacian, log and canny
  (one operating point, two-segment curve); gradient magnitude for the rest.
* ``zerocross`` laplacian/log scored by the intensity-preserving zero crossing.
* ``custom``    laplacian/log scored by the Sobel magnitude of the response;
  canny swept over ``low`` with ``high = 2 * low``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .detectors import (
    auto_thresholds,
    canny_edges,
    canny_gradient,
    gradient_score,
    laplacian_sobel_score,
    zero_cross_binary,
    zero_cross_intensity,
)
from .evaluation import RocCurve, canny_roc, roc_from_scores
from .image import convolve_same, threshold
from .kernels import (
    GaussianParams,
    gaussian_derivative_pair,
    gaussian_kernel,
    laplacian_kernel,
    log_kernel,
    roberts_pair,
    sobel_pair,
)

DETECTORS = ("roberts", "sobel", "fog", "laplacian", "log", "canny")
VARIANTS = ("initial", "zerocross", "custom")
GAUSSIAN_DETECTORS = ("fog", "log", "canny")

# fog's mask is never given; borrow the first LoG setting (sigma 2, 13x13)
DEFAULT_GAUSS = {
    "fog": GaussianParams(2.0, 6),
    "log": GaussianParams(1.0, 4),
    "canny": GaussianParams(1.0, 4),
}


@dataclass(frozen=True)
class DetectorConfig:
    sigma: float | None = None
    stepsize: int | None = None
    threshold: float | None = None
    low: float | None = None
    high: float | None = None
    nms: bool | None = None
    numtrials: int = 80

    def gauss(self, detector: str) -> GaussianParams:
        base = DEFAULT_GAUSS[detector]
        return GaussianParams(
            base.sigma if self.sigma is None else self.sigma,
            base.stepsize if self.stepsize is None else self.stepsize,
        )

    def params(self, detector: str) -> dict:
        """Parameters that actually affect ``detector``, for report metadata."""
        out = {}
        if detector in GAUSSIAN_DETECTORS:
            g = self.gauss(detector)
            out.update(sigma=g.sigma, stepsize=g.stepsize)
        if detector == "canny":
            out.update(low=self.low, high=self.high, nms=self.nms, numtrials=self.numtrials)
        if self.threshold is not None and detector != "canny":
            out["threshold"] = self.threshold
        return out


def check_detector(name: str) -> None:
    if name not in DETECTORS:
        raise ValueError(f"unknown detector {name!r}; choose from {', '.join(DETECTORS)}")


def _second_order_kernel(name: str, cfg: DetectorConfig) -> np.ndarray:
    return laplacian_kernel() if name == "laplacian" else log_kernel(cfg.gauss("log"))


def _gradient_pair(name: str, cfg: DetectorConfig):
    if name == "roberts":
        return roberts_pair()
    if name == "sobel":
        return sobel_pair()
    return gaussian_derivative_pair(cfg.gauss("fog"))


def _canny_binary(img, cfg: DetectorConfig) -> np.ndarray:
    g = gaussian_kernel(cfg.gauss("canny"))
    grad = canny_gradient(img, g)
    low, high = cfg.low, cfg.high
    if low is None or high is None:
        auto_low, auto_high = auto_thresholds(grad.mag)
        low = auto_low if low is None else low
        high = auto_high if high is None else high
    nms = True if cfg.nms is None else cfg.nms
    return canny_edges(img, g, low, high, nms, grad=grad)[0]


def score_map(name: str, img, variant: str = "custom",
              cfg: DetectorConfig = DetectorConfig()) -> np.ndarray:
    """Thresholdable score map for ``name`` under ``variant``.

    Custom Canny has no single score map (it is swept over hysteresis
    thresholds); asking for one raises ``ValueError``.
    """
    check_detector(name)
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if name in ("roberts", "sobel", "fog"):
        return gradient_score(img, _gradient_pair(name, cfg))
    if name in ("laplacian", "log"):
        k = _second_order_kernel(name, cfg)
        if variant == "custom":
            return laplacian_sobel_score(img, k)
        response = convolve_same(img, k)
        if variant == "zerocross":
            return zero_cross_intensity(response)
        return zero_cross_binary(response).astype(np.float64)
    if variant == "custom":
        raise ValueError("custom canny is evaluated by a threshold sweep, not a score map")
    return _canny_binary(img, cfg).astype(np.float64)


def edge_map(name: str, img, cfg: DetectorConfig) -> np.ndarray:
    """Binary edges for display: thresholded score, or a single Canny run."""
    check_detector(name)
    if name == "canny":
        return _canny_binary(img, cfg)
    if cfg.threshold is None:
        raise ValueError(f"{name} needs an explicit threshold")
    return threshold(score_map(name, img, "custom", cfg), cfg.threshold)


def detector_roc(name: str, img, gt, variant: str = "custom",
                 cfg: DetectorConfig = DetectorConfig()) -> RocCurve:
    check_detector(name)
    if name == "canny" and variant == "custom":
        nms = False if cfg.nms is None else cfg.nms
        return canny_roc(img, gaussian_kernel(cfg.gauss("canny")), gt, cfg.numtrials, nms)
    return roc_from_scores(score_map(name, img, variant, cfg), gt)
