"""Classical edge detectors and their ROC/AUC evaluation against ground truth."""

__version__ = "0.1.0"

from .image import convolve_same, magnitude, threshold, to_grayscale
from .kernels import (
    GaussianParams,
    gaussian_derivative_pair,
    gaussian_kernel,
    laplacian_kernel,
    log_kernel,
    roberts_pair,
    sobel_pair,
)
from .detectors import (
    CannyParams,
    GradientField,
    bridge,
    canny,
    canny_gradient,
    gradient_score,
    hysteresis,
    laplacian_sobel_score,
    non_max_suppression,
    zero_cross_binary,
    zero_cross_intensity,
)
from .evaluation import (
    ConfusionCounts,
    DegenerateGroundTruthError,
    RocCurve,
    auc,
    canny_roc,
    confusion,
    rates,
    roc_from_scores,
    sweep_log_sigma,
    sweep_log_stepsize,
)
