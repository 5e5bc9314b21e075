"""Full-reference quality metrics and distribution-shift statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve2d

from .color import Histogram, LinearImage, histogram_of_values, illuminance

PSNR_CAP_DB = 99.0

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03


def psnr(a: LinearImage, b: LinearImage) -> float:
    """Peak signal-to-noise ratio in dB against a peak of 1.0.

    Capped at 99 dB (exact for identical images) to keep CSV output finite.
    """
    if a.data.shape != b.data.shape:
        raise ValueError(f"images {a.data.shape} and {b.data.shape} have different shapes")
    mse = float(np.mean((a.data - b.data) ** 2))
    if mse == 0.0:
        return PSNR_CAP_DB
    return min(PSNR_CAP_DB, float(10.0 * np.log10(1.0 / mse)))


def _gaussian_window(size: int, sigma: float) -> np.ndarray:
    half = (size - 1) / 2.0
    coords = np.arange(size) - half
    g = np.exp(-(coords**2) / (2.0 * sigma**2))
    kernel = np.outer(g, g)
    return kernel / kernel.sum()


def ssim(a: LinearImage, b: LinearImage) -> float:
    """Mean local structural similarity on the illuminance channel.

    Gaussian 11x11 window with sigma 1.5, K1=0.01, K2=0.03, dynamic range 1;
    windows are evaluated only where they fit entirely inside the image.
    """
    if a.data.shape != b.data.shape:
        raise ValueError(f"images {a.data.shape} and {b.data.shape} have different shapes")
    if a.height < SSIM_WINDOW or a.width < SSIM_WINDOW:
        raise ValueError(f"images must be at least {SSIM_WINDOW}x{SSIM_WINDOW} for SSIM")
    x = illuminance(a).data
    y = illuminance(b).data
    win = _gaussian_window(SSIM_WINDOW, SSIM_SIGMA)
    mu_x = convolve2d(x, win, mode="valid")
    mu_y = convolve2d(y, win, mode="valid")
    var_x = convolve2d(x * x, win, mode="valid") - mu_x * mu_x
    var_y = convolve2d(y * y, win, mode="valid") - mu_y * mu_y
    cov = convolve2d(x * y, win, mode="valid") - mu_x * mu_y
    c1 = SSIM_K1**2
    c2 = SSIM_K2**2
    num = (2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
    return float(np.mean(num / den))


@dataclass(frozen=True)
class ShiftReport:
    """How the intensity distribution of B sits relative to A.

    All deltas are the B statistic minus the A statistic; no judgment about
    direction is encoded here.
    """

    mean_a: float
    mean_b: float
    mean_delta: float
    p10_delta: float
    p50_delta: float
    p90_delta: float
    hist_a: Histogram
    hist_b: Histogram


def shift_report(a: LinearImage, b: LinearImage, bins: int = 64) -> ShiftReport:
    """Histogram pair plus mean/quantile deltas of illuminance."""
    ha = histogram_of_values(illuminance(a).data, bins)
    hb = histogram_of_values(illuminance(b).data, bins)
    return ShiftReport(
        mean_a=ha.mean,
        mean_b=hb.mean,
        mean_delta=hb.mean - ha.mean,
        p10_delta=hb.p10 - ha.p10,
        p50_delta=hb.p50 - ha.p50,
        p90_delta=hb.p90 - ha.p90,
        hist_a=ha,
        hist_b=hb,
    )
