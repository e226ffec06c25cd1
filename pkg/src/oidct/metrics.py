"""RGB-PSNR (pooled MSE) and luma SSIM."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .codec import ImagePlanes, luma

PEAK = 255.0
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
C1 = (0.01 * PEAK) ** 2
C2 = (0.03 * PEAK) ** 2


@dataclass(frozen=True)
class QualityReport:
    psnr_rgb: float
    ssim: float
    per_channel_mse: tuple


def _check_pair(a: ImagePlanes, b: ImagePlanes):
    if a.planes.shape != b.planes.shape:
        raise ValueError(f"image dimensions differ: {a.planes.shape} vs {b.planes.shape}")


def per_channel_mse(a: ImagePlanes, b: ImagePlanes) -> tuple:
    _check_pair(a, b)
    diff = a.planes - b.planes
    return tuple(float(m) for m in np.mean(diff * diff, axis=(1, 2)))


def psnr_from_mse(mse: float) -> float:
    if mse == 0:
        return math.inf
    return 10.0 * math.log10(PEAK * PEAK / mse)


def psnr_rgb(a: ImagePlanes, b: ImagePlanes) -> float:
    """PSNR with the MSE pooled over all three channels; ``inf`` for identical images."""
    return psnr_from_mse(float(np.mean(per_channel_mse(a, b))))


def gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    t = np.arange(size) - (size - 1) / 2
    g = np.exp(-(t * t) / (2 * sigma * sigma))
    return g / g.sum()


def _filter_valid(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    r = len(g) // 2
    out = ndimage.correlate1d(ndimage.correlate1d(x, g, axis=0, mode="nearest"), g, axis=1,
                              mode="nearest")
    # only windows lying entirely inside the image
    return out[r:x.shape[0] - r, r:x.shape[1] - r]


def ssim_map(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    g = gaussian_window()
    mu_x, mu_y = _filter_valid(x, g), _filter_valid(y, g)
    sxx = _filter_valid(x * x, g) - mu_x * mu_x
    syy = _filter_valid(y * y, g) - mu_y * mu_y
    sxy = _filter_valid(x * y, g) - mu_x * mu_y
    num = (2 * mu_x * mu_y + C1) * (2 * sxy + C2)
    den = (mu_x * mu_x + mu_y * mu_y + C1) * (sxx + syy + C2)
    return num / den


def ssim(a: ImagePlanes, b: ImagePlanes) -> float:
    """Mean SSIM over the luma plane.

    Uses an 11x11 Gaussian window (sigma 1.5) and the usual constants
    ``(0.01*255)^2`` and ``(0.03*255)^2``; only windows fully inside the
    image contribute.
    """
    _check_pair(a, b)
    if a.height < SSIM_WINDOW or a.width < SSIM_WINDOW:
        raise ValueError(f"SSIM needs images of at least {SSIM_WINDOW}x{SSIM_WINDOW}")
    return float(np.mean(ssim_map(luma(a), luma(b))))


def evaluate(reference: ImagePlanes, decoded: ImagePlanes) -> QualityReport:
    mse = per_channel_mse(reference, decoded)
    return QualityReport(psnr_from_mse(float(np.mean(mse))), ssim(reference, decoded), mse)
