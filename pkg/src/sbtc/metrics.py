"""Image quality metrics: color MSE and SSIM.

MSE averages the squared sample differences over pixels and the three
channels.  SSIM is computed per channel over 8x8 non-overlapping windows
with population moments and averaged (equal channel weights); ``window=None``
evaluates the single-window global formula instead, which is near-degenerate
for block-coded images and exists for comparison only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Conventional SSIM stabilizers for 8-bit data: (K1*L)^2 and (K2*L)^2 with
# K1=0.01, K2=0.03, L=255.
SSIM_C1 = (0.01 * 255.0) ** 2
SSIM_C2 = (0.03 * 255.0) ** 2

DEFAULT_SSIM_WINDOW = 8


@dataclass(frozen=True)
class QualityReport:
    """MSE/SSIM summary of a reconstruction against its original."""

    mse: float
    ssim: float
    per_channel_mse: tuple[float, float, float]


def _checked_pair(original, reconstructed) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(original, dtype=np.float64)
    b = np.asarray(reconstructed, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"image dimensions differ: {a.shape} vs {b.shape}")
    if a.ndim != 3 or a.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) images, got shape {a.shape}")
    return a, b


def color_mse(original, reconstructed) -> float:
    """Mean over pixels of the mean-over-channels squared difference."""
    a, b = _checked_pair(original, reconstructed)
    return float(((a - b) ** 2).mean())


def per_channel_mse(original, reconstructed) -> tuple[float, float, float]:
    a, b = _checked_pair(original, reconstructed)
    channel = ((a - b) ** 2).mean(axis=(0, 1))
    return (float(channel[0]), float(channel[1]), float(channel[2]))


def _window_sums(plane: np.ndarray, row_idx, col_idx) -> np.ndarray:
    return np.add.reduceat(np.add.reduceat(plane, row_idx, axis=0), col_idx, axis=1)


def _plane_ssim(x: np.ndarray, y: np.ndarray, window: int | None) -> float:
    height, width = x.shape
    if window is None:
        row_idx = np.array([0])
        col_idx = np.array([0])
    else:
        if window < 1:
            raise ValueError(f"window must be >= 1, got {window}")
        row_idx = np.arange(0, height, window)
        col_idx = np.arange(0, width, window)
    counts = np.outer(np.diff(np.append(row_idx, height)),
                      np.diff(np.append(col_idx, width))).astype(np.float64)

    mu_x = _window_sums(x, row_idx, col_idx) / counts
    mu_y = _window_sums(y, row_idx, col_idx) / counts
    var_x = _window_sums(x * x, row_idx, col_idx) / counts - mu_x ** 2
    var_y = _window_sums(y * y, row_idx, col_idx) / counts - mu_y ** 2
    cov = _window_sums(x * y, row_idx, col_idx) / counts - mu_x * mu_y

    scores = ((2 * mu_x * mu_y + SSIM_C1) * (2 * cov + SSIM_C2)) / \
             ((mu_x ** 2 + mu_y ** 2 + SSIM_C1) * (var_x + var_y + SSIM_C2))
    return float(scores.mean())


def ssim(original, reconstructed, window: int | None = DEFAULT_SSIM_WINDOW) -> float:
    """Structural similarity, averaged over windows and channels.

    Partial windows at the right/bottom edges use their actual pixel counts.
    """
    a, b = _checked_pair(original, reconstructed)
    return float(np.mean([_plane_ssim(a[:, :, c], b[:, :, c], window) for c in range(3)]))


def quality_report(original, reconstructed, window: int | None = DEFAULT_SSIM_WINDOW) -> QualityReport:
    return QualityReport(
        mse=color_mse(original, reconstructed),
        ssim=ssim(original, reconstructed, window),
        per_channel_mse=per_channel_mse(original, reconstructed),
    )
