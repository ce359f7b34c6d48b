"""Common-bitmap construction for color blocks via the weighted plane.

A color block is collapsed to its per-pixel channel average w = (R+G+B)/3
(the weighted plane), thresholded at the plane mean to form one bitmap shared
by all three channels, and each channel is quantized to its high/low group
means under that bitmap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class QuantPair:
    """Six per-channel quantization values (high/low group means).

    Field order matches the serialized byte order.
    """

    r_high: float
    r_low: float
    g_high: float
    g_low: float
    b_high: float
    b_low: float

    @property
    def high(self) -> np.ndarray:
        """High quantization vector (R, G, B)."""
        return np.array([self.r_high, self.g_high, self.b_high])

    @property
    def low(self) -> np.ndarray:
        """Low quantization vector (R, G, B)."""
        return np.array([self.r_low, self.g_low, self.b_low])

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        return (self.r_high, self.r_low, self.g_high, self.g_low, self.b_high, self.b_low)


def _color_block(block) -> np.ndarray:
    px = np.asarray(block, dtype=np.float64)
    if px.ndim != 3 or px.shape[2] != 3:
        raise ValueError(f"expected an (m, n, 3) block, got shape {px.shape}")
    return px


def weighted_plane(block) -> np.ndarray:
    """Per-pixel channel average (R+G+B)/3, kept in double precision."""
    return _color_block(block).mean(axis=2)


def initial_bitmap(block) -> np.ndarray:
    """Common bitmap: 1 where the weighted plane is >= its mean.

    Ties go to the high group, so a constant-color block yields an all-ones
    bitmap.  Bit-for-bit this equals classic grayscale BTC applied to the
    weighted plane.
    """
    w = weighted_plane(block)
    return (w >= w.mean()).astype(np.uint8)


def quantize_channels(block, bitmap) -> QuantPair:
    """Per-channel high/low group means under a common bitmap.

    When the bitmap is all ones or all zeros the empty group's value is
    defined equal to the other group's; reconstruction never reads it and the
    serialized record keeps its fixed width.
    """
    px = _color_block(block)
    mask = np.asarray(bitmap).astype(bool)
    if mask.shape != px.shape[:2]:
        raise ValueError(f"bitmap shape {mask.shape} does not match block shape {px.shape[:2]}")
    q = int(mask.sum())
    if q == 0:
        low = px.mean(axis=(0, 1))
        high = low
    elif q == mask.size:
        high = px.mean(axis=(0, 1))
        low = high
    else:
        high = px[mask].mean(axis=0)
        low = px[~mask].mean(axis=0)
    return QuantPair(
        r_high=float(high[0]), r_low=float(low[0]),
        g_high=float(high[1]), g_low=float(low[1]),
        b_high=float(high[2]), b_low=float(low[2]),
    )
