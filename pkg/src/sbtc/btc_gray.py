"""Classic two-level block truncation coding for grayscale blocks.

Each block is reduced to a binary bitmap plus the means of the pixels above
and below the block mean.  Ties at the mean go to the high group.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class GrayBlockCode:
    """Encoded grayscale block: bitmap plus high/low group means."""

    bitmap: np.ndarray  # (m, n) uint8, 1 marks the high group
    x_high: float
    x_low: float


def encode_gray_block(block) -> GrayBlockCode:
    """Encode one grayscale block.

    The bitmap is 1 where the sample is >= the block mean.  A block whose
    samples are all equal gets an all-ones bitmap with ``x_low`` defined
    equal to ``x_high`` (the low group is empty, and decode never reads it).
    """
    px = np.asarray(block, dtype=np.float64)
    mean = px.mean()
    high_mask = px >= mean
    x_high = float(px[high_mask].mean())
    if high_mask.all():
        x_low = x_high
    else:
        x_low = float(px[~high_mask].mean())
    return GrayBlockCode(high_mask.astype(np.uint8), x_high, x_low)


def decode_gray_block(code: GrayBlockCode) -> np.ndarray:
    """Rebuild a grayscale block: high value at 1 bits, low value at 0 bits."""
    values = np.where(code.bitmap != 0, code.x_high, code.x_low)
    return np.clip(np.rint(values), 0, 255).astype(np.uint8)
