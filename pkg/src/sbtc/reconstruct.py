"""Final quantization and color block reconstruction."""

from __future__ import annotations

import numpy as np

from .wplane import QuantPair, quantize_channels


def final_quantize(block, final_bitmap) -> QuantPair:
    """Recompute the six quantization values for the refined bitmap.

    Same group-mean formula as the initial quantization, applied to the
    final bitmap; least-squares optimal for the chosen pixel partition.
    """
    return quantize_channels(block, final_bitmap)


def reconstruct_block(bitmap, quant: QuantPair) -> np.ndarray:
    """Rebuild a color block: high vector at 1 bits, low vector at 0 bits.

    Output is rounded to the nearest integer and clamped to [0, 255]; each
    channel therefore holds at most two distinct values.
    """
    mask = np.asarray(bitmap).astype(bool)
    if mask.ndim != 2:
        raise ValueError(f"expected an (m, n) bitmap, got shape {mask.shape}")
    values = np.where(mask[..., None], quant.high, quant.low)
    return np.clip(np.rint(values), 0, 255).astype(np.uint8)
