"""Hill-climbing refinement of the common bitmap.

Every bit of the initial bitmap is visited exactly once and flipped iff the
flip strictly lowers the block cost evaluated against the *fixed* initial
quantization vectors.  Because the cost is a per-pixel sum, the per-bit
decisions are independent: the result does not depend on visit order and is
globally optimal for the given quantization pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wplane import QuantPair

_TRAVERSALS = ("row-major", "column-major")


@dataclass(frozen=True, eq=False)
class RefineResult:
    """Outcome of one refinement pass."""

    final_bitmap: np.ndarray  # (m, n) uint8
    initial_cost: float       # block cost of the input bitmap
    final_cost: float         # block cost of the refined bitmap, same quant
    flips: int                # Hamming distance between input and output


def _distance_maps(block, quant: QuantPair) -> tuple[np.ndarray, np.ndarray]:
    """Per-pixel squared distances to the high and low quantization vectors."""
    px = np.asarray(block, dtype=np.float64)
    if px.ndim != 3 or px.shape[2] != 3:
        raise ValueError(f"expected an (m, n, 3) block, got shape {px.shape}")
    d_high = ((px - quant.high) ** 2).sum(axis=2)
    d_low = ((px - quant.low) ** 2).sum(axis=2)
    return d_high, d_low


def _checked_bitmap(bitmap, shape) -> np.ndarray:
    mask = np.asarray(bitmap).astype(bool)
    if mask.shape != shape:
        raise ValueError(f"bitmap shape {mask.shape} does not match block shape {shape}")
    return mask


def block_cost(block, bitmap, quant: QuantPair) -> float:
    """Unnormalized sum of squared pixel-vector residuals.

    1-bits are measured against the high vector, 0-bits against the low
    vector.  This is a raw sum over the block, not divided by the block area.
    """
    d_high, d_low = _distance_maps(block, quant)
    mask = _checked_bitmap(bitmap, d_high.shape)
    return float(np.where(mask, d_high, d_low).sum())


def flip_delta(block, bitmap, quant: QuantPair, pos: tuple[int, int]) -> float:
    """Cost change from flipping the single bit at ``pos``.

    Computed in O(1) from the one affected pixel; equals
    ``block_cost(flipped) - block_cost(original)``.
    """
    px = np.asarray(block, dtype=np.float64)
    mask = _checked_bitmap(bitmap, px.shape[:2])
    i, j = pos
    x = px[i, j]
    if mask[i, j]:
        current, other = quant.high, quant.low
    else:
        current, other = quant.low, quant.high
    return float(((x - other) ** 2).sum() - ((x - current) ** 2).sum())


def refine_bitmap(block, initial, quant: QuantPair, traversal: str = "row-major") -> RefineResult:
    """Run one refinement pass over every bit of ``initial``.

    ``quant`` stays fixed for the whole pass (it is the pair computed from
    the initial bitmap); each bit is evaluated once, in ``traversal`` order,
    and flipped only on a strict cost decrease.  Ties keep the original bit,
    which costs nothing and keeps the bitstream stable.
    """
    if traversal not in _TRAVERSALS:
        raise ValueError(f"unknown traversal {traversal!r}, expected one of {_TRAVERSALS}")
    d_high, d_low = _distance_maps(block, quant)
    mask = _checked_bitmap(initial, d_high.shape)
    m, n = mask.shape

    initial_cost = float(np.where(mask, d_high, d_low).sum())
    cur = np.where(mask, d_high, d_low).ravel().tolist()
    oth = np.where(mask, d_low, d_high).ravel().tolist()
    bits = mask.ravel().tolist()

    if traversal == "row-major":
        order = range(m * n)
    else:
        order = (r * n + c for c in range(n) for r in range(m))

    final = list(bits)
    flips = 0
    for idx in order:
        if oth[idx] < cur[idx]:
            final[idx] = not bits[idx]
            flips += 1

    final_arr = np.asarray(final, dtype=np.uint8).reshape(m, n)
    final_cost = float(np.where(final_arr != 0, d_high, d_low).sum())
    return RefineResult(final_bitmap=final_arr, initial_cost=initial_cost,
                        final_cost=final_cost, flips=flips)
