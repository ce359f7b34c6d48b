"""Shared test utilities: synthetic images and naive reference oracles.

The oracle functions are deliberately written with plain Python loops and
``math.fsum`` so they share no code path with the implementations they
check.
"""

from __future__ import annotations

import math

import numpy as np


# ---------------------------------------------------------------------------
# synthetic images

def natural_image(seed: int, height: int = 256, width: int = 256) -> np.ndarray:
    """Smooth gradients + soft color blobs + mild noise; natural-image-like."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    img = np.zeros((height, width, 3))
    for c in range(3):
        gx, gy = rng.uniform(-1, 1, 2)
        img[:, :, c] = 128 + gx * (xx - width / 2) * (100 / width) \
                           + gy * (yy - height / 2) * (100 / height)
    for _ in range(8):
        cx, cy = rng.uniform(0, width), rng.uniform(0, height)
        hi = max(width / 4, 9.0)  # keep blobs drawable for tiny images
        sigma = rng.uniform(min(8.0, hi - 1), hi)
        amp = rng.uniform(-90, 90, 3)
        blob = np.exp(-(((xx - cx) ** 2 + (yy - cy) ** 2) / (2 * sigma ** 2)))
        img += amp * blob[:, :, None]
    img += rng.normal(0, 4, img.shape)
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)


def two_tone_image(seed: int, height: int = 64, width: int = 64,
                   block: tuple[int, int] = (4, 4)) -> np.ndarray:
    """Each block mixes two fixed, well-separated colors: lossless under the codec."""
    rng = np.random.default_rng(seed)
    bright = np.array([220, 200, 180], dtype=np.uint8)  # channel mean 200
    dark = np.array([40, 60, 20], dtype=np.uint8)       # channel mean 40
    img = np.empty((height, width, 3), dtype=np.uint8)
    m, n = block
    for r in range(0, height, m):
        for c in range(0, width, n):
            mask = rng.integers(0, 2, (min(m, height - r), min(n, width - c))).astype(bool)
            tile = np.where(mask[:, :, None], bright, dark)
            img[r:r + tile.shape[0], c:c + tile.shape[1]] = tile
    return img


def random_rgb_block(rng, m: int, n: int) -> np.ndarray:
    return rng.integers(0, 256, size=(m, n, 3), dtype=np.uint8)


# ---------------------------------------------------------------------------
# naive oracles

def oracle_gray_encode(block) -> tuple[list[list[int]], float, float]:
    """Loop/fsum re-implementation of grayscale block truncation."""
    rows = [list(map(float, row)) for row in np.asarray(block)]
    values = [v for row in rows for v in row]
    mean = math.fsum(values) / len(values)
    bitmap = [[1 if v >= mean else 0 for v in row] for row in rows]
    high = [v for row in rows for v in row if v >= mean]
    low = [v for row in rows for v in row if v < mean]
    x_high = math.fsum(high) / len(high)
    x_low = math.fsum(low) / len(low) if low else x_high
    return bitmap, x_high, x_low


def oracle_channel_means(block, bitmap) -> tuple[float, ...]:
    """Independent per-channel group-mean re-summation.

    Returns (r_high, r_low, g_high, g_low, b_high, b_low); an empty group
    copies the other group's mean.
    """
    px = np.asarray(block, dtype=np.float64)
    bits = np.asarray(bitmap)
    out = []
    for c in range(3):
        high, low = [], []
        for i in range(px.shape[0]):
            for j in range(px.shape[1]):
                (high if bits[i, j] else low).append(px[i, j, c])
        if not low:
            mean_high = math.fsum(high) / len(high)
            mean_low = mean_high
        elif not high:
            mean_low = math.fsum(low) / len(low)
            mean_high = mean_low
        else:
            mean_high = math.fsum(high) / len(high)
            mean_low = math.fsum(low) / len(low)
        out.extend([mean_high, mean_low])
    return tuple(out)


def oracle_block_cost(block, bitmap, quant) -> float:
    """Double-loop fsum of squared residuals to the selected quant vector."""
    px = np.asarray(block, dtype=np.float64)
    bits = np.asarray(bitmap)
    high = (quant.r_high, quant.g_high, quant.b_high)
    low = (quant.r_low, quant.g_low, quant.b_low)
    terms = []
    for i in range(px.shape[0]):
        for j in range(px.shape[1]):
            target = high if bits[i, j] else low
            terms.append(math.fsum((px[i, j, c] - target[c]) ** 2 for c in range(3)))
    return math.fsum(terms)


def all_bitmaps(m: int, n: int):
    """Every possible m x n bitmap (2^(m*n) of them); keep m*n small."""
    count = m * n
    for value in range(1 << count):
        bits = [(value >> k) & 1 for k in range(count)]
        yield np.array(bits, dtype=np.uint8).reshape(m, n)
