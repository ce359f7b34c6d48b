"""Pixel data model: images, block partitioning, padding and reassembly.

Images are numpy arrays, ``(height, width, 3)`` uint8 for color and
``(height, width)`` uint8 for grayscale.  Images whose dimensions are not
divisible by the block size are padded by edge replication; the padding is
stripped again on reassembly.  Coordinates are 0-based, blocks are ordered
row-major.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _checked_pixels(pixels, ndim) -> np.ndarray:
    arr = np.asarray(pixels)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-dimensional pixel array, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("empty image")
    if not np.issubdtype(arr.dtype, np.integer) and not np.issubdtype(arr.dtype, np.floating):
        raise ValueError(f"unsupported pixel dtype {arr.dtype}")
    if arr.min() < 0 or arr.max() > 255:
        raise ValueError("pixel samples must lie in [0, 255]")
    return arr.astype(np.uint8)


@dataclass(frozen=True, eq=False)
class RgbImage:
    """8-bit RGB image with three co-indexed sample planes."""

    pixels: np.ndarray  # (height, width, 3) uint8

    def __post_init__(self):
        arr = _checked_pixels(self.pixels, 3)
        if arr.shape[2] != 3:
            raise ValueError(f"expected 3 channels, got {arr.shape[2]}")
        object.__setattr__(self, "pixels", arr)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True, eq=False)
class Block:
    """One tile of an image: origin in padded-image coordinates plus pixels."""

    origin: tuple[int, int]  # (row, col)
    pixels: np.ndarray       # (m, n, 3) color or (m, n) grayscale


@dataclass(frozen=True, eq=False)
class BlockGrid:
    """Row-major non-overlapping tiling of an edge-padded image.

    ``padded`` holds the full padded pixel data; individual blocks are views
    into it.  The grid is immutable after construction and safe to share
    across workers.
    """

    padded: np.ndarray
    block_m: int
    block_n: int
    block_rows: int
    block_cols: int
    image_height: int
    image_width: int
    pad_bottom: int
    pad_right: int

    @property
    def b_num(self) -> int:
        """Total number of blocks."""
        return self.block_rows * self.block_cols

    @property
    def block_shape(self) -> tuple[int, int]:
        return (self.block_m, self.block_n)

    def block_pixels(self, index: int) -> np.ndarray:
        """Pixel view of the block at the given row-major index."""
        row, col = divmod(index, self.block_cols)
        m, n = self.block_m, self.block_n
        return self.padded[row * m:(row + 1) * m, col * n:(col + 1) * n]

    @property
    def blocks(self) -> list[Block]:
        m, n = self.block_m, self.block_n
        return [
            Block((row * m, col * n), self.block_pixels(row * self.block_cols + col))
            for row in range(self.block_rows)
            for col in range(self.block_cols)
        ]


def partition(image, block_size: tuple[int, int]) -> BlockGrid:
    """Split an image into non-overlapping ``m x n`` blocks.

    Accepts an :class:`RgbImage` or a raw ``(H, W[, 3])`` array.  Dimensions
    not divisible by the block size are padded by repeating the last row and
    column, which keeps block statistics free of artificial outliers.
    """
    if isinstance(image, RgbImage):
        arr = image.pixels
    else:
        arr = np.asarray(image)
        if arr.ndim not in (2, 3):
            raise ValueError(f"expected a (H, W) or (H, W, 3) array, got shape {arr.shape}")
    m, n = block_size
    if m < 1 or n < 1:
        raise ValueError(f"block size must be positive, got {m}x{n}")
    if arr.size == 0:
        raise ValueError("empty image")

    height, width = arr.shape[:2]
    pad_bottom = (-height) % m
    pad_right = (-width) % n
    pad_spec = ((0, pad_bottom), (0, pad_right)) + ((0, 0),) * (arr.ndim - 2)
    if pad_bottom or pad_right:
        padded = np.pad(arr, pad_spec, mode="edge")
    else:
        padded = arr.copy()
    return BlockGrid(
        padded=padded,
        block_m=m,
        block_n=n,
        block_rows=padded.shape[0] // m,
        block_cols=padded.shape[1] // n,
        image_height=height,
        image_width=width,
        pad_bottom=pad_bottom,
        pad_right=pad_right,
    )


def assemble(blocks, image_size: tuple[int, int], block_size: tuple[int, int]) -> np.ndarray:
    """Place row-major blocks back into an image and crop any padding.

    Inverse of :func:`partition` given only the original image size; used by
    the decoder, which has no :class:`BlockGrid` at hand.
    """
    height, width = image_size
    m, n = block_size
    rows = -(-height // m)
    cols = -(-width // n)
    blocks = list(blocks)
    if len(blocks) != rows * cols:
        raise ValueError(f"expected {rows * cols} blocks for a {height}x{width} image, got {len(blocks)}")
    stacked = np.stack([np.asarray(b) for b in blocks])
    if stacked.shape[1:3] != (m, n):
        raise ValueError(f"blocks have shape {stacked.shape[1:]}, expected ({m}, {n}, ...)")
    trailing = stacked.shape[3:]
    full = stacked.reshape((rows, cols, m, n) + trailing)
    full = full.swapaxes(1, 2).reshape((rows * m, cols * n) + trailing)
    return full[:height, :width]


def reassemble(grid: BlockGrid, reconstructed_blocks) -> np.ndarray:
    """Rebuild the original-size image from per-block pixel grids.

    One block per grid slot, matching the grid's block dimensions; padding
    introduced by :func:`partition` is cropped away.
    """
    blocks = list(reconstructed_blocks)
    if len(blocks) != grid.b_num:
        raise ValueError(f"expected {grid.b_num} blocks, got {len(blocks)}")
    expected_trailing = grid.padded.shape[2:]
    for i, b in enumerate(blocks):
        shape = np.asarray(b).shape
        if shape != (grid.block_m, grid.block_n) + expected_trailing:
            raise ValueError(f"block {i} has shape {shape}, expected "
                             f"{(grid.block_m, grid.block_n) + expected_trailing}")
    return assemble(blocks, (grid.image_height, grid.image_width), grid.block_shape)
