"""Bit-exact serialization of encoded images (the ``.sbtc`` format).

Layout (all multi-byte integers little-endian; see docs/FORMAT.md):

    magic   4 bytes  "SBTC"
    version 1 byte   (currently 1)
    mode    1 byte   0 = grayscale, 1 = common bitmap, 2 = refined common bitmap
    width   4 bytes  u32
    height  4 bytes  u32
    block_m 1 byte   u8
    block_n 1 byte   u8

followed by one fixed-width record per block in row-major block order:
the bitmap packed row-major MSB-first and zero-padded to a byte boundary,
then the quantization values as unsigned bytes (6 for color, 2 for
grayscale, high before low per channel).  Quantization values are rounded
to nearest-even at serialization; everything upstream stays in doubles.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

MAGIC = b"SBTC"
VERSION = 1

MODE_GRAY = 0
MODE_WPLANE = 1
MODE_PROPOSED = 2
_MODES = (MODE_GRAY, MODE_WPLANE, MODE_PROPOSED)

_HEADER = struct.Struct("<4sBBIIBB")
HEADER_SIZE = _HEADER.size  # 16 bytes


class FormatError(ValueError):
    """Malformed ``.sbtc`` stream; ``offset`` is the failing byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


@dataclass(eq=False)
class EncodedImage:
    """Header fields plus per-block records.

    Each record is ``(bitmap, quants)``: an ``(m, n)`` uint8 bitmap and a
    tuple of quantization values, ``(high, low)`` per channel — six values in
    color modes, two in grayscale mode.  After :func:`deserialize` the
    quantization values are exact integers.
    """

    mode: int
    width: int
    height: int
    block_m: int
    block_n: int
    records: list[tuple[np.ndarray, tuple]] = field(default_factory=list)

    @property
    def block_rows(self) -> int:
        return -(-self.height // self.block_m)

    @property
    def block_cols(self) -> int:
        return -(-self.width // self.block_n)

    @property
    def block_count(self) -> int:
        return self.block_rows * self.block_cols


def quant_value_count(mode: int) -> int:
    return 2 if mode == MODE_GRAY else 6


def record_size(mode: int, block_m: int, block_n: int) -> int:
    """Bytes per block record: packed bitmap plus quantization bytes."""
    bitmap_bytes = -(-block_m * block_n // 8)
    return bitmap_bytes + quant_value_count(mode)


def stream_size(mode: int, width: int, height: int, block_m: int, block_n: int) -> int:
    """Exact file size in bytes for the given header fields."""
    count = (-(-height // block_m)) * (-(-width // block_n))
    return HEADER_SIZE + count * record_size(mode, block_m, block_n)


def _round_to_byte(value) -> int:
    rounded = round(float(value))  # round-half-even
    if not 0 <= rounded <= 255:
        raise RuntimeError(f"quantization value {value!r} out of byte range after rounding")
    return rounded


def serialize(encoded: EncodedImage) -> bytes:
    """Serialize to ``.sbtc`` bytes.

    A quantization value outside [0, 255] after rounding indicates an
    encoder bug and raises ``RuntimeError`` rather than a format error.
    """
    mode, m, n = encoded.mode, encoded.block_m, encoded.block_n
    if mode not in _MODES:
        raise ValueError(f"unknown mode {mode}")
    if not (1 <= m <= 255 and 1 <= n <= 255):
        raise ValueError(f"block size {m}x{n} outside format limits (1..255)")
    if len(encoded.records) != encoded.block_count:
        raise ValueError(f"{len(encoded.records)} records for {encoded.block_count} blocks")

    nquant = quant_value_count(mode)
    parts = [_HEADER.pack(MAGIC, VERSION, mode, encoded.width, encoded.height, m, n)]
    for bitmap, quants in encoded.records:
        bits = np.asarray(bitmap, dtype=np.uint8)
        if bits.shape != (m, n):
            raise ValueError(f"bitmap shape {bits.shape} does not match block size {m}x{n}")
        if len(quants) != nquant:
            raise ValueError(f"expected {nquant} quantization values, got {len(quants)}")
        parts.append(np.packbits(bits).tobytes())
        parts.append(bytes(_round_to_byte(v) for v in quants))
    return b"".join(parts)


def deserialize(data: bytes) -> EncodedImage:
    """Parse ``.sbtc`` bytes; exact inverse of :func:`serialize`.

    The total length is validated against the header before any record is
    allocated, so corrupt headers cannot trigger oversized allocations.
    """
    if len(data) < HEADER_SIZE:
        raise FormatError(f"stream truncated: header needs {HEADER_SIZE} bytes, have {len(data)}", len(data))
    magic, version, mode, width, height, m, n = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {MAGIC!r}", 0)
    if version != VERSION:
        raise FormatError(f"unsupported version {version}", 4)
    if mode not in _MODES:
        raise FormatError(f"unknown mode {mode}", 5)
    if m < 1 or n < 1:
        raise FormatError(f"invalid block size {m}x{n}", 14)

    count = (-(-height // m)) * (-(-width // n))
    rec_size = record_size(mode, m, n)
    expected = HEADER_SIZE + count * rec_size
    if len(data) != expected:
        raise FormatError(f"stream has {len(data)} bytes, header implies {expected}",
                          min(len(data), expected))

    bitmap_bytes = -(-m * n // 8)
    nquant = quant_value_count(mode)
    records = []
    offset = HEADER_SIZE
    for _ in range(count):
        packed = np.frombuffer(data, dtype=np.uint8, count=bitmap_bytes, offset=offset)
        bitmap = np.unpackbits(packed)[:m * n].reshape(m, n)
        quants = tuple(data[offset + bitmap_bytes:offset + rec_size])
        records.append((bitmap, quants))
        offset += rec_size
    return EncodedImage(mode=mode, width=width, height=height,
                        block_m=m, block_n=n, records=records)
