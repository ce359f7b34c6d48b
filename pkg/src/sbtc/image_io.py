"""Image file ingestion and emission.

PPM (P6) and PGM (P5) are parsed and written natively, bit-exact; PNG goes
through Pillow.  Input format is sniffed from magic bytes, output format is
chosen by file extension.  All writes are atomic (temp file + rename) so a
failure never leaves a partial artifact behind.
"""

from __future__ import annotations

import io
import os
import tempfile
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
_PNM_WHITESPACE = b" \t\n\r\x0b\x0c"


def read_image(path) -> np.ndarray:
    """Load an image as uint8 ``(H, W, 3)`` (color) or ``(H, W)`` (grayscale)."""
    data = Path(path).read_bytes()
    if data[:2] in (b"P5", b"P6"):
        return _parse_pnm(data)
    if data.startswith(_PNG_SIGNATURE):
        return _decode_with_pillow(data)
    raise ValueError(f"{path}: unsupported image format (expected PPM P6, PGM P5 or PNG)")


def _decode_with_pillow(data: bytes) -> np.ndarray:
    try:
        img = Image.open(io.BytesIO(data))
        if img.mode == "L":
            return np.asarray(img, dtype=np.uint8)
        return np.asarray(img.convert("RGB"), dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise ValueError(f"undecodable image: {exc}") from exc


def _skip_pnm_space(data: bytes, pos: int) -> int:
    # whitespace and '#' comments separate header tokens
    while pos < len(data):
        byte = data[pos:pos + 1]
        if byte in (b"#",):
            while pos < len(data) and data[pos:pos + 1] != b"\n":
                pos += 1
        elif byte and byte in _PNM_WHITESPACE:
            pos += 1
        else:
            break
    return pos


def _read_pnm_int(data: bytes, pos: int, what: str) -> tuple[int, int]:
    pos = _skip_pnm_space(data, pos)
    start = pos
    while pos < len(data) and data[pos:pos + 1].isdigit():
        pos += 1
    if pos == start:
        raise ValueError(f"malformed PNM header: missing {what}")
    return int(data[start:pos]), pos


def _parse_pnm(data: bytes) -> np.ndarray:
    channels = 3 if data[:2] == b"P6" else 1
    width, pos = _read_pnm_int(data, 2, "width")
    height, pos = _read_pnm_int(data, pos, "height")
    maxval, pos = _read_pnm_int(data, pos, "maxval")
    if width < 1 or height < 1:
        raise ValueError(f"invalid PNM dimensions {width}x{height}")
    if not 0 < maxval <= 255:
        raise ValueError(f"unsupported PNM maxval {maxval} (only 8-bit samples)")
    if pos >= len(data) or data[pos:pos + 1] not in _PNM_WHITESPACE:
        raise ValueError("malformed PNM header: missing raster separator")
    pos += 1  # exactly one whitespace byte before the raster

    expected = width * height * channels
    raster = data[pos:]
    if len(raster) != expected:
        raise ValueError(f"PNM raster has {len(raster)} bytes, expected {expected}")
    arr = np.frombuffer(raster, dtype=np.uint8)
    if channels == 3:
        return arr.reshape(height, width, 3)
    return arr.reshape(height, width)


def _pnm_bytes(arr: np.ndarray) -> bytes:
    magic = b"P6" if arr.ndim == 3 else b"P5"
    header = magic + b"\n%d %d\n255\n" % (arr.shape[1], arr.shape[0])
    return header + arr.astype(np.uint8).tobytes()


def _png_bytes(arr: np.ndarray) -> bytes:
    img = Image.fromarray(arr.astype(np.uint8))
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def write_bytes_atomic(path, data: bytes) -> None:
    """Write via a temp file in the destination directory, then rename."""
    target = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=target.parent or Path("."), prefix=target.name + ".")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp_name, target)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def write_image(path, arr: np.ndarray) -> None:
    """Write uint8 pixels to PPM/PGM/PNG, routed by the file extension.

    Grayscale data written to ``.ppm`` is replicated across the three
    channels; color data cannot be written to ``.pgm``.
    """
    target = Path(path)
    arr = np.asarray(arr)
    if arr.ndim not in (2, 3) or (arr.ndim == 3 and arr.shape[2] != 3):
        raise ValueError(f"cannot write pixel array of shape {arr.shape}")
    suffix = target.suffix.lower()
    if suffix in (".ppm", ".pnm"):
        if arr.ndim == 2:
            arr = np.repeat(arr[:, :, None], 3, axis=2)
        data = _pnm_bytes(arr)
    elif suffix == ".pgm":
        if arr.ndim != 2:
            raise ValueError("PGM output requires grayscale data; use .ppm or .png")
        data = _pnm_bytes(arr)
    elif suffix == ".png":
        data = _png_bytes(arr)
    else:
        raise ValueError(f"unsupported output format {suffix!r} (use .ppm, .pgm or .png)")
    write_bytes_atomic(target, data)
