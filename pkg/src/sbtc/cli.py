"""Command-line front end: encode, decode, metrics and bench verbs."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .bitstream import FormatError, deserialize, serialize
from .codec import (SCHEME_GRAY, SCHEMES, decode_image, encode_image, threads_from_env)
from .image_io import read_image, write_bytes_atomic, write_image
from .metrics import DEFAULT_SSIM_WINDOW, per_channel_mse, quality_report
from .parallel import BlockEncodeError

_CORPUS_SUFFIXES = {".ppm", ".pnm", ".pgm", ".png"}
_MAX_BLOCK_AREA = 4096


def _parse_block(text: str) -> tuple[int, int]:
    try:
        m_str, n_str = text.lower().split("x")
        m, n = int(m_str), int(n_str)
    except ValueError:
        raise argparse.ArgumentTypeError(f"block size must look like 4x4, got {text!r}") from None
    if m < 1 or n < 1 or m > 255 or n > 255:
        raise argparse.ArgumentTypeError(f"block dimensions must be in 1..255, got {text}")
    if m * n > _MAX_BLOCK_AREA:
        raise argparse.ArgumentTypeError(f"block area {m * n} exceeds the supported maximum {_MAX_BLOCK_AREA}")
    return m, n


def _parse_block_list(text: str) -> list[tuple[int, int]]:
    return [_parse_block(part) for part in text.split(",") if part]


def _parse_int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated integer list, got {text!r}") from None
    if not values or any(v < 0 for v in values):
        raise argparse.ArgumentTypeError(f"thread counts must be >= 0, got {text!r}")
    return values


def _parse_schemes(text: str) -> list[str]:
    schemes = [part.strip() for part in text.split(",") if part.strip()]
    for scheme in schemes:
        if scheme not in SCHEMES:
            raise argparse.ArgumentTypeError(f"unknown scheme {scheme!r}, expected from {SCHEMES}")
    if not schemes:
        raise argparse.ArgumentTypeError("no schemes given")
    return schemes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sbtc",
        description="Single-bitmap block truncation codec for color images.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", help="encode an image to a .sbtc file")
    enc.add_argument("input", type=Path, help="PPM (P6), PGM (P5) or PNG image")
    enc.add_argument("output", type=Path, help=".sbtc file to write")
    enc.add_argument("--block", type=_parse_block, default=(4, 4), metavar="MxN",
                     help="block size (default 4x4)")
    enc.add_argument("--scheme", choices=SCHEMES, default="proposed",
                     help="encoding scheme (default proposed)")
    enc.add_argument("--threads", type=int, default=None, metavar="N",
                     help="worker count, 0 = all cores (default: SBTC_THREADS or 0)")
    enc.add_argument("--iterate", action="store_true",
                     help="repeat refine/requantize until no bit flips (default: single pass)")

    dec = sub.add_parser("decode", help="decode a .sbtc file to an image")
    dec.add_argument("input", type=Path, help=".sbtc file")
    dec.add_argument("output", type=Path, help="output image (.ppm, .pgm or .png)")

    met = sub.add_parser("metrics", help="MSE/SSIM between two images")
    met.add_argument("original", type=Path)
    met.add_argument("reconstructed", type=Path)
    met.add_argument("--ssim-global", action="store_true",
                     help="single-window SSIM over the whole image instead of 8x8 windows")

    ben = sub.add_parser("bench", help="encode/decode a corpus and emit CSV quality rows")
    ben.add_argument("corpus", type=Path, help="directory of PPM/PGM/PNG images")
    ben.add_argument("--blocks", type=_parse_block_list, default=[(4, 4)], metavar="4x4,8x8",
                     help="comma-separated block sizes (default 4x4)")
    ben.add_argument("--schemes", type=_parse_schemes, default=["wplane", "proposed"],
                     help="comma-separated schemes (default wplane,proposed)")
    ben.add_argument("--threads", type=int, default=None, metavar="N",
                     help="worker count for the encode runs, 0 = all cores")
    ben.add_argument("--threads-sweep", type=_parse_int_list, default=None, metavar="1,2,4",
                     help="bench each listed worker count instead of a single one")
    ben.add_argument("--iterate", action="store_true", help="use the iterated refinement mode")
    ben.add_argument("--ssim-global", action="store_true", help="global SSIM instead of 8x8 windows")
    ben.add_argument("--out", type=Path, default=None, help="write CSV here instead of stdout")
    ben.add_argument("--figdir", type=Path, default=None,
                     help="render MSE/SSIM/timing figures into this directory")
    ben.add_argument("--timing-data", type=Path, default=None,
                     help="write gnuplot-style thread-sweep timings to this file")
    return parser


def _cmd_encode(args) -> int:
    arr = read_image(args.input)
    if args.scheme == SCHEME_GRAY and arr.ndim != 2:
        raise ValueError(f"{args.input}: scheme btc-gray needs a grayscale input (PGM or grayscale PNG)")
    if args.scheme != SCHEME_GRAY and arr.ndim != 3:
        raise ValueError(f"{args.input}: color input required for scheme {args.scheme!r} "
                         f"(use --scheme btc-gray for grayscale images)")
    data = serialize(encode_image(arr, args.block, args.scheme,
                                  workers=threads_from_env(args.threads),
                                  iterate=args.iterate))
    write_bytes_atomic(args.output, data)
    height, width = arr.shape[:2]
    bpp = len(data) * 8 / (width * height)
    print(f"wrote {len(data)} bytes to {args.output} ({bpp:.4f} bits/pixel)")
    return 0


def _cmd_decode(args) -> int:
    arr = decode_image(deserialize(Path(args.input).read_bytes()))
    write_image(args.output, arr)
    height, width = arr.shape[:2]
    print(f"wrote {args.output} ({width}x{height})")
    return 0


def _as_color(arr: np.ndarray) -> np.ndarray:
    return np.repeat(arr[:, :, None], 3, axis=2) if arr.ndim == 2 else arr


def _cmd_metrics(args) -> int:
    original = _as_color(read_image(args.original))
    reconstructed = _as_color(read_image(args.reconstructed))
    window = None if args.ssim_global else DEFAULT_SSIM_WINDOW
    report = quality_report(original, reconstructed, window=window)
    mse_r, mse_g, mse_b = per_channel_mse(original, reconstructed)
    print(f"mse={report.mse:.6f}")
    print(f"ssim={report.ssim:.6f}")
    print(f"mse_r={mse_r:.6f}")
    print(f"mse_g={mse_g:.6f}")
    print(f"mse_b={mse_b:.6f}")
    return 0


def _cmd_bench(args) -> int:
    corpus_dir = Path(args.corpus)
    if not corpus_dir.is_dir():
        raise ValueError(f"{corpus_dir}: not a directory")
    paths = sorted(p for p in corpus_dir.iterdir() if p.suffix.lower() in _CORPUS_SUFFIXES)

    images = {}
    for path in paths:
        try:
            images[path.stem] = read_image(path)
        except (ValueError, OSError) as exc:
            print(f"warning: skipping {path}: {exc}", file=sys.stderr)

    if args.threads_sweep:
        thread_counts = args.threads_sweep
    else:
        thread_counts = [threads_from_env(args.threads)]
    window = None if args.ssim_global else DEFAULT_SSIM_WINDOW

    def on_error(name, exc):
        print(f"warning: {name}: {exc}", file=sys.stderr)

    rows = bench_mod.run_bench(images, args.blocks, args.schemes, thread_counts,
                               iterate=args.iterate, ssim_window=window, on_error=on_error)
    csv_text = bench_mod.rows_to_csv(rows)
    if args.out is not None:
        write_bytes_atomic(args.out, csv_text.encode())
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(csv_text)
    if args.timing_data is not None:
        write_bytes_atomic(args.timing_data, bench_mod.timing_data(rows).encode())
        print(f"wrote {args.timing_data}", file=sys.stderr)
    if args.figdir is not None:
        for fig_path in bench_mod.render_figures(rows, args.figdir):
            print(f"wrote {fig_path}", file=sys.stderr)
    return 0


_HANDLERS = {
    "encode": _cmd_encode,
    "decode": _cmd_decode,
    "metrics": _cmd_metrics,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (ValueError, FormatError, BlockEncodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
