"""Benchmark harness: per-image CSV rows plus rendered comparison figures.

Each row is one (image, scheme, block size, threads) run: the image is
encoded to bytes (timed), decoded back, and scored with MSE and SSIM against
the original.  ``render_figures`` turns the rows into bar charts per block
size and, when the rows hold a thread sweep, an encode-time-vs-threads plot.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bitstream import deserialize, serialize
from .codec import decode_image, encode_image
from .metrics import DEFAULT_SSIM_WINDOW, quality_report

CSV_FIELDS = ("image", "scheme", "block_size", "mse", "ssim", "encode_seconds", "threads")


@dataclass(frozen=True)
class BenchRow:
    image: str
    scheme: str
    block_size: str  # "4x4"
    mse: float
    ssim: float
    encode_seconds: float
    threads: int


def bench_image(name: str, pixels: np.ndarray, block_size: tuple[int, int], scheme: str,
                threads: int, iterate: bool = False,
                ssim_window: int | None = DEFAULT_SSIM_WINDOW) -> BenchRow:
    """Encode/decode one image and score the reconstruction.

    Quality is measured on the decoded bytes, so the reported numbers are
    exactly what a receiver of the stream would see.
    """
    start = time.perf_counter()
    data = serialize(encode_image(pixels, block_size, scheme, workers=threads, iterate=iterate))
    elapsed = time.perf_counter() - start
    decoded = decode_image(deserialize(data))
    report = quality_report(pixels, decoded, window=ssim_window)
    return BenchRow(
        image=name,
        scheme=scheme,
        block_size=f"{block_size[0]}x{block_size[1]}",
        mse=report.mse,
        ssim=report.ssim,
        encode_seconds=elapsed,
        threads=threads,
    )


def run_bench(images: dict[str, np.ndarray], block_sizes, schemes, thread_counts,
              iterate: bool = False, ssim_window: int | None = DEFAULT_SSIM_WINDOW,
              on_error=None) -> list[BenchRow]:
    """Run the full benchmark grid; failures are reported and skipped.

    ``on_error`` receives ``(image_name, exception)`` per failed combination.
    """
    rows = []
    for name in sorted(images):
        for block_size in block_sizes:
            for scheme in schemes:
                for threads in thread_counts:
                    try:
                        rows.append(bench_image(name, images[name], block_size, scheme,
                                                threads, iterate, ssim_window))
                    except Exception as exc:
                        if on_error is None:
                            raise
                        on_error(name, exc)
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for row in rows:
        writer.writerow([row.image, row.scheme, row.block_size,
                         f"{row.mse:.6f}", f"{row.ssim:.6f}",
                         f"{row.encode_seconds:.4f}", row.threads])
    return buf.getvalue()


def timing_data(rows) -> str:
    """Thread-sweep timings as gnuplot-friendly whitespace columns."""
    lines = ["# block_size scheme threads mean_encode_seconds"]
    by_key: dict[tuple[str, str, int], list[float]] = {}
    for row in rows:
        by_key.setdefault((row.block_size, row.scheme, row.threads), []).append(row.encode_seconds)
    for (block_size, scheme, threads), times in sorted(by_key.items()):
        lines.append(f"{block_size} {scheme} {threads} {np.mean(times):.4f}")
    return "\n".join(lines) + "\n"


def _quality_subset(rows) -> list[BenchRow]:
    # quality is thread-independent; keep the first row per (image, scheme, block)
    seen = set()
    subset = []
    for row in rows:
        key = (row.image, row.scheme, row.block_size)
        if key not in seen:
            seen.add(key)
            subset.append(row)
    return subset


def render_figures(rows, figdir) -> list[Path]:
    """Render comparison figures next to the CSV output; returns written paths."""
    import matplotlib
    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    figdir = Path(figdir)
    figdir.mkdir(parents=True, exist_ok=True)
    written = []
    rows = list(rows)
    block_sizes = sorted({row.block_size for row in rows})
    quality = _quality_subset(rows)

    for block_size in block_sizes:
        for metric, label in (("mse", "MSE"), ("ssim", "SSIM")):
            subset = [r for r in quality if r.block_size == block_size]
            images = sorted({r.image for r in subset})
            schemes = sorted({r.scheme for r in subset})
            if not images or not schemes:
                continue
            fig, ax = plt.subplots(figsize=(max(6.0, 1.2 * len(images)), 4.0))
            width = 0.8 / len(schemes)
            xs = np.arange(len(images))
            for k, scheme in enumerate(schemes):
                values = []
                for image in images:
                    match = [getattr(r, metric) for r in subset
                             if r.image == image and r.scheme == scheme]
                    values.append(match[0] if match else np.nan)
                ax.bar(xs + (k - (len(schemes) - 1) / 2) * width, values, width, label=scheme)
            ax.set_xticks(xs)
            ax.set_xticklabels(images, rotation=30, ha="right")
            ax.set_ylabel(label)
            ax.set_title(f"{label}, {block_size} blocks")
            ax.legend()
            ax.grid(axis="y", alpha=0.3)
            fig.tight_layout()
            path = figdir / f"{metric}_{block_size}.png"
            fig.savefig(path, dpi=150)
            plt.close(fig)
            written.append(path)

    thread_counts = sorted({row.threads for row in rows})
    if len(thread_counts) > 1:
        for block_size in block_sizes:
            fig, ax = plt.subplots(figsize=(6.0, 4.0))
            plotted = False
            for scheme in sorted({r.scheme for r in rows if r.block_size == block_size}):
                means = []
                for threads in thread_counts:
                    times = [r.encode_seconds for r in rows
                             if r.block_size == block_size and r.scheme == scheme
                             and r.threads == threads]
                    means.append(np.mean(times) if times else np.nan)
                if not np.all(np.isnan(means)):
                    ax.plot(thread_counts, means, marker="o", label=scheme)
                    plotted = True
            if not plotted:
                plt.close(fig)
                continue
            ax.set_xlabel("worker count")
            ax.set_ylabel("encode seconds (mean over images)")
            ax.set_title(f"Encode time vs workers, {block_size} blocks")
            ax.set_xticks(thread_counts)
            ax.legend()
            ax.grid(alpha=0.3)
            fig.tight_layout()
            path = figdir / f"time_vs_threads_{block_size}.png"
            fig.savefig(path, dpi=150)
            plt.close(fig)
            written.append(path)
    return written
