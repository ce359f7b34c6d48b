"""Deterministic fork-join execution of per-block encoders.

Blocks are assigned to workers in contiguous near-equal chunks decided up
front (static chunking keeps timing runs reproducible; per-block cost is
near-uniform).  Workers receive disjoint immutable slices of the padded
image, return results for their own index range only, and synchronize once
at completion, so the output is bit-identical to serial execution for every
worker count.

Workers are separate processes: the per-block encoders are CPU-bound Python
code, which threads cannot run concurrently.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np


class BlockEncodeError(RuntimeError):
    """A per-block encoder raised; the message names the failing block index."""


@dataclass(frozen=True)
class ExecPlan:
    """Static assignment of block indices to workers."""

    worker_count: int
    blocks_per_worker: int  # ceiling of b_num / worker_count
    chunk_assignment: tuple[tuple[int, int], ...]  # per-worker (start, stop)


def plan(b_num: int, c_num: int) -> ExecPlan:
    """Partition ``b_num`` blocks into contiguous chunks for ``c_num`` workers.

    When divisible, every worker gets exactly ``b_num / c_num`` blocks;
    otherwise chunk sizes differ by at most one so no worker idles by more
    than a single block.
    """
    if c_num < 1:
        raise ValueError(f"worker count must be >= 1, got {c_num}")
    if b_num < 0:
        raise ValueError(f"block count must be >= 0, got {b_num}")
    base, extra = divmod(b_num, c_num)
    chunks = []
    start = 0
    for worker in range(c_num):
        size = base + (1 if worker < extra else 0)
        chunks.append((start, start + size))
        start += size
    return ExecPlan(
        worker_count=c_num,
        blocks_per_worker=-(-b_num // c_num),
        chunk_assignment=tuple(chunks),
    )


def default_worker_count() -> int:
    return os.cpu_count() or 1


# Per-process state set once by the pool initializer; avoids re-pickling the
# image for every task.
_WORKER_STATE = None


def _init_worker(padded, block_m, block_n, block_cols, block_fn, chunk_pack):
    global _WORKER_STATE
    _WORKER_STATE = (padded, block_m, block_n, block_cols, block_fn, chunk_pack)


def _encode_chunk(start: int, stop: int):
    padded, m, n, cols, fn, chunk_pack = _WORKER_STATE
    codes = _encode_range(padded, m, n, cols, fn, start, stop)
    return chunk_pack(codes) if chunk_pack is not None else codes


def _encode_range(padded: np.ndarray, m: int, n: int, cols: int, fn, start: int, stop: int):
    out = []
    for index in range(start, stop):
        row, col = divmod(index, cols)
        tile = padded[row * m:(row + 1) * m, col * n:(col + 1) * n]
        try:
            out.append(fn(tile))
        except Exception as exc:
            raise BlockEncodeError(f"encoding failed at block {index}: {exc}") from exc
    return out


def encode_parallel(grid, block_fn, exec_plan: ExecPlan,
                    chunk_pack=None, chunk_unpack=None) -> list:
    """Apply ``block_fn`` to every block of ``grid``, in block-index order.

    ``block_fn`` takes one ``(m, n[, 3])`` pixel array and must be pure and
    picklable (a module-level function, or ``functools.partial`` of one).
    With ``worker_count == 1`` everything runs in-process; that is the serial
    baseline used for timing comparisons.

    ``chunk_pack``/``chunk_unpack`` are an optional transport optimization:
    workers apply ``chunk_pack`` to their list of codes before returning and
    the caller's side reverses it with ``chunk_unpack``.  The pair must
    satisfy ``chunk_unpack(chunk_pack(codes)) == codes``; it exists to move
    chunk results as a few large buffers instead of many small objects, and
    never changes the returned values.
    """
    b_num = grid.b_num
    if not exec_plan.chunk_assignment or exec_plan.chunk_assignment[-1][1] != b_num:
        raise ValueError(f"plan covers {exec_plan.chunk_assignment and exec_plan.chunk_assignment[-1][1] or 0} "
                         f"blocks, grid has {b_num}")
    if (chunk_pack is None) != (chunk_unpack is None):
        raise ValueError("chunk_pack and chunk_unpack must be given together")
    if b_num == 0:
        return []
    if exec_plan.worker_count == 1:
        return _encode_range(grid.padded, grid.block_m, grid.block_n,
                             grid.block_cols, block_fn, 0, b_num)

    chunks = [(start, stop) for start, stop in exec_plan.chunk_assignment if stop > start]
    results: list = []
    with ProcessPoolExecutor(
        max_workers=len(chunks),
        initializer=_init_worker,
        initargs=(grid.padded, grid.block_m, grid.block_n, grid.block_cols,
                  block_fn, chunk_pack),
    ) as pool:
        futures = [pool.submit(_encode_chunk, start, stop) for start, stop in chunks]
        for future in futures:
            payload = future.result()
            results.extend(chunk_unpack(payload) if chunk_unpack is not None else payload)
    return results
