"""Level-synchronous parallel transforms.

The poset is split into antichains ``L_1 .. L_l`` (``L_1`` = minimal
elements).  Every dependency of a vertex in ``L_i`` (its chain successor and
its niv entries) is a strict descendant and therefore sits in an earlier
level, so all vertices of one level can be computed concurrently.  Levels are
separated by a barrier.  Work inside a level is statically chunked over a
thread pool; the compiled kernels release the GIL.

Each output coordinate is accumulated in the same order as the sequential
kernels, so results are bit-identical for every thread count, floats included.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np

from .chains import ChainDecomposition
from .dag import Dag
from .errors import ArgumentError
from .niv import NivMap
from .transforms import _check

DEFAULT_THRESHOLD = 256
THREADS_ENV = "FASTMOBIUS_THREADS"


@dataclass(frozen=True, eq=False)
class AntichainPartition:
    """Levels stored flat: level ``i`` is ``vertices[offsets[i]:offsets[i+1]]``."""

    offsets: np.ndarray
    vertices: np.ndarray

    @property
    def ell(self) -> int:
        return len(self.offsets) - 1

    @property
    def levels(self) -> list[np.ndarray]:
        return [self.vertices[self.offsets[i] : self.offsets[i + 1]] for i in range(self.ell)]

    def level_of(self) -> np.ndarray:
        out = np.empty(len(self.vertices), dtype=np.int64)
        out[self.vertices] = np.repeat(np.arange(self.ell), np.diff(self.offsets))
        return out

    def __repr__(self):
        return f"AntichainPartition(ell={self.ell})"


@numba.njit(cache=True)
def _peel_levels(n, indptr, indices):
    outdeg = np.empty(n, np.int64)
    for v in range(n):
        outdeg[v] = indptr[v + 1] - indptr[v]
    # predecessor lists
    cnt = np.zeros(n + 1, np.int64)
    for e in range(len(indices)):
        cnt[indices[e] + 1] += 1
    pptr = np.cumsum(cnt)
    fill = pptr[:-1].copy()
    preds = np.empty(len(indices), np.int64)
    for u in range(n):
        for e in range(indptr[u], indptr[u + 1]):
            w = indices[e]
            preds[fill[w]] = u
            fill[w] += 1
    order = np.empty(n, np.int64)
    offsets = np.zeros(n + 1, np.int64)
    size = 0
    for v in range(n):
        if outdeg[v] == 0:
            order[size] = v
            size += 1
    ell = 0
    lo = 0
    while lo < size:
        hi = size
        order[lo:hi] = np.sort(order[lo:hi])
        ell += 1
        offsets[ell] = hi
        for t in range(lo, hi):
            v = order[t]
            for e in range(pptr[v], pptr[v + 1]):
                w = preds[e]
                outdeg[w] -= 1
                if outdeg[w] == 0:
                    order[size] = w
                    size += 1
        lo = hi
    return offsets[: ell + 1].copy(), order


def antichain_partition(d: Dag) -> AntichainPartition:
    """Minimal antichain partition by repeatedly stripping leaves, O(n + |E|)."""
    offsets, vertices = _peel_levels(d.n, d.indptr, d.indices)
    offsets.flags.writeable = False
    vertices.flags.writeable = False
    return AntichainPartition(offsets, vertices)


# --------------------------------------------------------------------------
# kernels over a slice of one level


@numba.njit(cache=True, nogil=True)
def _zeta_block(verts, nxt, indptr, cols, x, xp, y):
    ops = 0
    for t in range(len(verts)):
        i = verts[t]
        j = nxt[i]
        if j != i:
            xp[i] = xp[j] + x[i]
            ops += 1
        else:
            xp[i] = x[i]
        acc = xp[i]
        for e in range(indptr[i], indptr[i + 1]):
            acc = acc + xp[cols[e]]
            ops += 1
        y[i] = acc
    return ops


@numba.njit(cache=True, nogil=True)
def _solve_block(verts, indptr, cols, x, yp):
    ops = 0
    for t in range(len(verts)):
        i = verts[t]
        acc = x[i]
        for e in range(indptr[i], indptr[i + 1]):
            acc = acc - yp[cols[e]]
            ops += 1
        yp[i] = acc
    return ops


@numba.njit(cache=True, nogil=True)
def _chain_diff_block(lo, hi, nxt, yp, y):
    ops = 0
    for i in range(lo, hi):
        j = nxt[i]
        if j != i:
            y[i] = yp[i] - yp[j]
            ops += 1
        else:
            y[i] = yp[i]
    return ops


def resolve_threads(threads: int | None) -> int:
    """Explicit count wins; otherwise ``$FASTMOBIUS_THREADS``; otherwise 1."""
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1"))
    if threads < 1:
        raise ArgumentError("threads must be >= 1")
    return threads


def _kern(kernel, x):
    return kernel.py_func if x.dtype == object else kernel


class _LevelRunner:
    def __init__(self, threads: int, threshold: int, level_times: list | None):
        self.threads = threads
        self.threshold = threshold
        self.level_times = level_times
        self.pool = ThreadPoolExecutor(threads) if threads > 1 else None

    def run(self, verts: np.ndarray, fn, *args) -> int:
        t0 = time.perf_counter()
        if self.pool is None or len(verts) < self.threshold:
            ops = fn(verts, *args)
        else:
            parts = np.array_split(verts, self.threads)
            futures = [self.pool.submit(fn, p, *args) for p in parts if len(p)]
            ops = sum(f.result() for f in futures)  # barrier
        if self.level_times is not None:
            self.level_times.append(time.perf_counter() - t0)
        return int(ops)

    def close(self):
        if self.pool is not None:
            self.pool.shutdown()


def zeta_parallel(nm: NivMap, cd: ChainDecomposition, ap: AntichainPartition, x,
                  threads: int | None = None, *, threshold: int = DEFAULT_THRESHOLD,
                  return_ops: bool = False, level_times: list | None = None):
    """Level-by-level fast zeta transform; identical output to ``zeta_fast``.

    Levels with fewer than ``threshold`` vertices run on the calling thread.
    If ``level_times`` is a list, per-level wall times are appended to it.
    """
    x = _check(x, nm.n)
    threads = resolve_threads(threads)
    xp = np.empty_like(x)
    y = np.empty_like(x)
    kern = _kern(_zeta_block, x)
    runner = _LevelRunner(threads, threshold, level_times)
    ops = 0
    try:
        for lvl in ap.levels:
            ops += runner.run(lvl, kern, cd.next, nm.indptr, nm.vertex, x, xp, y)
    finally:
        runner.close()
    return (y, ops) if return_ops else y


def moebius_parallel(nm: NivMap, cd: ChainDecomposition, ap: AntichainPartition, x,
                     threads: int | None = None, *, threshold: int = DEFAULT_THRESHOLD,
                     return_ops: bool = False, level_times: list | None = None):
    """Level-by-level triangular solve, then one fully parallel chain-difference pass."""
    x = _check(x, nm.n)
    threads = resolve_threads(threads)
    yp = np.empty_like(x)
    y = np.empty_like(x)
    solve = _kern(_solve_block, x)
    diff = _kern(_chain_diff_block, x)
    runner = _LevelRunner(threads, threshold, level_times)
    ops = 0
    try:
        for lvl in ap.levels:
            ops += runner.run(lvl, solve, nm.indptr, nm.vertex, x, yp)
        n = nm.n
        if runner.pool is None or n < threshold:
            ops += int(diff(0, n, cd.next, yp, y))
        else:
            bounds = np.linspace(0, n, threads + 1).astype(np.int64)
            futures = [runner.pool.submit(diff, int(a), int(b), cd.next, yp, y)
                       for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
            ops += sum(int(f.result()) for f in futures)
    finally:
        runner.close()
    return (y, ops) if return_ops else y


@dataclass(frozen=True)
class ParallelismReport:
    work: int
    depth_zeta_bound: int
    depth_moebius_bound: int
    avg_parallelism_zeta_lb: float
    avg_parallelism_moebius_lb: float


def parallelism_report(nm: NivMap, cd: ChainDecomposition, ap: AntichainPartition) -> ParallelismReport:
    """PRAM work and depth bounds: ``W = nnz - k``, ``D_zeta <= q + ceil(log2 k)``,
    ``D_moebius <= ell * k + 1``."""
    k = cd.k
    work = nm.nnz - k
    d_zeta = cd.q + (math.ceil(math.log2(k)) if k > 0 else 0)
    d_moeb = ap.ell * k + 1
    return ParallelismReport(
        work=work,
        depth_zeta_bound=d_zeta,
        depth_moebius_bound=d_moeb,
        avg_parallelism_zeta_lb=work / d_zeta if d_zeta else 0.0,
        avg_parallelism_moebius_lb=work / d_moeb,
    )
