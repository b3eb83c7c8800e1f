"""DAG representation of a finite poset.

Vertices are renumbered by a descending topological order: index 0 is a
maximal element and every edge ``(u, v)`` satisfies ``u < v``.  An input edge
``(u, v)`` means ``v <= u`` in the poset, i.e. the DAG points from larger to
smaller elements.  Successor lists are stored in CSR form (``indptr``,
``indices``) and sorted ascending.
"""

from __future__ import annotations

import logging
from contextlib import contextmanager
from dataclasses import dataclass, field
from numbers import Integral, Real
from typing import Hashable, Iterable, Sequence

import numba
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import ArgumentError, CycleError, SelfLoopError, TooLargeError

logger = logging.getLogger(__name__)

WIDTH_BRUTEFORCE_MAX_N = 24


def label_key(label: Hashable) -> tuple:
    """Sort key giving a total order over mixed label types (numbers before strings)."""
    if isinstance(label, (Integral, Real)) and not isinstance(label, bool):
        return (0, label, "")
    if isinstance(label, str):
        return (1, 0, label)
    return (2, 0, repr(label))


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Dag:
    """Immutable DAG with descending topological numbering.

    Attributes
    ----------
    n : int
        Number of vertices.
    indptr, indices : ndarray of int64
        CSR successor lists; ``indices[indptr[i]:indptr[i + 1]]`` are the
        direct successors (smaller elements) of vertex ``i``, ascending.
    labels : sequence
        ``labels[i]`` is the external label of vertex ``i``.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    labels: Sequence[Hashable]
    _label_index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        _freeze(self.indptr)
        _freeze(self.indices)

    @property
    def num_edges(self) -> int:
        return int(self.indptr[-1])

    def successors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def edges(self) -> np.ndarray:
        """All edges as an ``(m, 2)`` array of vertex indices."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
        return np.column_stack([src, self.indices])

    def label_edges(self) -> list[tuple[Hashable, Hashable]]:
        lab = self.labels
        return [(lab[u], lab[v]) for u, v in self.edges().tolist()]

    def index_of(self, label: Hashable) -> int:
        if self._label_index is None:
            object.__setattr__(self, "_label_index", {lab: i for i, lab in enumerate(self.labels)})
        return self._label_index[label]

    def __repr__(self):
        return f"Dag(n={self.n}, edges={self.num_edges})"


@dataclass(frozen=True, eq=False)
class ClosureMatrix:
    """Reflexive transitive closure in CSR form.

    Row ``i`` holds every ``j`` with ``x_j <= x_i`` (``i`` included), sorted
    ascending, so all entries satisfy ``j >= i``.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        _freeze(self.indptr)
        _freeze(self.indices)

    def row(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    @property
    def nnz(self) -> int:
        return int(self.indptr[-1])

    @property
    def num_edges(self) -> int:
        """Number of strict comparabilities, i.e. ``|E_close|``."""
        return self.nnz - self.n

    def contains(self, i: int, j: int) -> bool:
        """True if ``x_j <= x_i``."""
        r = self.row(i)
        pos = np.searchsorted(r, j)
        return bool(pos < len(r) and r[pos] == j)

    def to_dense(self) -> np.ndarray:
        """Dense 0/1 zeta matrix (small ``n`` only)."""
        z = np.zeros((self.n, self.n), dtype=np.int64)
        rows = np.repeat(np.arange(self.n), np.diff(self.indptr))
        z[rows, self.indices] = 1
        return z

    def to_sparse(self) -> csr_matrix:
        data = np.ones(self.nnz, dtype=np.int64)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))


# --------------------------------------------------------------------------
# construction


@numba.njit(cache=True)
def _kahn_min(n, src, dst, rank):
    # Kahn's algorithm with a binary min-heap keyed on rank; returns order or
    # a short array if a cycle prevents completion.
    indeg = np.zeros(n, np.int64)
    outdeg = np.zeros(n + 1, np.int64)
    for e in range(len(src)):
        indeg[dst[e]] += 1
        outdeg[src[e] + 1] += 1
    ptr = np.cumsum(outdeg)
    fill = ptr[:-1].copy()
    adj = np.empty(len(src), np.int64)
    for e in range(len(src)):
        adj[fill[src[e]]] = dst[e]
        fill[src[e]] += 1
    by_rank = np.empty(n, np.int64)
    for v in range(n):
        by_rank[rank[v]] = v
    heap = np.empty(n, np.int64)
    size = 0
    for v in range(n):
        if indeg[v] == 0:
            # push rank[v]
            heap[size] = rank[v]
            c = size
            size += 1
            while c > 0:
                p = (c - 1) // 2
                if heap[p] <= heap[c]:
                    break
                heap[p], heap[c] = heap[c], heap[p]
                c = p
    order = np.empty(n, np.int64)
    cnt = 0
    while size > 0:
        top = heap[0]
        size -= 1
        heap[0] = heap[size]
        c = 0
        while True:
            l = 2 * c + 1
            if l >= size:
                break
            r = l + 1
            m = l
            if r < size and heap[r] < heap[l]:
                m = r
            if heap[c] <= heap[m]:
                break
            heap[c], heap[m] = heap[m], heap[c]
            c = m
        u = by_rank[top]
        order[cnt] = u
        cnt += 1
        for e in range(ptr[u], ptr[u + 1]):
            w = adj[e]
            indeg[w] -= 1
            if indeg[w] == 0:
                heap[size] = rank[w]
                c = size
                size += 1
                while c > 0:
                    p = (c - 1) // 2
                    if heap[p] <= heap[c]:
                        break
                    heap[p], heap[c] = heap[c], heap[p]
                    c = p
    return order[:cnt]


def _csr_from_pairs(n: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Deduplicated CSR with ascending rows."""
    if len(src):
        key = np.unique(src * np.int64(n) + dst)
        src, dst = key // n, key % n
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, np.ascontiguousarray(dst, dtype=np.int64)


@contextmanager
def quiet_connectivity_warnings():
    """Silence the disconnected-DAG warning (batch runs over random graphs)."""
    prev = logger.level
    logger.setLevel(logging.ERROR)
    try:
        yield
    finally:
        logger.setLevel(prev)


def _warn_if_disconnected(n: int, indptr: np.ndarray, indices: np.ndarray) -> None:
    if n <= 1:
        return
    g = csr_matrix((np.ones(len(indices), dtype=np.int8), indices, indptr), shape=(n, n))
    ncomp, _ = connected_components(g, directed=True, connection="weak")
    if ncomp > 1:
        logger.warning("DAG is not connected (%d weak components); continuing", ncomp)


def _build_from_ids(n: int, src: np.ndarray, dst: np.ndarray, rank: np.ndarray, labels) -> Dag:
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    loops = np.flatnonzero(src == dst)
    if len(loops):
        lab = labels[int(src[loops[0]])]
        raise SelfLoopError(f"self-loop on vertex {lab!r}")
    order = _kahn_min(n, src, dst, np.asarray(rank, dtype=np.int64))
    if len(order) < n:
        raise CycleError(f"directed cycle detected ({n - len(order)} vertices unsortable)")
    new_index = np.empty(n, dtype=np.int64)
    new_index[order] = np.arange(n, dtype=np.int64)
    indptr, indices = _csr_from_pairs(n, new_index[src], new_index[dst])
    if isinstance(labels, np.ndarray):
        new_labels = labels[order]
        _freeze(new_labels)
    else:
        new_labels = tuple(labels[i] for i in order.tolist())
    _warn_if_disconnected(n, indptr, indices)
    return Dag(n, indptr, indices, new_labels)


def build_dag(
    edges: Iterable[tuple[Hashable, Hashable]],
    vertices: Iterable[Hashable] = (),
) -> Dag:
    """Build a :class:`Dag` from labelled edges ``(u, v)`` meaning ``v <= u``.

    Vertices are numbered by Kahn's algorithm, always popping the ready vertex
    with the smallest label (see :func:`label_key`).  Duplicate edges are
    dropped; ``vertices`` may declare isolated elements.

    >>> d = build_dag([("a", "b"), ("b", "c")])
    >>> d.labels, d.successors(0).tolist()
    (('a', 'b', 'c'), [1])
    """
    ids: dict = {}
    for v in vertices:
        ids.setdefault(v, len(ids))
    src, dst = [], []
    for u, v in edges:
        src.append(ids.setdefault(u, len(ids)))
        dst.append(ids.setdefault(v, len(ids)))
    labels = list(ids)
    n = len(labels)
    rank = np.empty(n, dtype=np.int64)
    rank[sorted(range(n), key=lambda i: label_key(labels[i]))] = np.arange(n)
    return _build_from_ids(n, np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64), rank, labels)


def dag_from_arrays(n: int, src, dst, labels: np.ndarray | None = None) -> Dag:
    """Fast path for integer-labelled graphs given as parallel edge arrays.

    ``src``/``dst`` are label values in ``range(n)`` when ``labels`` is None,
    otherwise positions into ``labels`` (which must be distinct integers).
    """
    if labels is None:
        labels = np.arange(n, dtype=np.int64)
    labels = np.asarray(labels)
    rank = np.empty(n, dtype=np.int64)
    rank[np.argsort(labels, kind="stable")] = np.arange(n)
    return _build_from_ids(n, src, dst, rank, labels)


# --------------------------------------------------------------------------
# closure / reduction


@numba.njit(cache=True)
def _closure_kernel(n, indptr, indices):
    mark = np.full(n, -1, np.int64)
    stack = np.empty(n, np.int64)
    out_ptr = np.zeros(n + 1, np.int64)
    cap = max(16, 2 * (n + len(indices)))
    out = np.empty(cap, np.int64)
    pos = 0
    for s in range(n):
        start = pos
        mark[s] = s
        stack[0] = s
        sp = 1
        while sp > 0:
            sp -= 1
            u = stack[sp]
            if pos == cap:
                cap *= 2
                grown = np.empty(cap, np.int64)
                grown[:pos] = out[:pos]
                out = grown
            out[pos] = u
            pos += 1
            for e in range(indptr[u], indptr[u + 1]):
                w = indices[e]
                if mark[w] != s:
                    mark[w] = s
                    stack[sp] = w
                    sp += 1
        out[start:pos] = np.sort(out[start:pos])
        out_ptr[s + 1] = pos
    return out_ptr, out[:pos].copy()


def transitive_closure(d: Dag) -> ClosureMatrix:
    """Reflexive transitive closure by one DFS per vertex, O(n * |E|)."""
    indptr, indices = _closure_kernel(d.n, d.indptr, d.indices)
    return ClosureMatrix(d.n, indptr, indices)


@numba.njit(cache=True)
def _reduction_kernel(n, indptr, indices, cptr, cidx):
    stamp = np.full(n, -1, np.int64)
    keep = np.zeros(len(indices), np.bool_)
    for u in range(n):
        for e in range(indptr[u], indptr[u + 1]):
            w = indices[e]
            # strict descendants of w (skip the reflexive entry)
            for f in range(cptr[w], cptr[w + 1]):
                z = cidx[f]
                if z != w:
                    stamp[z] = u
        for e in range(indptr[u], indptr[u + 1]):
            keep[e] = stamp[indices[e]] != u
    return keep


def transitive_reduction(d: Dag, closure: ClosureMatrix | None = None) -> Dag:
    """Cover graph of ``d``; vertex numbering and labels are unchanged."""
    if closure is None:
        closure = transitive_closure(d)
    keep = _reduction_kernel(d.n, d.indptr, d.indices, closure.indptr, closure.indices)
    src = np.repeat(np.arange(d.n, dtype=np.int64), np.diff(d.indptr))[keep]
    indptr, indices = _csr_from_pairs(d.n, src, np.asarray(d.indices)[keep])
    return Dag(d.n, indptr, indices, d.labels)


# --------------------------------------------------------------------------
# random generation


def _pair_row(idx: np.ndarray, n: int) -> np.ndarray:
    # row i of the strict upper triangle starts at S(i) = i*(2n-i-1)/2
    def start(i):
        return i * (2 * n - i - 1) // 2

    i = np.floor(((2 * n - 1) - np.sqrt((2.0 * n - 1) ** 2 - 8.0 * idx)) / 2).astype(np.int64)
    i = np.clip(i, 0, n - 2)
    while True:
        lo = start(i) > idx
        hi = start(i + 1) <= idx
        if not (lo.any() or hi.any()):
            return i
        i = i - lo + hi


def generate_erdos_renyi(n: int, delta: float, seed: int | None = None) -> Dag:
    """Random DAG with expected average total degree ``delta``.

    A random vertex ordering is drawn and every pair ``i < j`` of positions
    becomes an edge from position ``i`` to position ``j`` with probability
    ``p = delta / (n - 1)``.  Vertex labels are ``0..n-1`` assigned by a random
    permutation, so labels are not a topological order of the result.
    """
    if n < 1:
        raise ArgumentError("n must be >= 1")
    if delta < 0:
        raise ArgumentError("delta must be >= 0")
    if delta > max(n - 1, 0):
        raise ArgumentError(f"delta={delta} exceeds n-1={n - 1}")
    rng = np.random.default_rng(seed)
    total = n * (n - 1) // 2
    p = delta / (n - 1) if n > 1 else 0.0
    if p <= 0.0 or total == 0:
        idx = np.empty(0, dtype=np.int64)
    elif p >= 1.0:
        idx = np.arange(total, dtype=np.int64)
    else:
        # Bernoulli(p) over the flattened pair index via geometric gaps
        chunks = []
        pos = np.int64(-1)
        batch = int(total * p + 10 * np.sqrt(total * p) + 64)
        while True:
            gaps = rng.geometric(p, size=batch).astype(np.int64)
            cand = pos + np.cumsum(gaps)
            if cand[-1] >= total:
                chunks.append(cand[cand < total])
                break
            chunks.append(cand)
            pos = cand[-1]
        idx = np.concatenate(chunks)
    i = _pair_row(idx, n) if len(idx) else idx
    j = idx - (i * (2 * n - i - 1) // 2) + i + 1
    perm = rng.permutation(n).astype(np.int64)
    # position a carries label perm[a]; ids passed to the builder are positions
    return dag_from_arrays(n, i, j, labels=perm)


# --------------------------------------------------------------------------
# width oracle


def width_bruteforce(d: Dag, closure: ClosureMatrix | None = None) -> int:
    """Largest antichain size by exhaustive branch-and-bound over subsets."""
    n = d.n
    if n > WIDTH_BRUTEFORCE_MAX_N:
        raise TooLargeError(f"width_bruteforce supports n <= {WIDTH_BRUTEFORCE_MAX_N}, got {n}")
    if closure is None:
        closure = transitive_closure(d)
    comp = [0] * n
    for i in range(n):
        for j in closure.row(i).tolist():
            comp[i] |= 1 << j
            comp[j] |= 1 << i
    best = 0

    def search(candidates: int, size: int) -> None:
        nonlocal best
        if size + bin(candidates).count("1") <= best:
            return
        if candidates == 0:
            best = size
            return
        v = (candidates & -candidates).bit_length() - 1
        # include v: drop everything comparable to it (comp[v] contains v)
        search(candidates & ~comp[v], size + 1)
        search(candidates & ~(1 << v), size)

    search((1 << n) - 1, 0)
    return best
