"""Per-chain maximal reachable elements (the niv map) and reachability queries.

For vertex ``x`` and chain ``j``, ``niv_j(x)`` is the largest element of
``down(x) ∩ Z_j``.  With descending numbering the poset maximum is the
smallest vertex index, so everything here is an index minimum.  The self entry
``niv_{id(x)}(x) = x`` is implicit: it is not stored, but it is counted in
:attr:`NivMap.nnz`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .chains import ChainDecomposition
from .dag import Dag


@dataclass(frozen=True, eq=False)
class NivMap:
    """Sparse ``n x k`` niv matrix, CSR without the diagonal (self) entries.

    ``chain[indptr[i]:indptr[i+1]]`` are the chain ids of row ``i`` (ascending)
    and ``vertex[...]`` the matching ``niv`` values, all ``> i``.
    """

    n: int
    k: int
    indptr: np.ndarray
    chain: np.ndarray
    vertex: np.ndarray

    def __post_init__(self):
        for a in (self.indptr, self.chain, self.vertex):
            a.flags.writeable = False

    @property
    def nnz(self) -> int:
        return int(self.indptr[-1]) + self.n

    def row(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        s = slice(self.indptr[i], self.indptr[i + 1])
        return self.chain[s], self.vertex[s]

    def to_dense(self, chain_id: np.ndarray) -> np.ndarray:
        """``n x k`` int64 matrix with -1 for absent entries, self entries filled in."""
        out = np.full((self.n, self.k), -1, dtype=np.int64)
        rows = np.repeat(np.arange(self.n), np.diff(self.indptr))
        out[rows, self.chain] = self.vertex
        out[np.arange(self.n), chain_id] = np.arange(self.n)
        return out

    def __repr__(self):
        return f"NivMap(n={self.n}, k={self.k}, nnz={self.nnz})"


@numba.njit(cache=True)
def _niv_kernel(n, k, indptr, indices, chain_id):
    inf = n
    scratch = np.full(k, inf, np.int64)
    touched = np.empty(k, np.int64)
    row_start = np.zeros(n, np.int64)
    row_len = np.zeros(n, np.int64)
    cap = max(16, 2 * n)
    buf_c = np.empty(cap, np.int64)
    buf_v = np.empty(cap, np.int64)
    pos = 0
    for v in range(n - 1, -1, -1):
        t = 0
        for e in range(indptr[v], indptr[v + 1]):
            w = indices[e]
            cw = chain_id[w]
            if w < scratch[cw]:
                # w itself, then its stored row
                if scratch[cw] == inf:
                    touched[t] = cw
                    t += 1
                scratch[cw] = w
                for f in range(row_start[w], row_start[w] + row_len[w]):
                    c = buf_c[f]
                    p = buf_v[f]
                    if p < scratch[c]:
                        if scratch[c] == inf:
                            touched[t] = c
                            t += 1
                        scratch[c] = p
        own = chain_id[v]
        if pos + t > cap:
            while pos + t > cap:
                cap *= 2
            g = np.empty(cap, np.int64)
            g[:pos] = buf_c[:pos]
            buf_c = g
            g = np.empty(cap, np.int64)
            g[:pos] = buf_v[:pos]
            buf_v = g
        row_start[v] = pos
        ts = np.sort(touched[:t])
        for s in range(t):
            c = ts[s]
            if c != own:
                buf_c[pos] = c
                buf_v[pos] = scratch[c]
                pos += 1
            scratch[c] = inf
        row_len[v] = pos - row_start[v]
    out_ptr = np.zeros(n + 1, np.int64)
    for v in range(n):
        out_ptr[v + 1] = out_ptr[v] + row_len[v]
    out_c = np.empty(pos, np.int64)
    out_v = np.empty(pos, np.int64)
    for v in range(n):
        s = row_start[v]
        o = out_ptr[v]
        for f in range(row_len[v]):
            out_c[o + f] = buf_c[s + f]
            out_v[o + f] = buf_v[s + f]
    return out_ptr, out_c, out_v


def compute_niv(d: Dag, cd: ChainDecomposition) -> NivMap:
    """niv map of every vertex, processing vertices from the bottom up.

    A vertex merges the rows of its successors into a ``k``-slot scratch array
    keeping the per-chain minimum index.  A successor ``w`` whose own chain slot
    already holds something at least as large as ``w`` is skipped outright: its
    row is dominated by a row merged earlier.  Runs in O(|E| + |E_red| * k).
    """
    if cd.n != d.n:
        raise ValueError("decomposition does not belong to this DAG")
    indptr, chain, vertex = _niv_kernel(d.n, cd.k, d.indptr, d.indices, cd.chain_id)
    return NivMap(d.n, cd.k, indptr, chain, vertex)


def reachability_set(nm: NivMap, cd: ChainDecomposition, x: int) -> np.ndarray:
    """All ``y <= x`` as a sorted index array.

    Walks each chain from ``niv_j(x)`` to its end; the walks are disjoint, and
    a repeated visit raises ``RuntimeError``.
    """
    nxt = cd.next
    _, starts = nm.row(x)
    out = []
    for v in (x, *starts.tolist()):
        out.append(v)
        while nxt[v] != v:
            v = int(nxt[v])
            out.append(v)
    res = np.array(out, dtype=np.int64)
    res.sort()
    if len(res) > 1 and (res[1:] == res[:-1]).any():
        raise RuntimeError(f"chain walks from vertex {x} overlap")
    return res
