"""Maximum bipartite matching.

A matcher takes a left-side CSR adjacency ``(indptr, indices)`` and the number
of right vertices and returns ``match_left`` with the matched right vertex of
every left vertex, or -1.  :func:`hopcroft_karp` is the default; any callable
with the same signature can be passed to :func:`fastmobius.chains.decompose`.
"""

from __future__ import annotations

from typing import Callable

import numba
import numpy as np

Matcher = Callable[[np.ndarray, np.ndarray, int], np.ndarray]


@numba.njit(cache=True)
def _hopcroft_karp(indptr, indices, n_right):
    n_left = len(indptr) - 1
    inf = np.iinfo(np.int64).max
    match_l = np.full(n_left, -1, np.int64)
    match_r = np.full(n_right, -1, np.int64)

    # greedy start
    for u in range(n_left):
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if match_r[v] == -1:
                match_l[u] = v
                match_r[v] = u
                break

    dist = np.empty(n_left, np.int64)
    queue = np.empty(n_left, np.int64)
    it = np.empty(n_left, np.int64)
    stack = np.empty(n_left + 1, np.int64)
    via = np.empty(n_left + 1, np.int64)
    while True:
        qt = 0
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                queue[qt] = u
                qt += 1
            else:
                dist[u] = inf
        found = False
        qh = 0
        while qh < qt:
            u = queue[qh]
            qh += 1
            for e in range(indptr[u], indptr[u + 1]):
                w = match_r[indices[e]]
                if w == -1:
                    found = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue[qt] = w
                    qt += 1
        if not found:
            break

        for u in range(n_left):
            it[u] = indptr[u]
        for root in range(n_left):
            if match_l[root] != -1:
                continue
            top = 0
            stack[0] = root
            while top >= 0:
                u = stack[top]
                pushed = False
                while it[u] < indptr[u + 1]:
                    v = indices[it[u]]
                    it[u] += 1
                    w = match_r[v]
                    if w == -1:
                        via[top] = v
                        for lvl in range(top + 1):
                            a = stack[lvl]
                            b = via[lvl]
                            match_l[a] = b
                            match_r[b] = a
                        top = -1
                        pushed = True
                        break
                    if dist[w] == dist[u] + 1:
                        via[top] = v
                        top += 1
                        stack[top] = w
                        pushed = True
                        break
                if not pushed:
                    dist[u] = inf
                    top -= 1
    return match_l


def hopcroft_karp(indptr: np.ndarray, indices: np.ndarray, n_right: int) -> np.ndarray:
    """Maximum cardinality matching, O(|E| sqrt(V)).

    Deterministic for a fixed adjacency order.
    """
    return _hopcroft_karp(
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        int(n_right),
    )
