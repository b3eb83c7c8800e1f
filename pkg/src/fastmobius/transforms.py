"""Zeta and Moebius transforms.

Vectors are 1-D numpy arrays indexed by vertex (topological position).  The
fast transforms run compiled loops for numeric dtypes and fall back to the same
loops in plain Python for ``dtype=object``, so exact rationals or arbitrary
precision integers work too.

Fast path, with ``c`` the per-chain suffix sums (``c[i] = x[i] + c[next[i]]``)::

    zeta:    y[i]  = c[i] + sum(c[j] for j in niv(i) minus i)
    moebius: y'[i] = x[i] - sum(y'[j] for j in niv(i) minus i)   (bottom-up)
             y[i]  = y'[i] - y'[next[i]]                         (chain difference)

Both take exactly ``nnz(N) - k`` ring additions/subtractions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .chains import ChainDecomposition
from .dag import ClosureMatrix, Dag, transitive_closure
from .errors import LengthMismatchError, TooLargeError
from .niv import NivMap

MOEBIUS_FUNCTION_MAX_N = 2000


def _check(x, n: int) -> np.ndarray:
    x = np.asarray(x)
    if x.ndim != 1 or len(x) != n:
        raise LengthMismatchError(f"vector has shape {x.shape}, expected ({n},)")
    return x


def _compiled(kernel, x: np.ndarray):
    return kernel.py_func if x.dtype == object else kernel


@numba.njit(cache=True)
def _zeta_kernel(nxt, indptr, cols, x, xp, y):
    ops = 0
    for i in range(len(x) - 1, -1, -1):
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


@numba.njit(cache=True)
def _moebius_kernel(nxt, indptr, cols, x, yp, y):
    ops = 0
    for i in range(len(x) - 1, -1, -1):
        acc = x[i]
        for e in range(indptr[i], indptr[i + 1]):
            acc = acc - yp[cols[e]]
            ops += 1
        yp[i] = acc
    for i in range(len(x) - 1, -1, -1):
        j = nxt[i]
        if j != i:
            y[i] = yp[i] - yp[j]
            ops += 1
        else:
            y[i] = yp[i]
    return ops


def zeta_fast(nm: NivMap, cd: ChainDecomposition, x, *, return_ops: bool = False):
    """``Z @ x`` in ``nnz(N) - k`` additions.

    With ``return_ops=True`` returns ``(y, ops)`` where ``ops`` is the number
    of additions actually executed.
    """
    x = _check(x, nm.n)
    xp = np.empty_like(x)
    y = np.empty_like(x)
    ops = _compiled(_zeta_kernel, x)(cd.next, nm.indptr, nm.vertex, x, xp, y)
    return (y, int(ops)) if return_ops else y


def moebius_fast(nm: NivMap, cd: ChainDecomposition, x, *, return_ops: bool = False):
    """``Z^-1 @ x``: triangular solve against the niv factor, then chain differences."""
    x = _check(x, nm.n)
    yp = np.empty_like(x)
    y = np.empty_like(x)
    ops = _compiled(_moebius_kernel, x)(cd.next, nm.indptr, nm.vertex, x, yp, y)
    return (y, int(ops)) if return_ops else y


# --------------------------------------------------------------------------
# oracles


def zeta_naive(cm: ClosureMatrix, x) -> np.ndarray:
    """``y[i] = sum(x[j] for j in closure row i)``."""
    x = _check(x, cm.n)
    y = np.empty_like(x)
    for i in range(cm.n):
        y[i] = x[cm.row(i)].sum()
    return y


def moebius_naive(cm: ClosureMatrix, x) -> np.ndarray:
    """Back-substitution on the unit upper triangular zeta matrix."""
    x = _check(x, cm.n)
    y = np.empty_like(x)
    for i in range(cm.n - 1, -1, -1):
        below = cm.row(i)[1:]
        y[i] = x[i] - y[below].sum() if len(below) else x[i]
    return y


@dataclass(frozen=True)
class MoebiusMatrix:
    """Dense ``M`` with ``matrix[x, y] = mu(y, x)``, so ``f = M @ g``."""

    matrix: np.ndarray

    @property
    def rows(self) -> list[list[tuple[int, int]]]:
        return [[(int(c), int(r[c])) for c in np.flatnonzero(r)] for r in self.matrix]

    def __matmul__(self, other):
        return self.matrix @ other


def moebius_function(d: Dag, closure: ClosureMatrix | None = None) -> MoebiusMatrix:
    """Moebius function from its defining recursion.

    ``mu(a, a) = 1`` and ``mu(a, b) = -sum(mu(a, z) for a <= z < b)``, evaluated
    for each lower element ``a`` over its up-set from the bottom up.
    """
    n = d.n
    if n > MOEBIUS_FUNCTION_MAX_N:
        raise TooLargeError(f"moebius_function supports n <= {MOEBIUS_FUNCTION_MAX_N}, got {n}")
    if closure is None:
        closure = transitive_closure(d)
    rows = [closure.row(i) for i in range(n)]
    # up[a] = all b with a <= b, descending in poset order means ascending index reversed
    up = [[] for _ in range(n)]
    for b in range(n):
        for a in rows[b].tolist():
            up[a].append(b)
    m = np.zeros((n, n), dtype=np.int64)
    mu_a = np.zeros(n, dtype=np.int64)
    for a in range(n):
        mu_a[:] = 0
        # up[a] is ascending in index; walk from a (largest index) toward the top
        for b in reversed(up[a]):
            if b == a:
                mu_a[b] = 1
            else:
                # entries of row b other than b itself lie strictly below b
                mu_a[b] = -mu_a[rows[b][1:]].sum()
        m[:, a] = mu_a
    return MoebiusMatrix(m)


@dataclass(frozen=True)
class OpCounts:
    fast_ops: int
    naive_ops: int
    k: int
    nnz: int


def chain_suffix_lengths(cd: ChainDecomposition) -> np.ndarray:
    """Number of chain elements from each vertex to the end of its chain."""
    out = np.empty(cd.n, dtype=np.int64)
    for c in cd.chains:
        out[c] = np.arange(len(c), 0, -1)
    return out


def operation_count(nm: NivMap, cd: ChainDecomposition) -> OpCounts:
    """Ring-operation counts of the fast transforms and of a direct ``Z @ x``.

    The direct count is ``sum(|down(x)| - 1)``; ``|down(x)|`` is obtained from
    the niv rows and chain suffix lengths without building the closure.
    """
    suffix = chain_suffix_lengths(cd)
    down_sizes = suffix.copy()
    rows = np.repeat(np.arange(nm.n), np.diff(nm.indptr))
    np.add.at(down_sizes, rows, suffix[nm.vertex])
    return OpCounts(
        fast_ops=nm.nnz - nm.k,
        naive_ops=int(down_sizes.sum()) - nm.n,
        k=nm.k,
        nnz=nm.nnz,
    )


def factor_matrices(nm: NivMap, cd: ChainDecomposition) -> dict[str, np.ndarray]:
    """Dense ``U``, ``V``, ``V^-1``, ``P`` and ``B`` with ``Z = U V`` and ``V = P^T B P`` (small ``n``).

    ``U[i, j] = 1`` iff ``j`` is in ``niv(i)``; ``V`` is the closure of the
    chains alone; ``V^-1`` has a single ``-1`` per row at ``next[i]``.
    Debug aid only; the fast transforms never build these.
    """
    n = nm.n
    u = np.eye(n, dtype=np.int64)
    rows = np.repeat(np.arange(n), np.diff(nm.indptr))
    u[rows, nm.vertex] = 1
    v = np.zeros((n, n), dtype=np.int64)
    for c in cd.chains:
        for a, i in enumerate(c):
            v[i, c[a:]] = 1
    v_inv = np.eye(n, dtype=np.int64)
    moving = np.flatnonzero(cd.next != np.arange(n))
    v_inv[moving, cd.next[moving]] = -1
    # P lays the chains out contiguously; B is then block upper-triangular ones
    order = np.concatenate(cd.chains) if cd.k else np.empty(0, dtype=np.int64)
    p = np.zeros((n, n), dtype=np.int64)
    p[np.arange(n), order] = 1
    b = np.zeros((n, n), dtype=np.int64)
    start = 0
    for c in cd.chains:
        end = start + len(c)
        b[start:end, start:end] = np.triu(np.ones((len(c), len(c)), dtype=np.int64))
        start = end
    return {"U": u, "V": v, "V_inv": v_inv, "P": p, "B": b}


def to_triplets(a: np.ndarray) -> list[tuple[int, int, int]]:
    """Nonzero entries of a dense matrix as 0-based ``(row, col, value)`` triplets."""
    r, c = np.nonzero(a)
    return list(zip(r.tolist(), c.tolist(), a[r, c].tolist()))
