"""Chain decompositions of a DAG.

``next[x]`` is the vertex after ``x`` on its chain (``next[x] == x`` at the
chain end) and ``chain_id[x]`` the 0-based chain index.  Chains are listed from
their largest element downward, i.e. with ascending vertex indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .dag import ClosureMatrix, Dag, transitive_closure
from .errors import NotAChainError, NotAPartitionError
from .matching import Matcher, hopcroft_karp


@dataclass(frozen=True, eq=False)
class ChainDecomposition:
    next: np.ndarray
    chain_id: np.ndarray
    chains: tuple[np.ndarray, ...]

    def __post_init__(self):
        self.next.flags.writeable = False
        self.chain_id.flags.writeable = False

    @property
    def n(self) -> int:
        return len(self.next)

    @property
    def k(self) -> int:
        return len(self.chains)

    @property
    def q(self) -> int:
        return longest_chain_q(self)

    def __repr__(self):
        return f"ChainDecomposition(n={self.n}, k={self.k})"


def _from_next(nxt: np.ndarray) -> ChainDecomposition:
    n = len(nxt)
    has_prev = np.zeros(n, dtype=bool)
    moving = nxt != np.arange(n)
    has_prev[nxt[moving]] = True
    heads = np.flatnonzero(~has_prev)
    chain_id = np.empty(n, dtype=np.int64)
    chains = []
    nxt_list = nxt.tolist()
    for cid, h in enumerate(heads.tolist()):
        members = [h]
        while nxt_list[members[-1]] != members[-1]:
            members.append(nxt_list[members[-1]])
        arr = np.array(members, dtype=np.int64)
        chain_id[arr] = cid
        arr.flags.writeable = False
        chains.append(arr)
    return ChainDecomposition(nxt, chain_id, tuple(chains))


def decompose(d: Dag, *, minimal: bool = True, matcher: Matcher = hopcroft_karp,
              closure: ClosureMatrix | None = None) -> ChainDecomposition:
    """Chain decomposition from a maximum matching on the split bipartite graph.

    Every vertex ``v`` gets a left copy and a right copy; a DAG edge ``(v, u)``
    becomes the bipartite edge ``(v_left, u_right)`` and matched pairs become
    ``next[v] = u``.  With ``minimal=True`` the edges are taken from the
    transitive closure, which makes the chain count equal to the width.  With
    ``minimal=False`` the input edges are used as given: the result is a
    minimum path cover, a valid but possibly larger decomposition.
    """
    if minimal:
        if closure is None:
            closure = transitive_closure(d)
        indptr, indices = _strict_rows(closure)
    else:
        indptr, indices = d.indptr, d.indices
    match_left = matcher(indptr, indices, d.n)
    nxt = np.where(match_left >= 0, match_left, np.arange(d.n, dtype=np.int64)).astype(np.int64)
    return _from_next(nxt)


def _strict_rows(closure: ClosureMatrix) -> tuple[np.ndarray, np.ndarray]:
    # drop the reflexive entry, which is the first element of each sorted row
    keep = np.ones(closure.nnz, dtype=bool)
    keep[closure.indptr[:-1]] = False
    indptr = closure.indptr - np.arange(closure.n + 1, dtype=np.int64)
    return indptr, closure.indices[keep]


def decompose_explicit(d: Dag, chains: Iterable[Sequence[int]],
                       closure: ClosureMatrix | None = None) -> ChainDecomposition:
    """Validate user-supplied chains (vertex indices) and build next/chain_id.

    The order of the chains is kept; members of a chain may come in any order.
    """
    chains = [sorted(int(v) for v in c) for c in chains]
    seen = np.zeros(d.n, dtype=np.int64)
    for c in chains:
        if not c:
            raise NotAPartitionError("empty chain")
        for v in c:
            if not 0 <= v < d.n:
                raise NotAPartitionError(f"vertex index {v} out of range")
            seen[v] += 1
    if (seen != 1).any():
        bad = int(np.flatnonzero(seen != 1)[0])
        raise NotAPartitionError(
            f"vertex {d.labels[bad]!r} appears {int(seen[bad])} times across chains"
        )
    if closure is None:
        closure = transitive_closure(d)
    nxt = np.arange(d.n, dtype=np.int64)
    chain_id = np.empty(d.n, dtype=np.int64)
    frozen = []
    for cid, c in enumerate(chains):
        for a, b in zip(c, c[1:]):
            if not closure.contains(a, b):
                raise NotAChainError(
                    f"chain {cid}: {d.labels[a]!r} and {d.labels[b]!r} are incomparable"
                )
            nxt[a] = b
        arr = np.array(c, dtype=np.int64)
        chain_id[arr] = cid
        arr.flags.writeable = False
        frozen.append(arr)
    return ChainDecomposition(nxt, chain_id, tuple(frozen))


def longest_chain_q(cd: ChainDecomposition) -> int:
    return max((len(c) for c in cd.chains), default=0)
