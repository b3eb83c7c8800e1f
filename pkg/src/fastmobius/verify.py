"""Self-check suite behind ``fastmobius verify``.

Each check compares a fast path against an independent slow one (closure
rows, brute-force width, longest-path DP, dense back-substitution).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chains import ChainDecomposition, decompose
from .dag import (
    WIDTH_BRUTEFORCE_MAX_N,
    Dag,
    generate_erdos_renyi,
    quiet_connectivity_warnings,
    transitive_closure,
    transitive_reduction,
    width_bruteforce,
)
from .niv import NivMap, compute_niv, reachability_set
from .parallel import antichain_partition, moebius_parallel, zeta_parallel
from .transforms import moebius_fast, moebius_naive, operation_count, zeta_fast, zeta_naive


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class Report:
    results: list[CheckResult] = field(default_factory=list)
    context: str = ""

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def first_failure(self) -> CheckResult | None:
        return next((r for r in self.results if not r.ok), None)


def niv_oracle(closure, cd: ChainDecomposition) -> np.ndarray:
    """Dense ``n x k`` niv matrix (-1 = absent) straight from closure rows."""
    out = np.full((closure.n, cd.k), -1, dtype=np.int64)
    for i in range(closure.n):
        row = closure.row(i)
        chains, first = np.unique(cd.chain_id[row], return_index=True)
        out[i, chains] = row[first]
    return out


def longest_chain_dp(d: Dag) -> int:
    """Vertices on a longest path, by DP in reverse topological order."""
    best = np.ones(d.n, dtype=np.int64)
    for u in range(d.n - 1, -1, -1):
        s = d.successors(u)
        if len(s):
            best[u] = 1 + best[s].max()
    return int(best.max()) if d.n else 0


def check_instance(d: Dag, cd: ChainDecomposition | None = None, *, seed: int = 0,
                   threads=(1, 2, 4)) -> Report:
    rep = Report()
    add = rep.results.append
    rng = np.random.default_rng(seed)

    edges = d.edges()
    add(CheckResult("descending numbering", bool((edges[:, 0] < edges[:, 1]).all())))

    cm = transitive_closure(d)
    red = transitive_reduction(d, cm)
    cm_red = transitive_closure(red)
    add(CheckResult(
        "closure(reduction) == closure",
        np.array_equal(cm.indptr, cm_red.indptr) and np.array_equal(cm.indices, cm_red.indices),
    ))
    add(CheckResult("|E_red| <= |E| <= |E_close|", red.num_edges <= d.num_edges <= cm.num_edges))

    injected = cd is not None
    if cd is None:
        cd = decompose(d, closure=cm)
    ok = all(cm.contains(int(a), int(b)) for c in cd.chains for a, b in zip(c[:-1], c[1:]))
    add(CheckResult("chains totally ordered", ok and sum(len(c) for c in cd.chains) == d.n))
    if not injected and d.n <= min(20, WIDTH_BRUTEFORCE_MAX_N):
        w = width_bruteforce(d, cm)
        add(CheckResult("k == width", cd.k == w, f"k={cd.k} width={w}"))

    nm = compute_niv(d, cd)
    add(CheckResult("niv == closure oracle", np.array_equal(nm.to_dense(cd.chain_id), niv_oracle(cm, cd))))
    ok = all(np.array_equal(reachability_set(nm, cd, i), cm.row(i)) for i in range(d.n))
    add(CheckResult("reachability == closure rows", ok))

    x = rng.integers(-1000, 1001, size=d.n)
    y, zops = zeta_fast(nm, cd, x, return_ops=True)
    add(CheckResult("zeta_fast == zeta_naive", np.array_equal(y, zeta_naive(cm, x))))
    m, mops = moebius_fast(nm, cd, x, return_ops=True)
    add(CheckResult("moebius_fast == moebius_naive", np.array_equal(m, moebius_naive(cm, x))))
    add(CheckResult("round trips", np.array_equal(moebius_fast(nm, cd, y), x)
                    and np.array_equal(zeta_fast(nm, cd, m), x)))

    counts = operation_count(nm, cd)
    add(CheckResult(
        "op counters == nnz - k",
        zops == mops == counts.fast_ops == nm.nnz - cd.k,
        f"zeta={zops} moebius={mops} nnz-k={nm.nnz - cd.k}",
    ))
    add(CheckResult("nnz - k <= n k - k", counts.fast_ops <= d.n * cd.k - cd.k))
    add(CheckResult("naive ops == |E_close|", counts.naive_ops == cm.num_edges,
                    f"fast={counts.fast_ops} naive={counts.naive_ops}"))

    ap = antichain_partition(d)
    add(CheckResult("ell == longest chain", ap.ell == longest_chain_dp(d), f"ell={ap.ell}"))
    ok = True
    for t in threads:
        ok &= np.array_equal(zeta_parallel(nm, cd, ap, x, t, threshold=1), y)
        ok &= np.array_equal(moebius_parallel(nm, cd, ap, x, t, threshold=1), m)
    add(CheckResult("parallel == sequential", bool(ok)))
    return rep


def random_trials(trials: int, max_n: int, seed: int = 0):
    """Yield ``(trial_seed, n, delta, report)`` over random Erdos-Renyi DAGs."""
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        trial_seed = int(rng.integers(2**31))
        n = int(rng.integers(1, max_n + 1))
        delta = float(min(rng.choice([1, 2, 4, 6]), n - 1))
        with quiet_connectivity_warnings():
            d = generate_erdos_renyi(n, delta, seed=trial_seed)
        yield trial_seed, n, delta, check_instance(d, seed=trial_seed)
