import numpy as np
import pytest

from fastmobius import build_dag, decompose_explicit, generate_erdos_renyi
from fastmobius.dag import quiet_connectivity_warnings
from fastmobius.worked_example import TWELVE_EDGES, twelve_chain_indices


def _parse(block: str) -> np.ndarray:
    rows = [line.split() for line in block.strip().splitlines()]
    return np.array([[0 if t == "." else int(t) for t in r] for r in rows], dtype=np.int64)


# zeta matrix of the twelve-element example (row i = elements below x_i)
TWELVE_Z = _parse("""
1 . 1 1 . 1 1 1 1 1 1 1
. 1 . 1 1 . 1 . 1 1 1 1
. . 1 . . . 1 1 . 1 1 1
. . . 1 . . 1 . 1 1 1 1
. . . . 1 . . . . 1 1 1
. . . . . 1 . 1 1 . 1 1
. . . . . . 1 . . 1 1 1
. . . . . . . 1 . . 1 .
. . . . . . . . 1 . . 1
. . . . . . . . . 1 1 1
. . . . . . . . . . 1 .
. . . . . . . . . . . 1
""")

TWELVE_M = _parse("""
1 . -1 -1 . -1 1 1 1 . . .
. 1 . -1 -1 . . . . 1 . .
. . 1 . . . -1 -1 . . 1 .
. . . 1 . . -1 . -1 . . 1
. . . . 1 . . . . -1 . .
. . . . . 1 . -1 -1 . . .
. . . . . . 1 . . -1 . .
. . . . . . . 1 . . -1 .
. . . . . . . . 1 . . -1
. . . . . . . . . 1 -1 -1
. . . . . . . . . . 1 .
. . . . . . . . . . . 1
""")

# niv matrix (1-based labels, 0 = absent) for chains {2,4,9,12} {1,3,7} {5,10} {6,8,11}
TWELVE_N = _parse("""
4 1 10 6
2 7 5 11
12 3 10 8
4 7 10 11
12 . 5 11
9 . . 6
12 7 10 11
. . . 8
9 . . .
12 . 10 11
. . . 11
12 . . .
""")

TWELVE_U = _parse("""
1 . . 1 . 1 . . . 1 . .
. 1 . . 1 . 1 . . . 1 .
. . 1 . . . . 1 . 1 . 1
. . . 1 . . 1 . . 1 1 .
. . . . 1 . . . . . 1 1
. . . . . 1 . . 1 . . .
. . . . . . 1 . . 1 1 1
. . . . . . . 1 . . . .
. . . . . . . . 1 . . .
. . . . . . . . . 1 1 1
. . . . . . . . . . 1 .
. . . . . . . . . . . 1
""")

TWELVE_V = _parse("""
1 . 1 . . . 1 . . . . .
. 1 . 1 . . . . 1 . . 1
. . 1 . . . 1 . . . . .
. . . 1 . . . . 1 . . 1
. . . . 1 . . . . 1 . .
. . . . . 1 . 1 . . 1 .
. . . . . . 1 . . . . .
. . . . . . . 1 . . 1 .
. . . . . . . . 1 . . 1
. . . . . . . . . 1 . .
. . . . . . . . . . 1 .
. . . . . . . . . . . 1
""")


@pytest.fixture
def twelve():
    return build_dag(TWELVE_EDGES)


@pytest.fixture
def twelve_cd(twelve):
    return decompose_explicit(twelve, twelve_chain_indices())


def er(n, delta, seed):
    with quiet_connectivity_warnings():
        return generate_erdos_renyi(n, min(delta, max(n - 1, 0)), seed=seed)


def random_dags(count, max_n, seed=0, deltas=(1, 2, 4, 6), min_n=1):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(min_n, max_n + 1))
        delta = float(rng.choice(deltas))
        s = int(rng.integers(2**31))
        yield s, er(n, delta, s)


def to_networkx(d):
    import networkx as nx

    g = nx.DiGraph()
    g.add_nodes_from(range(d.n))
    g.add_edges_from(d.edges().tolist())
    return g


# acceptance criterion -> (ok, detail); printed once at the end of the run
ACCEPTANCE: dict = {}


def record(criterion: str, ok: bool, detail: str = "") -> None:
    prev = ACCEPTANCE.get(criterion)
    if prev is not None:
        ok = ok and prev[0]
        detail = "; ".join(x for x in (prev[1], detail) if x)
    ACCEPTANCE[criterion] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0])):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  [{detail}]" if detail else ""))
