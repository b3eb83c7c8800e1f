import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import TWELVE_Z, er, random_dags, to_networkx
from fastmobius import (
    ArgumentError,
    CycleError,
    SelfLoopError,
    TooLargeError,
    build_dag,
    dag_from_arrays,
    generate_erdos_renyi,
    transitive_closure,
    transitive_reduction,
    width_bruteforce,
)
from fastmobius.worked_example import TWELVE_EDGES


def test_twelve_numbering_matches_labels(twelve):
    assert twelve.n == 12
    assert list(twelve.labels) == list(range(1, 13))
    assert sorted(map(tuple, (twelve.edges() + 1).tolist())) == sorted(TWELVE_EDGES)


def test_build_is_order_independent():
    shuffled = TWELVE_EDGES[::-1] + TWELVE_EDGES[:3]
    d = build_dag(shuffled)
    assert list(d.labels) == list(range(1, 13))
    assert d.num_edges == len(TWELVE_EDGES)


def test_isolated_vertices():
    d = build_dag([], vertices=["a", "b", "c"])
    assert d.n == 3 and d.num_edges == 0


def test_cycle_and_self_loop():
    with pytest.raises(CycleError):
        build_dag([("a", "b"), ("b", "a")])
    with pytest.raises(CycleError):
        build_dag([(1, 2), (2, 3), (3, 1), (0, 1)])
    with pytest.raises(SelfLoopError):
        build_dag([("a", "a")])


def test_kahn_tie_break_uses_smallest_label():
    # b and a are both sources; a is popped first
    d = build_dag([("b", "c"), ("a", "c")])
    assert list(d.labels) == ["a", "b", "c"]
    d = build_dag([(10, 1), (2, 1)])
    assert list(d.labels) == [2, 10, 1]


def test_closure_rows(twelve):
    cm = transitive_closure(twelve)
    assert (cm.row(0) + 1).tolist() == [1, 3, 4, 6, 7, 8, 9, 10, 11, 12]
    assert (cm.row(3) + 1).tolist() == [4, 7, 9, 10, 11, 12]
    np.testing.assert_array_equal(cm.to_dense(), TWELVE_Z)


def test_closure_antichain():
    d = build_dag([], vertices=[1, 2, 3])
    cm = transitive_closure(d)
    assert [cm.row(i).tolist() for i in range(3)] == [[0], [1], [2]]


@pytest.mark.parametrize("seed", range(10))
def test_closure_matches_networkx(seed):
    d = er(60, 3, seed)
    cm = transitive_closure(d)
    g = to_networkx(d)
    for i in range(d.n):
        assert cm.row(i).tolist() == sorted(nx.descendants(g, i) | {i})


def test_reduction_of_five_element_closure():
    # top 1, bottom 5, middle {2,3,4} with 2 > 4; full closure given as input
    cover = {(1, 2), (1, 3), (2, 4), (3, 5), (4, 5)}
    closure = cover | {(1, 4), (1, 5), (2, 5)}
    d = build_dag(sorted(closure))
    red = transitive_reduction(d)
    assert set(red.label_edges()) == cover


def test_reduction_of_total_order():
    closure = [(a, b) for a in range(4) for b in range(a + 1, 4)]
    red = transitive_reduction(build_dag(closure))
    assert red.label_edges() == [(0, 1), (1, 2), (2, 3)]


@pytest.mark.parametrize("seed", range(20))
def test_reduction_oracles(seed):
    d = er(int(np.random.default_rng(seed).integers(2, 65)), 4, seed)
    red = transitive_reduction(d)
    cm, cr = transitive_closure(d), transitive_closure(red)
    np.testing.assert_array_equal(cm.indices, cr.indices)
    np.testing.assert_array_equal(cm.indptr, cr.indptr)
    assert red.num_edges <= d.num_edges <= cm.num_edges
    expected = nx.transitive_reduction(to_networkx(d))
    assert sorted(map(tuple, red.edges().tolist())) == sorted(expected.edges())


def test_rebuild_is_idempotent():
    for _, d in random_dags(20, 80, seed=4):
        again = build_dag(d.label_edges(), vertices=d.labels)
        assert list(again.labels) == list(d.labels)
        np.testing.assert_array_equal(again.indices, d.indices)
        # and with the indices themselves as labels
        idx = build_dag(map(tuple, d.edges().tolist()), vertices=range(d.n))
        assert list(idx.labels) == list(range(d.n))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 15), st.integers(0, 15)), max_size=40))
def test_build_numbering_property(pairs):
    # orient every pair from small to large label so the input is acyclic
    edges = [(min(a, b), max(a, b)) for a, b in pairs if a != b]
    d = build_dag(edges)
    e = d.edges()
    assert (e[:, 0] < e[:, 1]).all()
    assert d.num_edges == len(set(edges))


def test_generator_basics():
    d = generate_erdos_renyi(5, 0, seed=1)
    assert d.n == 5 and d.num_edges == 0
    assert generate_erdos_renyi(1, 0, seed=1).n == 1
    with pytest.raises(ArgumentError):
        generate_erdos_renyi(5, 5, seed=1)
    a, b = er(300, 4, 7), er(300, 4, 7)
    np.testing.assert_array_equal(a.indices, b.indices)
    np.testing.assert_array_equal(a.labels, b.labels)


def test_generator_complete_when_delta_max():
    d = generate_erdos_renyi(6, 5, seed=0)
    assert d.num_edges == 15


def test_generator_mean_degree():
    degs = [2 * er(1000, 4, s).num_edges / 1000 for s in range(20)]
    assert abs(np.mean(degs) - 4) < 0.15 * 4
    assert all(abs(x - 4) < 0.15 * 4 for x in degs)


def test_generator_pair_marginals():
    # every position pair should be equally likely: compare top vs bottom half edge counts
    n, trials = 30, 300
    counts = np.zeros((n, n))
    for s in range(trials):
        d = er(n, 6, s)
        lab = np.asarray(d.labels)
        e = d.edges()
        counts[lab[e[:, 0]], lab[e[:, 1]]] += 1
    sym = counts + counts.T
    p = 6 / (n - 1)
    off = sym[~np.eye(n, dtype=bool)] / trials
    assert abs(off.mean() - p) < 0.02
    assert np.diag(counts).sum() == 0


def test_dag_from_arrays_labels():
    d = dag_from_arrays(3, [2, 1], [1, 0])
    assert d.labels.tolist() == [2, 1, 0]


def test_width(twelve):
    assert width_bruteforce(twelve) == 4
    chain = build_dag([(i, i + 1) for i in range(4)])
    assert width_bruteforce(chain) == 1
    assert width_bruteforce(build_dag([], vertices=range(7))) == 7
    with pytest.raises(TooLargeError):
        width_bruteforce(build_dag([], vertices=range(25)))


def test_width_matches_networkx_antichains():
    for _, d in random_dags(15, 12, seed=9):
        g = to_networkx(d)
        best = max((len(a) for a in nx.antichains(g)), default=0)
        assert width_bruteforce(d) == best
