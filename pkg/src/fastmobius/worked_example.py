"""A twelve-element poset used throughout the docs, demos and tests.

Labels 1..12 coincide with the descending topological numbering produced by
:func:`fastmobius.dag.build_dag`, so vertex index ``i`` has label ``i + 1``.
"""

from .dag import Dag, build_dag

TWELVE_EDGES = [
    (1, 3), (1, 4), (1, 6), (2, 4), (2, 5), (3, 7), (3, 8), (4, 7), (4, 9),
    (5, 10), (6, 8), (6, 9), (7, 10), (8, 11), (9, 12), (10, 11), (10, 12),
]

# a minimal (width 4) decomposition, by label
TWELVE_CHAINS = [[2, 4, 9, 12], [1, 3, 7], [5, 10], [6, 8, 11]]


def twelve() -> Dag:
    return build_dag(TWELVE_EDGES)


def twelve_chain_indices() -> list[list[int]]:
    return [[v - 1 for v in c] for c in TWELVE_CHAINS]
