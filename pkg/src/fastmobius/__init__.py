"""Fast zeta and Moebius transforms on finite posets given as DAGs."""

from .chains import ChainDecomposition, decompose, decompose_explicit, longest_chain_q
from .dag import (
    ClosureMatrix,
    Dag,
    build_dag,
    dag_from_arrays,
    generate_erdos_renyi,
    transitive_closure,
    transitive_reduction,
    width_bruteforce,
)
from .errors import (
    ArgumentError,
    CacheError,
    CycleError,
    FastMobiusError,
    LengthMismatchError,
    NotAChainError,
    NotAPartitionError,
    SelfLoopError,
    TooLargeError,
)
from .matching import hopcroft_karp
from .niv import NivMap, compute_niv, reachability_set
from .parallel import (
    AntichainPartition,
    ParallelismReport,
    antichain_partition,
    moebius_parallel,
    parallelism_report,
    zeta_parallel,
)
from .transforms import (
    MoebiusMatrix,
    OpCounts,
    factor_matrices,
    moebius_fast,
    moebius_function,
    moebius_naive,
    operation_count,
    to_triplets,
    zeta_fast,
    zeta_naive,
)

__version__ = "0.1.0"
