"""Exception hierarchy shared by all modules."""


class FastMobiusError(Exception):
    """Base class for errors raised by fastmobius."""


class CycleError(FastMobiusError, ValueError):
    """The input edge list contains a directed cycle."""


class SelfLoopError(FastMobiusError, ValueError):
    """An edge (u, u) was supplied."""


class ArgumentError(FastMobiusError, ValueError):
    """A numeric argument is outside its admissible range."""


class TooLargeError(FastMobiusError, ValueError):
    """An exponential or quadratic oracle was asked to run above its size cap."""


class NotAChainError(FastMobiusError, ValueError):
    """Two consecutive members of a supplied chain are incomparable."""


class NotAPartitionError(FastMobiusError, ValueError):
    """Supplied chains do not partition the vertex set."""


class LengthMismatchError(FastMobiusError, ValueError):
    """A vector's length does not match the number of poset elements."""


class CacheError(FastMobiusError, ValueError):
    """A precomputation cache file is malformed, corrupted, or stale."""
