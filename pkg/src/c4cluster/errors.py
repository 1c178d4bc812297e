"""Exception hierarchy.

Every validation failure raises a subclass of :class:`C4Error`; the CLI maps
these to exit code 2 and prints the class name on stderr.
"""


class C4Error(ValueError):
    """Base class for input-validation errors."""


# graph-core
class NonSquareError(C4Error):
    pass


class AsymmetricError(C4Error):
    pass


class NegativeEntryError(C4Error):
    pass


class NonzeroDiagonalError(C4Error):
    pass


class NonFiniteEntryError(C4Error):
    pass


class DimensionMismatchError(C4Error):
    pass


class AlphaOutOfRangeError(C4Error):
    pass


class InvalidPartitionError(C4Error):
    pass


# similarity
class DegenerateTableError(C4Error):
    pass


class WrongDimensionError(C4Error):
    pass


class ZeroSimilaritySumError(C4Error):
    pass


class ZeroWeightSumError(C4Error):
    pass


# spectral engine
class IsolatedNodeError(C4Error):
    def __init__(self, indices):
        self.indices = [int(i) for i in indices]
        shown = self.indices[:20]
        more = "" if len(self.indices) <= 20 else f" (+{len(self.indices) - 20} more)"
        super().__init__(f"isolated nodes (zero row sum) at indices {shown}{more}")


class NotSymmetricError(C4Error):
    pass


class NoConvergenceError(C4Error):
    pass


class TooFewNodesError(C4Error):
    pass


class KOutOfRangeError(C4Error):
    pass


# c4 algorithm
class SingleClusterError(C4Error):
    pass


class AllCandidatesDegenerateError(C4Error):
    pass


class ConfigError(C4Error):
    pass


# metrics
class LengthMismatchError(C4Error):
    pass


class EmptyClusterError(C4Error):
    pass


# simgen
class UnsupportedKError(C4Error):
    pass


# dataset ingest
class MalformedLineError(C4Error):
    def __init__(self, path, lineno, msg):
        self.path = str(path)
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: {msg}")


class UnknownCityError(C4Error):
    pass


class NonpositivePopulationError(C4Error):
    pass
