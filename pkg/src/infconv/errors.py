"""Exception types raised across the package.

Names follow the operation contracts: each error corresponds to one
documented failure mode of a public operation.
"""


class InfConvError(Exception):
    """Base class for all package errors."""


class EmptySet(InfConvError):
    """A point set that must be nonempty has an all-false mask."""


class DimensionMismatch(InfConvError):
    """Vector dimension does not match the grid dimension."""


class NegInfUnsupported(InfConvError):
    """Fast transform paths reject functions that may take -inf."""


class NonProper(InfConvError):
    """The function has no finite value."""


class NoWitness(InfConvError):
    """No finite argmin witness exists at the queried point."""


class NotConvex(InfConvError):
    """The function fails the midpoint convexity check."""


class InfiniteValue(InfConvError):
    """An all-finite function was required but an infinite value occurs."""


class NoFiniteValues(InfConvError):
    """The infimum is not finite."""


class PreconditionViolated(InfConvError):
    """A documented operation precondition does not hold."""


class LipschitzViolated(InfConvError):
    """Sample values violate the declared Lipschitz bound."""


class SamplesOffGrid(InfConvError):
    """A sample point does not coincide with any grid point."""


class OddSubdivision(InfConvError):
    """The interval subdivision count must be even (and at least 4)."""


class DegenerateDiameter(InfConvError):
    """The region has zero diameter."""


class ZeroNotOnGrid(InfConvError):
    """The 1-d grid must contain the origin as a node."""


class BallOffGrid(InfConvError):
    """No grid point lies inside the requested ball."""
