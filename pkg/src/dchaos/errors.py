"""Exception hierarchy shared across modules."""


class DChaosError(Exception):
    """Base class for library errors."""


class HorizonExceeded(DChaosError, ValueError):
    """A predicate-form set was queried past its declared horizon."""


class InfeasibleAtHorizon(DChaosError):
    """A finite-horizon construction could not proceed."""


class MissingWeightIndex(DChaosError, KeyError):
    """A weight table has no entry for a requested index."""


class DomainMismatch(DChaosError, ValueError):
    """Indices outside the weight's domain, or operator/weight sides disagree."""


class BackendOverflow(DChaosError):
    """The exact backend was asked for a problem above its size cap."""


class NotAnAutomorphism(DChaosError, ValueError):
    """A Mobius map does not preserve the unit disk."""


class NumericallyDegenerate(DChaosError, ArithmeticError):
    """Fixed-point location and trace test disagree."""


class HypothesisViolated(DChaosError, ValueError):
    """A geometric precondition of a bound does not hold."""


class ResolutionExceeded(DChaosError):
    """Arcs would shrink below the angle resolution floor."""
