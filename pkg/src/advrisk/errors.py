"""Exception types shared across the package."""


class AdvRiskError(Exception):
    """Base class for every error this package raises on purpose."""


class EmptySpace(AdvRiskError):
    """A metric space needs at least one point."""


class NonMetric(AdvRiskError):
    """A distance matrix failed one of the metric axioms.

    Carries which axiom failed and at which index triple.
    """

    def __init__(self, axiom: str, where: tuple, message: str):
        self.axiom = axiom
        self.where = where
        super().__init__(f"{axiom} violated at {where}: {message}")


class SpaceMismatch(AdvRiskError):
    """Two arguments live on different metric spaces."""


class NotProbability(AdvRiskError):
    """A measure that must be a probability measure is not."""


class MassOrder(AdvRiskError):
    """Unbalanced transport needs the first measure's mass <= the second's."""


class ZeroMass(AdvRiskError):
    """The first measure in unbalanced transport must have positive mass."""


class TooLarge(AdvRiskError):
    """A brute-force enumeration was requested beyond its size guard."""


class MalformedNetwork(AdvRiskError):
    """A flow network violates its structural invariants."""


class UnknownHypothesis(AdvRiskError):
    """A requested hypothesis is not part of the loss problem."""


class UnknownCheck(AdvRiskError):
    """An unknown verification check name was requested."""


class NotMidpointComplete(AdvRiskError):
    """The operation requires the space to be midpoint-complete at epsilon."""


class PriorNotEqual(AdvRiskError):
    """The operation requires equal priors (T = 1)."""
