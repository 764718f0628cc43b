"""Discrete finite measures: mass vectors over a finite metric space."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import NotProbability, SpaceMismatch, ZeroMass
from .metric import DecisionRegion, FiniteMetricSpace, Number


@dataclass(frozen=True)
class DiscreteMeasure:
    """A nonnegative mass vector; probability when the total is 1."""

    space: FiniteMetricSpace
    mass: tuple

    def __post_init__(self):
        mass = tuple(self.mass)
        object.__setattr__(self, "mass", mass)
        if len(mass) != self.space.n:
            raise ValueError(f"mass vector has length {len(mass)}, space has {self.space.n} points")
        for i, m in enumerate(mass):
            if m < -self.space.tol:
                raise ValueError(f"mass[{i}] = {m} must be nonnegative")

    @classmethod
    def dirac(cls, space: FiniteMetricSpace, i: int, scale: Number = 1) -> "DiscreteMeasure":
        mass = [0] * space.n
        mass[i] = scale
        return cls(space, tuple(mass))

    @classmethod
    def uniform(cls, space: FiniteMetricSpace, support: Optional[Iterable[int]] = None) -> "DiscreteMeasure":
        idx = sorted(support) if support is not None else list(range(space.n))
        w = Fraction(1, len(idx))
        mass = [0] * space.n
        for i in idx:
            mass[i] = w
        return cls(space, tuple(mass))

    @property
    def total(self) -> Number:
        return sum(self.mass)

    @property
    def is_probability(self) -> bool:
        return self.space.eq(self.total, 1)

    @property
    def support(self) -> tuple:
        return tuple(i for i, m in enumerate(self.mass) if m > 0)

    def scaled(self, c: Number) -> "DiscreteMeasure":
        return DiscreteMeasure(self.space, tuple(m * c for m in self.mass))

    def normalized(self) -> "DiscreteMeasure":
        t = self.total
        if t == 0:
            raise ZeroMass("cannot normalize the zero measure")
        return self.scaled(Fraction(1, 1) / t if isinstance(t, (int, Fraction)) else 1.0 / t)


def _same_space(a: DiscreteMeasure, b) -> None:
    if a.space is not b.space and a.space != b.space:
        raise SpaceMismatch("arguments live on different spaces")


def measure_of(mu: DiscreteMeasure, region: DecisionRegion) -> Number:
    """Total mass the measure puts on the region."""
    _same_space(mu, region)
    return sum(mu.mass[i] for i in region.members)


def total_variation(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Number:
    """sum_i max(mu_i - nu_i, 0), i.e. half the l1 distance, for probabilities."""
    _same_space(mu, nu)
    if not (mu.is_probability and nu.is_probability):
        raise NotProbability("total variation is defined here for probability measures")
    return sum(m - v for m, v in zip(mu.mass, nu.mass) if m > v)


def dominates(mu: DiscreteMeasure, nu: DiscreteMeasure) -> bool:
    """True iff ``nu`` dominates ``mu``: ``mu(A) <= nu(A)`` for every set A.

    For discrete measures this is the pointwise inequality.
    """
    _same_space(mu, nu)
    return all(mu.space.le(m, v) for m, v in zip(mu.mass, nu.mass))


def min_overlap(alpha: DiscreteMeasure, beta: DiscreteMeasure) -> Number:
    """sum_i min(alpha_i, beta_i): the unnormalized Bayes-error overlap."""
    _same_space(alpha, beta)
    return sum(min(a, b) for a, b in zip(alpha.mass, beta.mass))
