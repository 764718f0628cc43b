"""Adversarial risk of a fixed classifier, in all its equivalent forms.

Binary classification with 0-1 loss: a classifier is a decision region A
(points labeled 1).  An adversary with budget eps may move every data point
within its eps-ball before classification, which can be modeled four ways:
by expanding the error sets, by per-point transport maps, by Markov
kernels, or by perturbing the class-conditional distributions inside
W-infinity balls.  On finite spaces all of these agree for every region;
the functions here compute each one along its own route so the equalities
stay checkable.

The general-loss variants take an explicit loss table over a finite
hypothesis set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import NotProbability, SpaceMismatch, UnknownHypothesis
from .measure import DiscreteMeasure, measure_of
from .metric import DecisionRegion, FiniteMetricSpace, Number, expand
from .transport import ball_sup_expectation, ball_sup_measure, greedy_ball_move, in_winf_ball


@dataclass(frozen=True)
class GameInstance:
    """A binary adversarial classification problem.

    ``p0``/``p1`` are the class-conditional distributions, ``prior_ratio``
    (T) the class-0 to class-1 prior ratio, ``eps`` the adversary budget.
    """

    space: FiniteMetricSpace
    p0: DiscreteMeasure
    p1: DiscreteMeasure
    prior_ratio: Number
    eps: Number

    def __post_init__(self):
        if self.p0.space is not self.space and self.p0.space != self.space:
            raise SpaceMismatch("p0 lives on a different space")
        if self.p1.space is not self.space and self.p1.space != self.space:
            raise SpaceMismatch("p1 lives on a different space")
        if not self.p0.is_probability or not self.p1.is_probability:
            raise NotProbability("class conditionals must be probability measures")
        if not self.prior_ratio > 0:
            raise ValueError("prior ratio must be > 0")
        if self.eps < 0:
            raise ValueError("eps must be >= 0")

    @property
    def weight0(self) -> Number:
        t = self.prior_ratio
        return t / (t + 1) if isinstance(t, float) else Fraction(t) / (Fraction(t) + 1)

    @property
    def weight1(self) -> Number:
        t = self.prior_ratio
        return 1 / (t + 1) if isinstance(t, float) else 1 / (Fraction(t) + 1)

    def swapped(self) -> "GameInstance":
        """Labels exchanged: (p1, p0) with inverted prior ratio."""
        t = self.prior_ratio
        inv = 1 / t if isinstance(t, float) else 1 / Fraction(t)
        return GameInstance(self.space, self.p1, self.p0, inv, self.eps)


def _own_region(inst: GameInstance, region: DecisionRegion) -> None:
    if region.space is not inst.space and region.space != inst.space:
        raise SpaceMismatch("region lives on a different space")


def risk_standard(inst: GameInstance, region: DecisionRegion) -> Number:
    """Error with no adversary: mass of class 0 in A plus class 1 outside."""
    _own_region(inst, region)
    return inst.weight0 * measure_of(inst.p0, region) + inst.weight1 * measure_of(
        inst.p1, region.complement()
    )


def risk_expansion(inst: GameInstance, region: DecisionRegion) -> Number:
    """Adversarial risk via set expansion of both error regions."""
    _own_region(inst, region)
    a_exp = expand(region, inst.eps)
    ac_exp = expand(region.complement(), inst.eps)
    return inst.weight0 * measure_of(inst.p0, a_exp) + inst.weight1 * measure_of(inst.p1, ac_exp)


def risk_transport_maps(inst: GameInstance, region: DecisionRegion):
    """Adversarial risk via optimal per-point transport maps.

    Class-0 atoms move into the region when reachable within budget,
    class-1 atoms into its complement, everything else stays; the maps are
    the canonical deterministic optima.  Returns ``(value, maps)`` where
    ``maps[y]`` sends each support atom of class y to its target.
    """
    _own_region(inst, region)
    moved0, maps0 = greedy_ball_move(inst.p0, region, inst.eps)
    moved1, maps1 = greedy_ball_move(inst.p1, region.complement(), inst.eps)
    value = inst.weight0 * measure_of(moved0, region) + inst.weight1 * measure_of(
        moved1, region.complement()
    )
    return value, {0: maps0, 1: maps1}


def risk_winf_ball(inst: GameInstance, region: DecisionRegion):
    """Adversarial risk as robust hypothesis testing over W-infinity balls.

    Returns ``(value, (q0, q1))`` where the worst-case pair attains the
    value; both measures are asserted to lie in their eps-balls.
    """
    _own_region(inst, region)
    v0, q0 = ball_sup_measure(inst.p0, region, inst.eps)
    v1, q1 = ball_sup_measure(inst.p1, region.complement(), inst.eps)
    assert in_winf_ball(q0, inst.p0, inst.eps), "worst-case q0 left its ball"
    assert in_winf_ball(q1, inst.p1, inst.eps), "worst-case q1 left its ball"
    return inst.weight0 * v0 + inst.weight1 * v1, (q0, q1)


# ---------------------------------------------------------------------------
# general loss

@dataclass(frozen=True)
class LossProblem:
    """Multi-class classification with an explicit finite loss table.

    ``loss[(y, w)]`` is the per-point loss vector of hypothesis w on class
    y; entries are finite and nonnegative.
    """

    space: FiniteMetricSpace
    classes: tuple
    priors: tuple
    conditionals: tuple
    hypotheses: tuple
    loss: Mapping

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        object.__setattr__(self, "priors", tuple(self.priors))
        object.__setattr__(self, "conditionals", tuple(self.conditionals))
        object.__setattr__(self, "hypotheses", tuple(self.hypotheses))
        loss = {k: tuple(v) for k, v in dict(self.loss).items()}
        object.__setattr__(self, "loss", loss)
        if len(self.priors) != len(self.classes) or len(self.conditionals) != len(self.classes):
            raise ValueError("priors/conditionals must align with classes")
        if any(p < 0 for p in self.priors) or not self.space.eq(sum(self.priors), 1):
            raise NotProbability("class priors must form a probability vector")
        for cond in self.conditionals:
            if cond.space is not self.space and cond.space != self.space:
                raise SpaceMismatch("conditional lives on a different space")
            if not cond.is_probability:
                raise NotProbability("class conditionals must be probability measures")
        for y in self.classes:
            for w in self.hypotheses:
                col = loss.get((y, w))
                if col is None or len(col) != self.space.n:
                    raise ValueError(f"loss table missing a full column for ({y!r}, {w!r})")
                if any(v < 0 for v in col):
                    raise ValueError("loss values must be nonnegative")


@dataclass(frozen=True)
class MarkovKernelSet:
    """Per-class row-stochastic perturbation kernels with support limited
    to the eps-ball of each source point."""

    space: FiniteMetricSpace
    eps: Number
    kernels: Mapping

    def __post_init__(self):
        kernels = {y: tuple(tuple(row) for row in k) for y, k in dict(self.kernels).items()}
        object.__setattr__(self, "kernels", kernels)
        n = self.space.n
        for y, k in kernels.items():
            if len(k) != n or any(len(row) != n for row in k):
                raise ValueError(f"kernel for class {y!r} is not n x n")
            for i, row in enumerate(k):
                if not self.space.eq(sum(row), 1):
                    raise ValueError(f"kernel row {i} for class {y!r} does not sum to 1")
                for j, v in enumerate(row):
                    if v < 0:
                        raise ValueError("kernel entries must be nonnegative")
                    if v > 0 and not self.space.le(self.space.dist[i][j], self.eps):
                        raise ValueError(
                            f"kernel for class {y!r} moves {i} -> {j} beyond the budget"
                        )


def worst_case_loss(space: FiniteMetricSpace, phi: Sequence[Number], eps: Number) -> tuple:
    """Pointwise ball maximum of a loss column: the loss the adversary can
    force at each point."""
    if len(phi) != space.n:
        raise ValueError(f"phi has length {len(phi)}, space has {space.n} points")
    out = []
    for i in range(space.n):
        row = space.dist[i]
        out.append(max(phi[j] for j in range(space.n) if space.le(row[j], eps)))
    return tuple(out)


RISK_MODES = ("sup", "maps", "kernels", "ball")


def _ball_argmax(space: FiniteMetricSpace, phi, i: int, eps: Number) -> int:
    row = space.dist[i]
    best_j, best_v = None, None
    for j in range(space.n):
        if space.le(row[j], eps) and (best_v is None or phi[j] > best_v):
            best_j, best_v = j, phi[j]
    return best_j

def risk_general(problem: LossProblem, w, eps: Number, which: str = "sup") -> Number:
    """Adversarial risk of hypothesis ``w`` under a general loss table.

    ``which`` selects the route: expected worst-case loss ("sup"), greedy
    transport maps ("maps"), the optimum over budgeted Markov kernels
    ("kernels"; each row's linear program over the ball is attained at a
    deterministic point), or W-infinity ball suprema ("ball").  The four
    values coincide on finite spaces.
    """
    if w not in problem.hypotheses:
        raise UnknownHypothesis(f"unknown hypothesis {w!r}")
    if which not in RISK_MODES:
        raise ValueError(f"which must be one of {RISK_MODES}")
    if eps < 0:
        raise ValueError("eps must be >= 0")
    space = problem.space
    total = 0
    if which == "kernels":
        rows = {}
        for y in problem.classes:
            phi = problem.loss[(y, w)]
            k = []
            for i in range(space.n):
                row = [0] * space.n
                row[_ball_argmax(space, phi, i, eps)] = 1
                k.append(tuple(row))
            rows[y] = tuple(k)
        kernel_set = MarkovKernelSet(space, eps, rows)
    for y, prior, cond in zip(problem.classes, problem.priors, problem.conditionals):
        phi = problem.loss[(y, w)]
        if which == "sup":
            wcl = worst_case_loss(space, phi, eps)
            term = sum(m * wcl[i] for i, m in enumerate(cond.mass))
        elif which == "maps":
            term = sum(
                m * phi[_ball_argmax(space, phi, i, eps)]
                for i, m in enumerate(cond.mass)
                if m != 0
            )
        elif which == "kernels":
            k = kernel_set.kernels[y]
            term = sum(
                m * sum(kv * phi[j] for j, kv in enumerate(k[i]) if kv != 0)
                for i, m in enumerate(cond.mass)
                if m != 0
            )
        else:
            term, _ = ball_sup_expectation(cond, phi, eps)
        total += prior * term
    return total
