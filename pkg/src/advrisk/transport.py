"""Bottleneck (infinity-Wasserstein) distance, ball suprema, and the
{0,1}-cost transport problems that characterize adversarial risk.

All transport here has a 0-1 cost (a pair is either free or costs its full
mass), so every value reduces to a max-flow on a bipartite network with
free edges where the pair distance is under threshold.  That keeps the
arithmetic exact for rational inputs and yields dual witnesses for free:
the min cut's source side is the maximizing set of the excess functional
``A -> mu(A) - nu(expand(A, 2*eps))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

from .errors import MassOrder, NotProbability, TooLarge, ZeroMass
from .flow import UNBOUNDED, FlowNetwork, max_flow
from .measure import DiscreteMeasure, _same_space, measure_of
from .metric import (
    DecisionRegion,
    FiniteMetricSpace,
    Number,
    expand,
    expansion_table,
    mask_lex_key,
    region_from_mask,
)


@dataclass(frozen=True)
class Coupling:
    """A joint mass matrix.

    ``balanced``: row sums equal the first marginal and column sums the
    second.  ``unbalanced``: row sums equal the first marginal, column sums
    are dominated by the second.
    """

    space: FiniteMetricSpace
    matrix: tuple
    kind: str

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(row) for row in self.matrix))
        if self.kind not in ("balanced", "unbalanced"):
            raise ValueError(f"unknown coupling kind {self.kind!r}")

    def row_marginal(self) -> DiscreteMeasure:
        return DiscreteMeasure(self.space, tuple(sum(row) for row in self.matrix))

    def col_marginal(self) -> DiscreteMeasure:
        n = self.space.n
        return DiscreteMeasure(self.space, tuple(sum(row[j] for row in self.matrix) for j in range(n)))

    def mass_above(self, threshold: Number) -> Number:
        """Total coupled mass on pairs strictly farther than ``threshold``."""
        space = self.space
        return sum(
            self.matrix[i][j]
            for i in range(space.n)
            for j in range(space.n)
            if not space.le(space.dist[i][j], threshold)
        )


def check_coupling(coupling: Coupling, mu: DiscreteMeasure, nu: DiscreteMeasure) -> None:
    """Raise ValueError unless the coupling has the marginals it claims."""
    space = coupling.space
    rows = coupling.row_marginal().mass
    cols = coupling.col_marginal().mass
    for i, (r, m) in enumerate(zip(rows, mu.mass)):
        if not space.eq(r, m):
            raise ValueError(f"row marginal mismatch at {i}: {r} != {m}")
    for j, (c, v) in enumerate(zip(cols, nu.mass)):
        if coupling.kind == "balanced":
            if not space.eq(c, v):
                raise ValueError(f"column marginal mismatch at {j}: {c} != {v}")
        elif not space.le(c, v):
            raise ValueError(f"column marginal exceeds target at {j}: {c} > {v}")


@dataclass(frozen=True)
class TransportResult:
    """A transport value, an optimal coupling attaining it, and (for the
    unbalanced problem) the dual witness set."""

    value: Number
    coupling: Coupling
    witness_set: Optional[DecisionRegion] = None


# ---------------------------------------------------------------------------
# flow plumbing

def _mode(space: FiniteMetricSpace) -> str:
    return "exact" if space.is_exact else "float"


def _bipartite_network(mu: DiscreteMeasure, nu: DiscreteMeasure, threshold: Number):
    """Source caps mu, sink caps nu, free middle edges where d <= threshold.

    Node layout: source 0, left atoms 1..n, right atoms n+1..2n, sink 2n+1.
    Arc order (source arcs, middle arcs lexicographic, sink arcs) fixes the
    augmentation order.
    """
    space = mu.space
    n = space.n
    arcs = []
    for i in range(n):
        arcs.append((0, 1 + i, mu.mass[i]))
    pair_arcs = {}
    for i in range(n):
        row = space.dist[i]
        for j in range(n):
            if space.le(row[j], threshold):
                pair_arcs[(i, j)] = len(arcs)
                arcs.append((1 + i, 1 + n + j, UNBOUNDED))
    sink = 2 * n + 1
    for j in range(n):
        arcs.append((1 + n + j, sink, nu.mass[j]))
    net = FlowNetwork(2 * n + 2, 0, sink, tuple(arcs), mode=_mode(space))
    return net, pair_arcs


def _transportable_mass(mu: DiscreteMeasure, nu: DiscreteMeasure, threshold: Number):
    net, pair_arcs = _bipartite_network(mu, nu, threshold)
    return max_flow(net), net, pair_arcs


# ---------------------------------------------------------------------------
# infinity-Wasserstein

def w_infinity(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Number:
    """Smallest delta such that all of mu can reach nu moving each unit of
    mass at most delta: the bottleneck transport distance."""
    _same_space(mu, nu)
    if not (mu.is_probability and nu.is_probability):
        raise NotProbability("w_infinity is defined for probability measures")
    space = mu.space
    total = mu.total
    levels = sorted({d for row in space.dist for d in row})

    def feasible(delta: Number) -> bool:
        result, _net, _ = _transportable_mass(mu, nu, delta)
        return space.eq(result.value, total)

    lo, hi = 0, len(levels) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(levels[mid]):
            hi = mid
        else:
            lo = mid + 1
    return levels[lo]


def in_winf_ball(candidate: DiscreteMeasure, center: DiscreteMeasure, eps: Number) -> bool:
    """Whether ``w_infinity(candidate, center) <= eps``.

    Decided by a single feasibility flow at eps (equivalent to computing
    the full distance, by monotonicity of feasibility in the threshold).
    """
    _same_space(candidate, center)
    if not (candidate.is_probability and center.is_probability):
        raise NotProbability("ball membership is defined for probability measures")
    result, _net, _ = _transportable_mass(candidate, center, eps)
    return candidate.space.eq(result.value, candidate.total)


# ---------------------------------------------------------------------------
# suprema over W-infinity balls

def greedy_ball_move(center: DiscreteMeasure, region: DecisionRegion, eps: Number):
    """Push every atom that can reach the region inside it; the canonical
    deterministic witness for the ball supremum.

    Atoms already in the region stay; others move to the lowest-index
    region point within eps, or stay when none is reachable.  Returns the
    moved measure and the per-atom target map.
    """
    space = center.space
    _same_space(center, region)
    members = sorted(region.members)
    out = [0] * space.n
    moves: Dict[int, int] = {}
    for i, m in enumerate(center.mass):
        if m == 0:
            continue
        target = i
        if i not in region.members:
            row = space.dist[i]
            for a in members:
                if space.le(row[a], eps):
                    target = a
                    break
        moves[i] = target
        out[target] += m
    return DiscreteMeasure(space, tuple(out)), moves


def ball_sup_measure(center: DiscreteMeasure, region: DecisionRegion, eps: Number):
    """sup of mu'(A) over the W-infinity eps-ball around ``center``.

    The supremum equals ``center(expand(A, eps))`` and is attained by the
    greedy move; both facts are asserted.  Returns ``(value, argmax)``.
    """
    if not center.is_probability:
        raise NotProbability("ball supremum is taken around a probability measure")
    moved, _ = greedy_ball_move(center, region, eps)
    value = measure_of(moved, region)
    expanded = measure_of(center, expand(region, eps))
    assert center.space.eq(value, expanded), (
        f"ball supremum {value} != measure of expansion {expanded}"
    )
    return value, moved


def ball_sup_expectation(center: DiscreteMeasure, phi: Sequence[Number], eps: Number):
    """sup of E[phi] over the W-infinity eps-ball: each atom takes the best
    phi value in its eps-ball.  Returns ``(value, argmax)``."""
    space = center.space
    if not center.is_probability:
        raise NotProbability("ball supremum is taken around a probability measure")
    if len(phi) != space.n:
        raise ValueError(f"phi has length {len(phi)}, space has {space.n} points")
    for v in phi:
        if isinstance(v, float) and not math.isfinite(v):
            raise ValueError("phi must be finite")
        if v < 0:
            raise ValueError("phi must be nonnegative")
    out = [0] * space.n
    value = 0
    for i, m in enumerate(center.mass):
        if m == 0:
            continue
        row = space.dist[i]
        best_j, best_v = None, None
        for j in range(space.n):
            if space.le(row[j], eps) and (best_v is None or phi[j] > best_v):
                best_j, best_v = j, phi[j]
        value += m * best_v
        out[best_j] += m
    return value, DiscreteMeasure(space, tuple(out))


# ---------------------------------------------------------------------------
# {0,1}-cost transport

def _assemble_coupling(mu, nu, net, pair_arcs, flows, threshold, kind):
    """Zero-cost flow plus lexicographic routing of the leftover mass.

    At a maximum flow no free pair has both residual supply and residual
    demand, so every routed leftover pair costs 1.
    """
    space = mu.space
    n = space.n
    matrix = [[0] * n for _ in range(n)]
    for (i, j), k in pair_arcs.items():
        if flows[k] != 0:
            matrix[i][j] = flows[k]
    row_left = [mu.mass[i] - sum(matrix[i]) for i in range(n)]
    col_left = [nu.mass[j] - sum(matrix[i][j] for i in range(n)) for j in range(n)]
    floor = net.residual_floor
    j = 0
    for i in range(n):
        while row_left[i] > floor:
            while j < n and col_left[j] <= floor:
                j += 1
            if j == n:
                break
            m = min(row_left[i], col_left[j])
            if space.is_exact:
                assert not space.le(space.dist[i][j], threshold), (
                    "leftover routed through a free pair; flow was not maximal"
                )
            matrix[i][j] += m
            row_left[i] -= m
            col_left[j] -= m
    return Coupling(space, tuple(tuple(r) for r in matrix), kind)


def threshold_cost(mu: DiscreteMeasure, nu: DiscreteMeasure, eps: Number) -> TransportResult:
    """Least coupling mass that must travel farther than ``2*eps``.

    The optimal-transport cost under the 0-1 cost ``1{d > 2*eps}``; at
    eps = 0 it equals the total variation distance.
    """
    _same_space(mu, nu)
    if not (mu.is_probability and nu.is_probability):
        raise NotProbability("threshold cost is defined for probability measures")
    if eps < 0:
        raise ValueError("eps must be >= 0")
    space = mu.space
    two_eps = 2 * eps
    result, net, pair_arcs = _transportable_mass(mu, nu, two_eps)
    value = mu.total - result.value
    coupling = _assemble_coupling(mu, nu, net, pair_arcs, result.arc_flows, two_eps, "balanced")
    if space.is_exact:
        assert coupling.mass_above(two_eps) == value, "coupling cost disagrees with flow value"
    return TransportResult(value, coupling)


def unbalanced_cost(mu: DiscreteMeasure, nu: DiscreteMeasure, eps: Number) -> TransportResult:
    """Unbalanced 0-1-cost transport from ``mu`` into (part of) ``nu``.

    Requires ``0 < mu(X) <= nu(X)``.  Returns the optimal unbalanced
    coupling (row sums mu, column sums dominated by nu) and the min-cut
    witness set B maximizing ``mu(B) - nu(expand(B, 2*eps))``; the primal
    and dual values agree and this is asserted.
    """
    _same_space(mu, nu)
    if eps < 0:
        raise ValueError("eps must be >= 0")
    space = mu.space
    if mu.total <= space.tol:
        raise ZeroMass("first measure must have positive mass")
    if not space.le(mu.total, nu.total):
        raise MassOrder(f"need mu(X) <= nu(X), got {mu.total} > {nu.total}")
    two_eps = 2 * eps
    result, net, pair_arcs = _transportable_mass(mu, nu, two_eps)
    value = mu.total - result.value
    coupling = _assemble_coupling(mu, nu, net, pair_arcs, result.arc_flows, two_eps, "unbalanced")
    n = space.n
    witness = DecisionRegion(
        space, frozenset(i for i in range(n) if (1 + i) in result.cut_source_side)
    )
    dual = measure_of(mu, witness) - measure_of(nu, expand(witness, two_eps))
    assert space.eq(dual, value), f"min-cut witness value {dual} != transport value {value}"
    return TransportResult(value, coupling, witness)


# ---------------------------------------------------------------------------
# exhaustive dual oracles (size-guarded)

_BRUTEFORCE_LIMIT = 20


def mask_sum_cache(mass):
    """Memoized ``mask -> sum of mass over the mask's members``."""
    cache = {0: 0}

    def mask_sum(mask: int):
        try:
            return cache[mask]
        except KeyError:
            low = mask & -mask
            v = mask_sum(mask ^ low) + mass[low.bit_length() - 1]
            cache[mask] = v
            return v

    return mask_sum


def excess_bruteforce(mu: DiscreteMeasure, nu: DiscreteMeasure, eps: Number):
    """Exact maximum over all subsets of ``mu(A) - nu(expand(A, 2*eps))``.

    Returns ``(value, argmax)`` with the lexicographically least argmax.
    Guarded to n <= 20.
    """
    _same_space(mu, nu)
    space = mu.space
    n = space.n
    if n > _BRUTEFORCE_LIMIT:
        raise TooLarge(f"subset enumeration guarded to n <= {_BRUTEFORCE_LIMIT}, got {n}")
    exp = expansion_table(space, 2 * eps)
    mu_of = mask_sum_cache(mu.mass)
    nu_of = mask_sum_cache(nu.mass)
    best_v, best_mask = 0, 0
    for m in range(1, 1 << n):
        v = mu_of(m) - nu_of(exp[m])
        if v > best_v or (v == best_v and mask_lex_key(m, n) < mask_lex_key(best_mask, n)):
            best_v, best_mask = v, m
    return best_v, region_from_mask(space, best_mask)


def eroded_excess_bruteforce(mu: DiscreteMeasure, nu: DiscreteMeasure, eps: Number):
    """Exact maximum over all subsets of
    ``mu(contract(A, eps)) - nu(expand(A, eps))``; lexicographically least
    argmax, guarded to n <= 20."""
    _same_space(mu, nu)
    space = mu.space
    n = space.n
    if n > _BRUTEFORCE_LIMIT:
        raise TooLarge(f"subset enumeration guarded to n <= {_BRUTEFORCE_LIMIT}, got {n}")
    exp = expansion_table(space, eps)
    mu_of = mask_sum_cache(mu.mass)
    nu_of = mask_sum_cache(nu.mass)
    full = (1 << n) - 1
    best_v, best_mask = None, None
    for m in range(1 << n):
        contracted = full ^ exp[full ^ m]
        v = mu_of(contracted) - nu_of(exp[m])
        if (
            best_v is None
            or v > best_v
            or (v == best_v and mask_lex_key(m, n) < mask_lex_key(best_mask, n))
        ):
            best_v, best_mask = v, m
    return best_v, region_from_mask(space, best_mask)
