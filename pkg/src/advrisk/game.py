"""The adversary-vs-classifier zero-sum game and its equilibrium
certificates.

The adversary picks perturbed class conditionals inside W-infinity
eps-balls; the classifier picks a decision region.  The sup-inf value is
computed by a single 4-layer max-flow (mass from scaled class 0 and from
class 1 meets at middle points; the meeting mass is exactly the best
achievable Bayes overlap).  The inf-sup value routes through the optimal
risk formula.  On midpoint-complete instances in exact arithmetic the two
coincide and the constructed pure strategy profile is an exact (delta = 0)
Nash equilibrium; elsewhere the certificate reports the numeric gap.

A finite-space note: the layered flow always attains a worst-case pair
(p0*, p1*), for every prior ratio.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .errors import NotMidpointComplete, NotProbability, PriorNotEqual
from .flow import UNBOUNDED, FlowNetwork, max_flow
from .measure import DiscreteMeasure, _same_space, dominates, measure_of, min_overlap, total_variation
from .metric import DecisionRegion, Number, is_midpoint_complete, midpoint
from .optimal import optimal_risk
from .risk import GameInstance, risk_expansion, risk_winf_ball
from .transport import in_winf_ball, threshold_cost, unbalanced_cost


def _weights(prior_ratio: Number) -> Tuple[Number, Number]:
    if isinstance(prior_ratio, float):
        return prior_ratio / (prior_ratio + 1), 1 / (prior_ratio + 1)
    t = Fraction(prior_ratio)
    return t / (t + 1), 1 / (t + 1)


def payoff(region: DecisionRegion, p0p: DiscreteMeasure, p1p: DiscreteMeasure, prior_ratio: Number) -> Number:
    """Risk of the region against a fixed (possibly perturbed) pair."""
    _same_space(p0p, p1p)
    _same_space(p0p, region)
    if not (p0p.is_probability and p1p.is_probability):
        raise NotProbability("payoff is defined for probability measures")
    w0, w1 = _weights(prior_ratio)
    return w0 * measure_of(p0p, region) + w1 * measure_of(p1p, region.complement())


def classifier_best_response(p0p: DiscreteMeasure, p1p: DiscreteMeasure, prior_ratio: Number):
    """Bayes-optimal region against a fixed pair: label 1 where class-1
    mass strictly beats scaled class-0 mass (ties go to label 0).

    Returns ``(region, value)`` with value the Bayes error
    ``min_overlap(T * p0', p1') / (T + 1)``; the region attains it.
    """
    _same_space(p0p, p1p)
    if not (p0p.is_probability and p1p.is_probability):
        raise NotProbability("best response is defined for probability measures")
    space = p0p.space
    t = prior_ratio
    region = DecisionRegion(
        space, frozenset(i for i in range(space.n) if p1p.mass[i] > t * p0p.mass[i])
    )
    _w0, w1 = _weights(prior_ratio)
    value = w1 * min_overlap(p0p.scaled(t), p1p)
    direct = payoff(region, p0p, p1p, prior_ratio)
    assert space.eq(direct, value), f"best-response payoff {direct} != Bayes value {value}"
    return region, value


def adversary_best_response(inst: GameInstance, region: DecisionRegion):
    """Worst-case in-ball pair against a fixed region.

    Returns ``(q0, q1, value)``; the value is asserted to equal the
    expansion risk of the region.
    """
    value, (q0, q1) = risk_winf_ball(inst, region)
    expansion = risk_expansion(inst, region)
    assert inst.space.eq(value, expansion), (
        f"ball-sup risk {value} != expansion risk {expansion}"
    )
    return q0, q1, value


# ---------------------------------------------------------------------------
# game values

def _layered_overlap_flow(inst: GameInstance):
    """Max joint overlap achievable by in-ball perturbations, as one flow.

    Layers: source -> class-0 atoms (capacity T * p0) -> meeting points
    (arcs within eps) -> class-1 atoms (arcs within eps) -> sink (capacity
    p1).  Flow through a meeting point is overlap mass placed there by both
    sides; the max flow is the largest achievable ``sum_x min(T p0'(x),
    p1'(x))``.  Leftover mass stays where it was (a zero-distance move), so
    the rebuilt pair are exact probability measures inside their balls.
    """
    space = inst.space
    n = space.n
    t = inst.prior_ratio
    sup0 = inst.p0.support
    sup1 = inst.p1.support
    u_of = {j: 1 + pos for pos, j in enumerate(sup0)}
    v_of = {x: 1 + len(sup0) + x for x in range(n)}
    w_of = {k: 1 + len(sup0) + n + pos for pos, k in enumerate(sup1)}
    sink = 1 + len(sup0) + n + len(sup1)
    arcs = []
    for j in sup0:
        arcs.append((0, u_of[j], t * inst.p0.mass[j]))
    for j in sup0:
        row = space.dist[j]
        for x in range(n):
            if space.le(row[x], inst.eps):
                arcs.append((u_of[j], v_of[x], UNBOUNDED))
    for x in range(n):
        row = space.dist[x]
        for k in sup1:
            if space.le(row[k], inst.eps):
                arcs.append((v_of[x], w_of[k], UNBOUNDED))
    for k in sup1:
        arcs.append((w_of[k], sink, inst.p1.mass[k]))
    net = FlowNetwork(sink + 1, 0, sink, tuple(arcs), mode="exact" if space.is_exact else "float")
    result = max_flow(net)

    moved0 = [0] * n
    out0 = {j: 0 for j in sup0}
    moved1 = [0] * n
    in1 = {k: 0 for k in sup1}
    for arc_idx, (a, b, _c) in enumerate(net.arcs):
        f = result.arc_flows[arc_idx]
        if f == 0:
            continue
        if 1 <= a <= len(sup0) and 1 + len(sup0) <= b < 1 + len(sup0) + n:
            j = sup0[a - 1]
            x = b - 1 - len(sup0)
            moved0[x] += f
            out0[j] += f
        elif 1 + len(sup0) <= a < 1 + len(sup0) + n and b > len(sup0) + n:
            x = a - 1 - len(sup0)
            k = sup1[b - 1 - len(sup0) - n]
            moved1[x] += f
            in1[k] += f
    for j in sup0:
        moved0[j] += t * inst.p0.mass[j] - out0[j]
    for k in sup1:
        moved1[k] += inst.p1.mass[k] - in1[k]
    inv_t = 1 / t if isinstance(t, float) else 1 / Fraction(t)
    p0_star = DiscreteMeasure(space, tuple(m * inv_t for m in moved0))
    p1_star = DiscreteMeasure(space, tuple(moved1))
    return result.value, p0_star, p1_star


def supinf_value(inst: GameInstance):
    """Value when the adversary moves first: the largest Bayes error any
    in-ball pair can force, with an attaining pair.

    Returns ``(value, p0_star, p1_star)``.
    """
    work = inst if inst.prior_ratio >= 1 else inst.swapped()
    flow_value, p0_star, p1_star = _layered_overlap_flow(work)
    space = inst.space
    assert in_winf_ball(p0_star, work.p0, work.eps), "constructed p0* left its ball"
    assert in_winf_ball(p1_star, work.p1, work.eps), "constructed p1* left its ball"
    overlap = min_overlap(p0_star.scaled(work.prior_ratio), p1_star)
    assert space.le(flow_value, overlap), (
        f"constructed pair's overlap {overlap} fell below the flow value {flow_value}"
    )
    if space.is_exact:
        assert overlap == flow_value, (
            f"overlap {overlap} exceeds the flow optimum {flow_value}"
        )
    value = work.weight1 * overlap
    if work is inst:
        return value, p0_star, p1_star
    return value, p1_star, p0_star


def infsup_value(inst: GameInstance):
    """Value when the classifier moves first; delegates to the optimal-risk
    formula.  Returns ``(value, a_star)``."""
    report = optimal_risk(inst)
    return report.value, report.witness


# ---------------------------------------------------------------------------
# equilibrium construction

@dataclass(frozen=True)
class NashCertificate:
    """A constructed strategy profile with its deviation bound.

    ``delta_achieved`` bounds how much either player could gain by
    deviating from ``(p0_star, p1_star, a_star)``; it is 0 exactly on
    midpoint-complete instances in exact arithmetic.
    """

    p0_star: DiscreteMeasure
    p1_star: DiscreteMeasure
    a_star: DecisionRegion
    value_supinf: Number
    value_infsup: Number
    delta_achieved: Number
    midpoint_complete: bool


def nash_construct(inst: GameInstance) -> NashCertificate:
    """Assemble and certify an (approximate) pure Nash equilibrium.

    The adversary side comes from the layered flow, the classifier side
    from the optimal-risk witness.  The three payoffs in the deviation
    sandwich are each recomputed from scratch.
    """
    space = inst.space
    value_si, p0_star, p1_star = supinf_value(inst)
    report = optimal_risk(inst)
    value_is, a_star = report.value, report.witness
    assert space.le(value_si, value_is), (
        f"max-min value {value_si} exceeded min-max value {value_is}"
    )
    sup_at_astar, _pair = risk_winf_ball(inst, a_star)
    mid = payoff(a_star, p0_star, p1_star, inst.prior_ratio)
    _region, lower = classifier_best_response(p0_star, p1_star, inst.prior_ratio)
    delta = max(sup_at_astar - mid, mid - lower, 0)
    if report.midpoint_complete and space.is_exact:
        assert value_si == value_is, (
            f"minimax gap on a midpoint-complete instance: {value_si} != {value_is}"
        )
        assert delta == 0, f"nonzero deviation bound {delta} on a midpoint-complete instance"
    return NashCertificate(
        p0_star, p1_star, a_star, value_si, value_is, delta, report.midpoint_complete
    )


def nash_midpoint_construct(inst: GameInstance):
    """Equal-prior worst-case pair via the midpoint construction.

    Every optimally-coupled pair of atoms at distance <= 2*eps sends both
    endpoints to their best midpoint; farther pairs stay put.  The result
    attains the threshold transport cost as a total variation distance.
    Requires T = 1 and midpoint completeness at eps.
    """
    space = inst.space
    if inst.prior_ratio != 1:
        raise PriorNotEqual("the midpoint construction needs equal priors (T = 1)")
    mp = is_midpoint_complete(space, inst.eps)
    if not mp.complete:
        raise NotMidpointComplete(
            f"space is not midpoint-complete at eps={inst.eps}; witness pair {mp.witness}"
        )
    transport = threshold_cost(inst.p0, inst.p1, inst.eps)
    two_eps = 2 * inst.eps
    out0 = [0] * space.n
    out1 = [0] * space.n
    for i in range(space.n):
        row = transport.coupling.matrix[i]
        for j in range(space.n):
            m = row[j]
            if m == 0:
                continue
            if space.le(space.dist[i][j], two_eps):
                mid, radius = midpoint(space, i, j)
                assert space.le(radius, inst.eps), "midpoint exceeded the budget"
                out0[mid] += m
                out1[mid] += m
            else:
                out0[i] += m
                out1[j] += m
    p0_star = DiscreteMeasure(space, tuple(out0))
    p1_star = DiscreteMeasure(space, tuple(out1))
    tv = total_variation(p0_star, p1_star)
    assert space.eq(tv, transport.value), (
        f"midpoint pair's total variation {tv} != transport cost {transport.value}"
    )
    assert in_winf_ball(p0_star, inst.p0, inst.eps), "midpoint-moved p0* left its ball"
    assert in_winf_ball(p1_star, inst.p1, inst.eps), "midpoint-moved p1* left its ball"
    return p0_star, p1_star


# ---------------------------------------------------------------------------
# the two-sided ball identity

@dataclass(frozen=True)
class LayeredBallReport:
    """Comparison of the dominated-transport value with the doubly-perturbed
    total-variation infimum, plus the feasibility of the rebalanced-measure
    construction."""

    transport_value: Number
    ball_infimum_value: Number
    equal: bool
    inequality_ok: bool
    construction_ok: bool
    midpoint_complete: bool


def layered_ball_check(inst: GameInstance) -> LayeredBallReport:
    """Check that the best dominated-measure transport cost matches the
    in-ball total-variation infimum (equality on midpoint-complete
    instances; '<=' always), and exercise the explicit construction that
    turns a dominated in-ball move into a perturbed prior.
    """
    if inst.prior_ratio < 1:
        raise ValueError("layered ball check requires prior ratio >= 1")
    space = inst.space
    t = inst.prior_ratio
    scaled_p0 = inst.p0.scaled(t)
    transport = unbalanced_cost(inst.p1, scaled_p0, inst.eps)
    lhs = transport.value
    value_si, _p0s, _p1s = supinf_value(inst)
    rhs = 1 - (t + 1) * value_si
    mp = is_midpoint_complete(space, inst.eps).complete

    # Rebalancing construction: for q dominated by T*p0 and q' an in-ball
    # move of q, p0' = p0 + (q' - q)/T is a probability measure in the
    # eps-ball of p0 with q' dominated by T*p0'.
    q = transport.coupling.col_marginal()
    inv_t = 1 / t if isinstance(t, float) else 1 / Fraction(t)
    construction_ok = True
    for q_prime in (q, _lowest_index_ball_move(q, inst.eps)):
        shift = tuple(
            p + (qp - qq) * inv_t for p, qp, qq in zip(inst.p0.mass, q_prime.mass, q.mass)
        )
        p0_prime = DiscreteMeasure(space, shift)
        if not p0_prime.is_probability:
            construction_ok = False
        if not dominates(q_prime, p0_prime.scaled(t)):
            construction_ok = False
        if not in_winf_ball(p0_prime, inst.p0, inst.eps):
            construction_ok = False
        if q_prime is q and any(not space.eq(a, b) for a, b in zip(p0_prime.mass, inst.p0.mass)):
            construction_ok = False

    return LayeredBallReport(
        transport_value=lhs,
        ball_infimum_value=rhs,
        equal=space.eq(lhs, rhs),
        inequality_ok=space.le(lhs, rhs),
        construction_ok=construction_ok,
        midpoint_complete=mp,
    )


def _lowest_index_ball_move(mu: DiscreteMeasure, eps: Number) -> DiscreteMeasure:
    """Deterministic in-ball perturbation: every atom slides to the lowest
    index point within eps of it."""
    space = mu.space
    out = [0] * space.n
    for i, m in enumerate(mu.mass):
        if m == 0:
            continue
        row = space.dist[i]
        target = next(j for j in range(space.n) if space.le(row[j], eps))
        out[target] += m
    return DiscreteMeasure(space, tuple(out))
