"""Optimal adversarial risk: the infimum of expansion risk over every
decision region.

The closed form routes through unbalanced 0-1-cost transport: with prior
ratio T >= 1 (labels are swapped internally otherwise),

    optimal risk = (1 - unbalanced_cost(p1, T * p0, eps)) / (T + 1),

and the transport dual's min-cut set B yields a candidate optimal region
A* = expand(B, eps).  On midpoint-complete instances A* provably achieves
the value, which is asserted; on other instances the report carries both
the formula value and (for n <= 20) the exhaustive minimum, without
asserting their order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from .errors import TooLarge
from .metric import (
    DecisionRegion,
    Number,
    expand,
    expansion_table,
    is_midpoint_complete,
    mask_lex_key,
    region_from_mask,
)
from .risk import GameInstance, risk_expansion
from .transport import Coupling, mask_sum_cache, unbalanced_cost

logger = logging.getLogger(__name__)

_BRUTEFORCE_LIMIT = 20


@dataclass(frozen=True)
class OptimalRiskReport:
    """Outcome of the optimal-risk computation.

    ``value`` is the transport-formula value; ``witness`` the constructed
    region A*; ``dual_set`` the min-cut maximizer B and ``coupling`` the
    optimal unbalanced coupling behind the formula (both in swapped label
    orientation when the prior ratio was below 1).  When the exhaustive
    minimum was also computed, ``value_bruteforce`` holds it, ``mode_used``
    is "both" and ``agreement`` records whether the two values coincide.
    """

    value: Number
    witness: DecisionRegion
    dual_set: DecisionRegion
    mode_used: str
    agreement: Optional[bool]
    midpoint_complete: bool
    value_bruteforce: Optional[Number] = None
    coupling: Optional[Coupling] = None


def optimal_risk_bruteforce(inst: GameInstance):
    """Exact minimum of expansion risk over all 2^n regions.

    Returns ``(value, argmin)`` with the lexicographically least argmin;
    guarded to n <= 20.
    """
    space = inst.space
    n = space.n
    if n > _BRUTEFORCE_LIMIT:
        raise TooLarge(f"region enumeration guarded to n <= {_BRUTEFORCE_LIMIT}, got {n}")
    exp = expansion_table(space, inst.eps)
    p0_of = mask_sum_cache(inst.p0.mass)
    p1_of = mask_sum_cache(inst.p1.mass)
    w0, w1 = inst.weight0, inst.weight1
    full = (1 << n) - 1
    best_v, best_mask = None, None
    for m in range(1 << n):
        v = w0 * p0_of(exp[m]) + w1 * p1_of(exp[full ^ m])
        if (
            best_v is None
            or v < best_v
            or (v == best_v and mask_lex_key(m, n) < mask_lex_key(best_mask, n))
        ):
            best_v, best_mask = v, m
    return best_v, region_from_mask(space, best_mask)


def optimal_risk(inst: GameInstance) -> OptimalRiskReport:
    """Optimal adversarial risk via the unbalanced-transport formula.

    On midpoint-complete instances the constructed witness is asserted to
    reproduce the value (falling back to the exhaustive minimum with a log
    message if it ever does not); on non-complete instances the exhaustive
    minimum is reported alongside for n <= 20, with no ordering asserted.
    """
    work = inst if inst.prior_ratio >= 1 else inst.swapped()
    swapped = work is not inst
    space = inst.space
    transport = unbalanced_cost(work.p1, work.p0.scaled(work.prior_ratio), work.eps)
    value = work.weight1 * (1 - transport.value)
    dual_set = transport.witness_set
    witness_work = expand(dual_set, work.eps)
    witness = witness_work.complement() if swapped else witness_work
    complete = is_midpoint_complete(space, inst.eps).complete

    coupling = transport.coupling

    if complete:
        achieved = risk_expansion(inst, witness)
        if space.eq(achieved, value):
            return OptimalRiskReport(value, witness, dual_set, "formula", None, True, None, coupling)
        logger.warning(
            "witness region missed the formula value on a midpoint-complete "
            "instance (achieved %s, formula %s); falling back to brute force",
            achieved,
            value,
        )
        bf_value, bf_region = optimal_risk_bruteforce(inst)
        return OptimalRiskReport(
            value, bf_region, dual_set, "both", space.eq(bf_value, value), True, bf_value, coupling
        )

    if space.n <= _BRUTEFORCE_LIMIT:
        bf_value, _bf_region = optimal_risk_bruteforce(inst)
        return OptimalRiskReport(
            value, witness, dual_set, "both", space.eq(bf_value, value), False, bf_value, coupling
        )
    return OptimalRiskReport(value, witness, dual_set, "formula", None, False, None, coupling)
