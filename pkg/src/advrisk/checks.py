"""Named invariant checks over seeded random instances.

Each check compares two independently computed pipelines (flow formula vs
exhaustive enumeration, construction vs direct evaluation) over a
deterministic stream of generated instances and reports every discrepancy
with a replayable scenario.  Checks whose conclusion needs midpoint
completeness mark non-complete instances as skipped, never failed; the
unconditional parts (inequalities, constructions) always run.
"""

from __future__ import annotations

import random
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from .errors import UnknownCheck
from .game import layered_ball_check, nash_midpoint_construct, supinf_value
from .measure import DiscreteMeasure, dominates, total_variation
from .metric import (
    DecisionRegion,
    FiniteMetricSpace,
    Number,
    ball_masks,
    build_space,
    expansion_table,
    is_midpoint_complete,
    mask_expand,
    region_from_mask,
)
from .optimal import optimal_risk, optimal_risk_bruteforce
from .risk import GameInstance, LossProblem, risk_expansion, risk_general, risk_transport_maps
from .scenario import format_number
from .transport import (
    ball_sup_measure,
    eroded_excess_bruteforce,
    excess_bruteforce,
    greedy_ball_move,
    in_winf_ball,
    mask_sum_cache,
    threshold_cost,
    unbalanced_cost,
)

SPACE_FAMILIES = ("grid1d", "grid2d-l1", "grid2d-linf", "random-matrix")


@dataclass(frozen=True)
class InstanceGenerator:
    """Deterministic stream of test instances.

    The same seed and configuration always produce the same stream.
    ``space_family`` is one of the concrete families or ``"mixed"`` to
    cycle through all of them; ``eps_rule`` picks budgets that are integer
    multiples of the grid spacing (midpoint-complete on grids) or
    arbitrary rationals.
    """

    seed: int
    space_family: str = "mixed"
    n_range: Tuple[int, int] = (2, 10)
    eps_rule: str = "integer-multiples"
    t_set: tuple = (1, 2, Fraction(7, 2))
    mass_style: str = "rational-dirichlet"

    def __post_init__(self):
        if self.space_family not in SPACE_FAMILIES + ("mixed",):
            raise ValueError(f"unknown space family {self.space_family!r}")
        if self.eps_rule not in ("integer-multiples", "arbitrary"):
            raise ValueError(f"unknown eps rule {self.eps_rule!r}")
        if self.mass_style not in ("rational-dirichlet", "sparse-atoms"):
            raise ValueError(f"unknown mass style {self.mass_style!r}")
        lo, hi = self.n_range
        if not (1 <= lo <= hi):
            raise ValueError("n_range must satisfy 1 <= lo <= hi")

    # -- space / number helpers -------------------------------------------

    def _space(self, rng: random.Random):
        family = self.space_family
        if family == "mixed":
            family = rng.choice(SPACE_FAMILIES)
        lo, hi = self.n_range
        if family == "grid1d":
            n = rng.randint(max(lo, 2), hi)
            spec = {"kind": "grid1d", "n": n}
        elif family in ("grid2d-l1", "grid2d-linf"):
            norm = "l1" if family.endswith("l1") else "linf"
            shapes = [
                (w, h)
                for w in range(1, hi + 1)
                for h in range(w, hi + 1)
                if lo <= w * h <= hi and w * h >= 2
            ]
            w, h = rng.choice(shapes) if shapes else (1, max(lo, 2))
            spec = {"kind": "grid2d", "width": w, "height": h, "norm": norm}
        else:
            n = rng.randint(max(lo, 2), hi)
            weights = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    weights[i][j] = weights[j][i] = rng.randint(1, 8)
            for k in range(n):
                for i in range(n):
                    for j in range(n):
                        via = weights[i][k] + weights[k][j]
                        if i != j and via < weights[i][j]:
                            weights[i][j] = via
            spec = {"kind": "matrix", "dist": [list(row) for row in weights]}
        return build_space(spec), spec

    def _eps(self, rng: random.Random) -> Number:
        if self.eps_rule == "integer-multiples":
            return rng.choice((0, 1, 1, 2))
        return Fraction(rng.randint(0, 6), rng.choice((2, 3, 4)))

    def _mass(self, rng: random.Random, n: int) -> tuple:
        if self.mass_style == "sparse-atoms":
            k = rng.randint(1, min(3, n))
            support = sorted(rng.sample(range(n), k))
            weights = [0] * n
            for i in support:
                weights[i] = rng.randint(1, 6)
        else:
            weights = [rng.randint(0, 6) for _ in range(n)]
            if not any(weights):
                weights[rng.randrange(n)] = 1
        total = sum(weights)
        return tuple(Fraction(w, total) for w in weights)

    # -- streams -----------------------------------------------------------

    def instances(self, count: int) -> Iterator["GeneratedInstance"]:
        rng = random.Random(self.seed)
        for _ in range(count):
            space, spec = self._space(rng)
            eps = self._eps(rng)
            t = rng.choice(self.t_set)
            p0 = DiscreteMeasure(space, self._mass(rng, space.n))
            p1 = DiscreteMeasure(space, self._mass(rng, space.n))
            inst = GameInstance(space, p0, p1, t, eps)
            scenario = {
                "schema_version": 1,
                "space": spec,
                "p0": [format_number(m) for m in p0.mass],
                "p1": [format_number(m) for m in p1.mass],
                "T": format_number(t),
                "epsilon": format_number(eps),
                "mode": "exact",
            }
            yield GeneratedInstance(inst, scenario)

    def measure_pairs(self, count: int) -> Iterator["GeneratedMeasures"]:
        """General finite-measure pairs with mu(X) <= nu(X)."""
        rng = random.Random(self.seed)
        for _ in range(count):
            space, spec = self._space(rng)
            eps = self._eps(rng)
            den = rng.choice((1, 2, 3, 4))
            mu = DiscreteMeasure(
                space, tuple(Fraction(rng.randint(0, 5), den) for _ in range(space.n))
            )
            nu = DiscreteMeasure(
                space, tuple(Fraction(rng.randint(0, 5), den) for _ in range(space.n))
            )
            if mu.total == 0:
                mu = DiscreteMeasure.dirac(space, rng.randrange(space.n), Fraction(1, den))
            if nu.total == 0:
                nu = DiscreteMeasure.dirac(space, rng.randrange(space.n), Fraction(1, den))
            if mu.total > nu.total:
                mu, nu = nu, mu
            scenario = {
                "schema_version": 1,
                "space": spec,
                "p0": [format_number(m) for m in mu.mass],
                "p1": [format_number(m) for m in nu.mass],
                "T": "1",
                "epsilon": format_number(eps),
                "mode": "exact",
            }
            yield GeneratedMeasures(space, eps, mu, nu, scenario)

    def loss_problems(self, count: int) -> Iterator["GeneratedLoss"]:
        rng = random.Random(self.seed)
        for _ in range(count):
            space, spec = self._space(rng)
            eps = self._eps(rng)
            classes = ("a", "b") if rng.random() < 0.7 else ("a", "b", "c")
            prior_weights = [rng.randint(1, 5) for _ in classes]
            priors = tuple(Fraction(w, sum(prior_weights)) for w in prior_weights)
            conditionals = tuple(
                DiscreteMeasure(space, self._mass(rng, space.n)) for _ in classes
            )
            hypotheses = ("h0", "h1")
            loss = {
                (y, w): tuple(Fraction(rng.randint(0, 8), rng.choice((1, 2))) for _ in range(space.n))
                for y in classes
                for w in hypotheses
            }
            problem = LossProblem(space, classes, priors, conditionals, hypotheses, loss)
            scenario = {
                "schema_version": 1,
                "space": spec,
                "epsilon": format_number(eps),
                "mode": "exact",
                "loss_problem": {
                    "classes": list(classes),
                    "priors": [format_number(p) for p in priors],
                    "conditionals": [[format_number(m) for m in c.mass] for c in conditionals],
                    "hypotheses": list(hypotheses),
                    "loss": {
                        y: {w: [format_number(v) for v in loss[(y, w)]] for w in hypotheses}
                        for y in classes
                    },
                },
            }
            yield GeneratedLoss(problem, eps, scenario)


@dataclass(frozen=True)
class GeneratedInstance:
    instance: GameInstance
    scenario: dict


@dataclass(frozen=True)
class GeneratedMeasures:
    space: FiniteMetricSpace
    eps: Number
    mu: DiscreteMeasure
    nu: DiscreteMeasure
    scenario: dict


@dataclass(frozen=True)
class GeneratedLoss:
    problem: LossProblem
    eps: Number
    scenario: dict


# ---------------------------------------------------------------------------
# reports

@dataclass
class CheckReport:
    """Outcome of one named check over a generated stream."""

    check_name: str
    instances_run: int = 0
    skipped: int = 0
    failures: List[dict] = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.failures:
            return "fail"
        if self.instances_run and self.instances_run == self.skipped:
            return "skipped"
        return "pass"

    def record(self, scenario: dict, lhs, rhs, detail: str) -> None:
        def is_number(x):
            return isinstance(x, (int, float, Fraction)) and not isinstance(x, bool)

        def wire(x):
            return format_number(x) if is_number(x) else x

        numeric = is_number(lhs) and is_number(rhs)
        self.failures.append(
            {
                "instance": scenario,
                "lhs": wire(lhs),
                "rhs": wire(rhs),
                "gap": format_number(lhs - rhs) if numeric else None,
                "detail": detail,
            }
        )

    def merge(self, other: "CheckReport") -> "CheckReport":
        if other.check_name != self.check_name:
            raise ValueError("cannot merge reports of different checks")
        return CheckReport(
            self.check_name,
            self.instances_run + other.instances_run,
            self.skipped + other.skipped,
            self.failures + other.failures,
        )

    def to_json(self) -> dict:
        return {
            "check_name": self.check_name,
            "status": self.status,
            "instances_run": self.instances_run,
            "skipped": self.skipped,
            "failures": self.failures,
        }


def _aux_rng(gen: InstanceGenerator, label: str, index: int) -> random.Random:
    return random.Random(f"{gen.seed}:{label}:{index}")


# ---------------------------------------------------------------------------
# individual checks

def _check_strassen(gen: InstanceGenerator, count: int) -> CheckReport:
    """Unbalanced transport value == exhaustive excess supremum, and the
    optimal coupling's column marginal realizes the dominated-measure
    characterization."""
    report = CheckReport("strassen")
    for g in gen.measure_pairs(count):
        report.instances_run += 1
        try:
            result = unbalanced_cost(g.mu, g.nu, g.eps)
            brute, _ = excess_bruteforce(g.mu, g.nu, g.eps)
            if result.value != brute:
                report.record(g.scenario, result.value, brute, "flow value != subset supremum")
                continue
            total = g.mu.total
            inv = 1 / Fraction(total)
            mu_n = g.mu.scaled(inv)
            col = result.coupling.col_marginal()
            col_n = col.scaled(inv)
            if not dominates(col_n, g.nu.scaled(inv)):
                report.record(g.scenario, True, False, "coupling column marginal not dominated")
                continue
            rescaled = total * threshold_cost(mu_n, col_n, g.eps).value
            if rescaled != result.value:
                report.record(
                    g.scenario, rescaled, result.value, "dominated-measure form disagrees"
                )
        except AssertionError as exc:
            report.record(g.scenario, "assertion", "ok", str(exc))
    return report


def _check_optimal_risk(gen: InstanceGenerator, count: int) -> CheckReport:
    """Transport formula == exhaustive minimum (midpoint-gated), witness
    reproduces the value, and the eps=0 cost is total variation."""
    report = CheckReport("optimal-risk")
    for g in gen.instances(count):
        report.instances_run += 1
        inst = g.instance
        try:
            tv = total_variation(inst.p0, inst.p1)
            d0 = threshold_cost(inst.p0, inst.p1, 0).value
            if d0 != tv:
                report.record(g.scenario, d0, tv, "zero-budget cost != total variation")
                continue
            if not is_midpoint_complete(inst.space, inst.eps).complete:
                report.skipped += 1
                continue
            formula = optimal_risk(inst)
            brute, _ = optimal_risk_bruteforce(inst)
            if formula.value != brute:
                report.record(g.scenario, formula.value, brute, "formula != exhaustive minimum")
                continue
            achieved = risk_expansion(inst, formula.witness)
            if achieved != formula.value:
                report.record(g.scenario, achieved, formula.value, "witness missed the value")
        except AssertionError as exc:
            report.record(g.scenario, "assertion", "ok", str(exc))
    return report


def _check_minimax(gen: InstanceGenerator, count: int) -> CheckReport:
    """sup-inf <= inf-sup always; equality on midpoint-complete instances."""
    report = CheckReport("minimax")
    for g in gen.instances(count):
        report.instances_run += 1
        inst = g.instance
        try:
            si, _p0, _p1 = supinf_value(inst)
            rep = optimal_risk(inst)
            if si > rep.value:
                report.record(g.scenario, si, rep.value, "max-min exceeded min-max")
                continue
            if not rep.midpoint_complete:
                report.skipped += 1
                continue
            if si != rep.value:
                report.record(g.scenario, si, rep.value, "minimax gap on complete instance")
        except AssertionError as exc:
            report.record(g.scenario, "assertion", "ok", str(exc))
    return report


def _check_ball_identity(gen: InstanceGenerator, count: int) -> CheckReport:
    """Greedy ball supremum equals the expanded-region mass, for every
    region; the attaining measure stays in its ball (sampled)."""
    report = CheckReport("ball-identity")
    for idx, g in enumerate(gen.instances(count)):
        report.instances_run += 1
        inst = g.instance
        space = inst.space
        n = space.n
        if n > 10:
            report.skipped += 1
            continue
        exp = expansion_table(space, inst.eps)
        sums = {0: mask_sum_cache(inst.p0.mass), 1: mask_sum_cache(inst.p1.mass)}
        try:
            bad = False
            for mask in range(1 << n):
                region = region_from_mask(space, mask)
                for label, center in ((0, inst.p0), (1, inst.p1)):
                    moved, _ = greedy_ball_move(center, region, inst.eps)
                    lhs = sum(moved.mass[i] for i in region.members)
                    rhs = sums[label](exp[mask])
                    if lhs != rhs:
                        report.record(
                            g.scenario, lhs, rhs,
                            f"ball supremum != expansion mass at region {sorted(region.members)}",
                        )
                        bad = True
                        break
                if bad:
                    break
            if bad:
                continue
            rng = _aux_rng(gen, "ball-identity", idx)
            for _ in range(4):
                mask = rng.randrange(1 << n)
                value, argmax = ball_sup_measure(inst.p0, region_from_mask(space, mask), inst.eps)
                if not in_winf_ball(argmax, inst.p0, inst.eps):
                    report.record(g.scenario, True, False, "ball supremum argmax left its ball")
                    break
        except AssertionError as exc:
            report.record(g.scenario, "assertion", "ok", str(exc))
    return report


def _check_capacity(gen: InstanceGenerator, count: int) -> CheckReport:
    """v(A) = p(expand(A, eps)) is 2-alternating: 500 random pairs each."""
    report = CheckReport("capacity")
    for idx, g in enumerate(gen.instances(count)):
        report.instances_run += 1
        inst = g.instance
        space = inst.space
        balls = ball_masks(space, inst.eps)
        p_of = mask_sum_cache(inst.p0.mass)
        rng = _aux_rng(gen, "capacity", idx)
        size = 1 << space.n
        for _ in range(500):
            a = rng.randrange(size)
            b = rng.randrange(size)
            lhs = p_of(mask_expand(balls, a | b)) + p_of(mask_expand(balls, a & b))
            rhs = p_of(mask_expand(balls, a)) + p_of(mask_expand(balls, b))
            if lhs > rhs:
                report.record(
                    g.scenario, lhs, rhs, f"submodularity violated at masks ({a}, {b})"
                )
                break
    return report


def _check_expansion_algebra(gen: InstanceGenerator, count: int) -> CheckReport:
    """Union distributivity, indicator identity, erosion sandwich, nested
    expansion bound and the midpoint double-expansion equivalence,
    exhaustively over regions (n <= 8)."""
    report = CheckReport("expansion-algebra")
    for idx, g in enumerate(gen.instances(count)):
        report.instances_run += 1
        inst = g.instance
        space = inst.space
        n = space.n
        if n > 8:
            report.skipped += 1
            continue
        eps = inst.eps
        balls = ball_masks(space, eps)
        exp = expansion_table(space, eps)
        exp2 = expansion_table(space, 2 * eps)
        size = 1 << n
        full = size - 1
        scenario = g.scenario
        ok = True

        for a in range(size):
            # indicator identity: x is in expand(A) iff A meets x's ball
            if exp[a] != sum(1 << x for x in range(n) if balls[x] & a):
                report.record(scenario, exp[a], None, f"indicator identity failed at mask {a}")
                ok = False
                break
            # sandwich: expand(contract(A)) <= A <= contract(expand(A))
            contracted = full ^ exp[full ^ a]
            if exp[contracted] & ~a:
                report.record(scenario, None, None, f"sandwich lower failed at mask {a}")
                ok = False
                break
            if a & ~(full ^ exp[full ^ exp[a]]):
                report.record(scenario, None, None, f"sandwich upper failed at mask {a}")
                ok = False
                break
        if not ok:
            continue

        for a in range(size):
            for b in range(a, size):
                if exp[a | b] != exp[a] | exp[b]:
                    report.record(scenario, None, None, f"union distributivity failed ({a},{b})")
                    ok = False
                    break
                if exp[a & b] & ~(exp[a] & exp[b]):
                    report.record(scenario, None, None, f"intersection inclusion failed ({a},{b})")
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue

        # nested bound: expand(A, e1-e2-d) <= contract(expand(A, e1), e2)
        rng = _aux_rng(gen, "expansion-algebra", idx)
        for _ in range(3):
            e1 = Fraction(rng.randint(2, 6), 2)
            e2 = e1 * Fraction(rng.randint(1, 3), 4)
            delta = (e1 - e2) * Fraction(1, rng.randint(2, 4))
            small = expansion_table(space, e1 - e2 - delta)
            big = expansion_table(space, e1)
            mid = expansion_table(space, e2)
            for a in range(size):
                target = full ^ mid[full ^ big[a]]
                if small[a] & ~target:
                    report.record(
                        scenario, None, None,
                        f"nested expansion bound failed at mask {a} (e1={e1}, e2={e2}, d={delta})",
                    )
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue

        # midpoint completeness <=> expand(A, 2eps) <= expand(expand(A, eps), eps)
        complete = is_midpoint_complete(space, eps).complete
        double_holds = all(not (exp2[a] & ~exp[exp[a]]) for a in range(size))
        if complete != double_holds:
            report.record(
                scenario, complete, double_holds,
                "midpoint completeness disagrees with double-expansion test",
            )
    return report


def _check_risk_equivalence(gen: InstanceGenerator, count: int) -> CheckReport:
    """Expansion, transport-map and ball-sup risks agree for every region;
    the closed-expansion variant collapses onto the same value."""
    report = CheckReport("risk-equivalence")
    for g in gen.instances(count):
        report.instances_run += 1
        inst = g.instance
        space = inst.space
        n = space.n
        if n > 10:
            report.skipped += 1
            continue
        exp = expansion_table(space, inst.eps)
        p0_of = mask_sum_cache(inst.p0.mass)
        p1_of = mask_sum_cache(inst.p1.mass)
        w0, w1 = inst.weight0, inst.weight1
        full = (1 << n) - 1
        try:
            for mask in range(1 << n):
                region = region_from_mask(space, mask)
                via_masks = w0 * p0_of(exp[mask]) + w1 * p1_of(exp[full ^ mask])
                maps_value, _maps = risk_transport_maps(inst, region)
                v0, _m0 = ball_sup_measure(inst.p0, region, inst.eps)
                v1, _m1 = ball_sup_measure(inst.p1, region.complement(), inst.eps)
                ball_value = w0 * v0 + w1 * v1
                if not (via_masks == maps_value == ball_value):
                    report.record(
                        g.scenario, maps_value, via_masks,
                        f"risk definitions disagree at region {sorted(region.members)}",
                    )
                    break
                closed = w0 * _closed_expansion_mass(inst.p0, region, inst.eps) + (
                    w1 * _closed_expansion_mass(inst.p1, region.complement(), inst.eps)
                )
                if closed != via_masks:
                    report.record(
                        g.scenario, closed, via_masks,
                        f"closed-expansion risk differs at region {sorted(region.members)}",
                    )
                    break
        except AssertionError as exc:
            report.record(g.scenario, "assertion", "ok", str(exc))
    return report


def _closed_expansion_mass(mu: DiscreteMeasure, region: DecisionRegion, eps) -> Number:
    """Mass of {x : d(x, A) <= eps}, computed through the distance-to-set
    route rather than ball membership."""
    space = mu.space
    total = 0
    for x in range(space.n):
        dist = space.set_distance(x, region.members)
        if dist is not None and space.le(dist, eps):
            total += mu.mass[x]
    return total


def _check_chain_ineq(gen: InstanceGenerator, count: int) -> CheckReport:
    """General-loss risks: maps <= kernels <= ball, with equality on finite
    spaces, for every hypothesis."""
    report = CheckReport("chain-ineq")
    for g in gen.loss_problems(count):
        report.instances_run += 1
        problem = g.problem
        try:
            for w in problem.hypotheses:
                values = {
                    mode: risk_general(problem, w, g.eps, mode)
                    for mode in ("sup", "maps", "kernels", "ball")
                }
                if not (values["maps"] <= values["kernels"] <= values["ball"]):
                    report.record(
                        g.scenario, values["maps"], values["ball"],
                        f"chain inequality violated for hypothesis {w!r}",
                    )
                    break
                if len(set(values.values())) != 1:
                    report.record(
                        g.scenario, values["sup"], values["ball"],
                        f"risk modes disagree for hypothesis {w!r}: {values}",
                    )
                    break
                zero_budget = risk_general(problem, w, 0, "sup")
                standard = sum(
                    prior * sum(m * l for m, l in zip(cond.mass, problem.loss[(y, w)]))
                    for y, prior, cond in zip(problem.classes, problem.priors, problem.conditionals)
                )
                if zero_budget != standard:
                    report.record(
                        g.scenario, zero_budget, standard,
                        f"zero budget differs from standard loss for {w!r}",
                    )
                    break
        except AssertionError as exc:
            report.record(g.scenario, "assertion", "ok", str(exc))
    return report


def _check_shortest_tv(gen: InstanceGenerator, count: int) -> CheckReport:
    """With equal priors the threshold cost is the shortest total variation
    between in-ball pairs: sampled pairs are never closer, the midpoint
    construction attains it (midpoint-gated)."""
    report = CheckReport("shortest-tv")
    for idx, g in enumerate(gen.instances(count)):
        report.instances_run += 1
        base = g.instance
        inst = GameInstance(base.space, base.p0, base.p1, 1, base.eps)
        scenario = dict(g.scenario, T="1")
        space = inst.space
        try:
            cost = threshold_cost(inst.p0, inst.p1, inst.eps).value
            rng = _aux_rng(gen, "shortest-tv", idx)
            for _ in range(5):
                q0 = _random_ball_move(rng, inst.p0, inst.eps)
                q1 = _random_ball_move(rng, inst.p1, inst.eps)
                tv = total_variation(q0, q1)
                if cost > tv:
                    report.record(
                        scenario, cost, tv, "sampled in-ball pair beat the threshold cost"
                    )
                    break
            else:
                if not is_midpoint_complete(space, inst.eps).complete:
                    report.skipped += 1
                    continue
                p0_star, p1_star = nash_midpoint_construct(inst)
                tv = total_variation(p0_star, p1_star)
                if tv != cost:
                    report.record(scenario, tv, cost, "midpoint construction missed the cost")
        except AssertionError as exc:
            report.record(scenario, "assertion", "ok", str(exc))
    return report


def _random_ball_move(rng: random.Random, mu: DiscreteMeasure, eps) -> DiscreteMeasure:
    space = mu.space
    out = [0] * space.n
    for i, m in enumerate(mu.mass):
        if m == 0:
            continue
        row = space.dist[i]
        options = [j for j in range(space.n) if space.le(row[j], eps)]
        out[rng.choice(options)] += m
    return DiscreteMeasure(space, tuple(out))


def _check_layered_balls(gen: InstanceGenerator, count: int) -> CheckReport:
    """Dominated-transport value vs doubly-perturbed TV infimum: '<=' and
    the rebalancing construction always, equality midpoint-gated."""
    report = CheckReport("layered-balls")
    for g in gen.instances(count):
        report.instances_run += 1
        inst = g.instance
        scenario = g.scenario
        if inst.prior_ratio < 1:
            inst = inst.swapped()
            scenario = dict(
                g.scenario,
                p0=g.scenario["p1"],
                p1=g.scenario["p0"],
                T=format_number(inst.prior_ratio),
            )
        try:
            rep = layered_ball_check(inst)
            if not rep.inequality_ok:
                report.record(
                    scenario, rep.transport_value, rep.ball_infimum_value,
                    "transport value exceeded the ball infimum",
                )
                continue
            if not rep.construction_ok:
                report.record(scenario, True, False, "rebalancing construction failed")
                continue
            if not rep.midpoint_complete:
                report.skipped += 1
                continue
            if not rep.equal:
                report.record(
                    scenario, rep.transport_value, rep.ball_infimum_value,
                    "layered ball equality failed on a complete instance",
                )
        except AssertionError as exc:
            report.record(scenario, "assertion", "ok", str(exc))
    return report


CHECKS = {
    "ball-identity": _check_ball_identity,
    "capacity": _check_capacity,
    "chain-ineq": _check_chain_ineq,
    "expansion-algebra": _check_expansion_algebra,
    "layered-balls": _check_layered_balls,
    "minimax": _check_minimax,
    "optimal-risk": _check_optimal_risk,
    "risk-equivalence": _check_risk_equivalence,
    "shortest-tv": _check_shortest_tv,
    "strassen": _check_strassen,
}

#: Checks whose headline equality only holds under midpoint completeness.
GATED_CHECKS = ("layered-balls", "minimax", "optimal-risk", "shortest-tv")


def check(name: str, gen: InstanceGenerator, count: int) -> CheckReport:
    """Run one named check over ``count`` generated instances."""
    if name not in CHECKS:
        raise UnknownCheck(f"unknown check {name!r}; known: {', '.join(sorted(CHECKS))}")
    if count < 1:
        raise ValueError("count must be >= 1")
    return CHECKS[name](gen, count)


# ---------------------------------------------------------------------------
# the counterexample probe

@dataclass(frozen=True)
class GapRecord:
    """A strict gap between the eroded-excess and plain-excess suprema."""

    eroded_value: Number
    excess_value: Number
    eroded_region: DecisionRegion
    excess_region: DecisionRegion


def probe_midpoint_gap(
    space: FiniteMetricSpace, eps: Number, mu: DiscreteMeasure, nu: DiscreteMeasure
) -> Optional[GapRecord]:
    """Compare the two excess suprema; a record is returned only when they
    differ, which can happen only on non-midpoint-complete instances."""
    eroded_v, eroded_r = eroded_excess_bruteforce(mu, nu, eps)
    excess_v, excess_r = excess_bruteforce(mu, nu, eps)
    if space.eq(eroded_v, excess_v):
        return None
    return GapRecord(eroded_v, excess_v, eroded_r, excess_r)


# ---------------------------------------------------------------------------
# suite runner

def _child_seed(seed: int, tag: str) -> int:
    return (seed * 1_000_003 + zlib.crc32(tag.encode())) % (1 << 62)


def _generators_for(name: str, seed: int, count: int) -> List[Tuple[InstanceGenerator, int]]:
    """Per-check generator wiring.

    Gated checks split the budget between a midpoint-friendly stream
    (integer epsilon on grids) and an arbitrary-epsilon stream so both the
    equality and the skip path are exercised.
    """
    n_range = {
        "ball-identity": (2, 10),
        "chain-ineq": (2, 8),
        "expansion-algebra": (2, 8),
        "risk-equivalence": (2, 10),
    }.get(name, (2, 12))
    if name in GATED_CHECKS:
        main = max(1, count * 3 // 4)
        rest = max(1, count - main)
        return [
            (
                InstanceGenerator(
                    _child_seed(seed, name + ":int"), "mixed", n_range, "integer-multiples"
                ),
                main,
            ),
            (
                InstanceGenerator(
                    _child_seed(seed, name + ":arb"), "mixed", n_range, "arbitrary"
                ),
                rest,
            ),
        ]
    rule = "arbitrary" if name in ("capacity", "expansion-algebra", "ball-identity") else "integer-multiples"
    return [(InstanceGenerator(_child_seed(seed, name), "mixed", n_range, rule), count)]


def run_suite(seed: int, count: int, suite: str = "all", jobs: int = 1) -> List[CheckReport]:
    """Run a named check (or all) and return reports sorted by check name.

    Output is independent of ``jobs``: every check draws from its own
    seeded generator and reports merge deterministically.
    """
    names = sorted(CHECKS) if suite == "all" else [suite]
    for name in names:
        if name not in CHECKS:
            raise UnknownCheck(f"unknown check {name!r}; known: {', '.join(sorted(CHECKS))}")
    tasks = []
    for name in names:
        for gen, gen_count in _generators_for(name, seed, count):
            tasks.append((name, gen, gen_count))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda t: check(t[0], t[1], t[2]), tasks))
    else:
        results = [check(name, gen, gen_count) for name, gen, gen_count in tasks]
    merged: Dict[str, CheckReport] = {}
    for rep in results:
        merged[rep.check_name] = merged[rep.check_name].merge(rep) if rep.check_name in merged else rep
    return [merged[name] for name in sorted(merged)]
