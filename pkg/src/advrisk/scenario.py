"""Wire-format plumbing: scenario dicts in, report values out.

Scenarios carry numbers as rational strings ("1/3"), decimal strings or
plain JSON numbers.  In exact mode everything is parsed into
``fractions.Fraction`` (JSON floats go through their shortest decimal
representation) and every emitted value is a rational string, never a
float.  In float mode numbers stay floats and comparisons use the
scenario's tolerance.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional, Tuple

from .errors import AdvRiskError
from .measure import DiscreteMeasure
from .metric import (
    DEFAULT_FLOAT_TOL,
    DecisionRegion,
    FiniteMetricSpace,
    Number,
    build_space,
)
from .risk import GameInstance, LossProblem
from .transport import Coupling


class ScenarioError(AdvRiskError):
    """Invalid scenario content; carries the offending field's path."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


def parse_number(value, exact: bool, field: str = "value") -> Number:
    """Parse a JSON number or rational/decimal string."""
    try:
        if isinstance(value, bool):
            raise ValueError("booleans are not numbers")
        if isinstance(value, str):
            parsed = Fraction(value)
        elif isinstance(value, int):
            parsed = Fraction(value)
        elif isinstance(value, float):
            parsed = Fraction(repr(value))
        else:
            raise ValueError(f"unsupported number type {type(value).__name__}")
    except (ValueError, ZeroDivisionError) as exc:
        raise ScenarioError(field, f"not a number: {value!r} ({exc})") from None
    return parsed if exact else float(parsed)


def format_number(value: Optional[Number]):
    """Exact values render as rational strings; floats stay floats."""
    if value is None:
        return None
    if isinstance(value, (int, Fraction)):
        return str(Fraction(value))
    return float(value)


def measure_to_wire(mu: DiscreteMeasure) -> list:
    return [format_number(m) for m in mu.mass]


def region_to_wire(region: Optional[DecisionRegion]) -> Optional[list]:
    return None if region is None else list(region.indices())


def coupling_to_wire(coupling: Coupling) -> list:
    """Sparse triples [i, j, mass] in row-major order."""
    out = []
    for i, row in enumerate(coupling.matrix):
        for j, m in enumerate(row):
            if m != 0:
                out.append([i, j, format_number(m)])
    return out


# ---------------------------------------------------------------------------
# scenario -> domain objects

_EXACT_GRID_NORMS = ("l1", "linf")


def scenario_mode(data: Mapping) -> Tuple[bool, float]:
    mode = data.get("mode", "exact")
    if mode not in ("exact", "float"):
        raise ScenarioError("mode", f"must be 'exact' or 'float', got {mode!r}")
    tolerance = data.get("tolerance", DEFAULT_FLOAT_TOL)
    if not isinstance(tolerance, (int, float)) or tolerance <= 0:
        raise ScenarioError("tolerance", "must be a positive number")
    return mode == "exact", float(tolerance)


def scenario_space(data: Mapping) -> FiniteMetricSpace:
    exact, tolerance = scenario_mode(data)
    spec = data.get("space")
    if not isinstance(spec, Mapping) or "kind" not in spec:
        raise ScenarioError("space", "must be an object with a 'kind'")
    kind = spec["kind"]
    if exact:
        if kind == "grid2d" and spec.get("norm", "l1") not in _EXACT_GRID_NORMS:
            raise ScenarioError(
                "space.norm", "l2 grids have irrational distances; use mode=float"
            )
        if kind == "points" and spec.get("p", 2) not in (1, "inf"):
            raise ScenarioError(
                "space.p", "only p=1 or p='inf' point clouds are exact; use mode=float"
            )
    try:
        if kind == "matrix":
            dist = [
                [parse_number(v, exact, f"space.dist[{i}][{j}]") for j, v in enumerate(row)]
                for i, row in enumerate(spec.get("dist", []))
            ]
            return build_space(
                {"kind": "matrix", "dist": dist, "labels": spec.get("labels")},
                tol=0 if exact else tolerance,
            )
        if kind == "points":
            coords = [
                [parse_number(v, exact, f"space.coords[{i}][{j}]") for j, v in enumerate(row)]
                for i, row in enumerate(spec.get("coords", []))
            ]
            return build_space(
                {"kind": "points", "coords": coords, "p": spec.get("p", 2)},
                tol=0 if exact else tolerance,
            )
        space = build_space(dict(spec))
        if not exact and space.tol == 0:
            # rational space driven in float mode: adopt the tolerance
            space = FiniteMetricSpace(space.dist, space.labels, tolerance)
        return space
    except ScenarioError:
        raise
    except (AdvRiskError, KeyError, TypeError, ValueError) as exc:
        raise ScenarioError("space", str(exc)) from None


def scenario_measure(data: Mapping, key: str, space: FiniteMetricSpace) -> DiscreteMeasure:
    exact, _ = scenario_mode(data)
    vector = data.get(key)
    if not isinstance(vector, (list, tuple)):
        raise ScenarioError(key, "must be a mass vector")
    if len(vector) != space.n:
        raise ScenarioError(key, f"has length {len(vector)}, space has {space.n} points")
    mass = tuple(parse_number(v, exact, f"{key}[{i}]") for i, v in enumerate(vector))
    try:
        return DiscreteMeasure(space, mass)
    except ValueError as exc:
        raise ScenarioError(key, str(exc)) from None


def scenario_region(data: Mapping, space: FiniteMetricSpace) -> Optional[DecisionRegion]:
    region = data.get("region")
    if region is None:
        return None
    if not isinstance(region, (list, tuple)):
        raise ScenarioError("region", "must be a list of point indices")
    try:
        return DecisionRegion(space, frozenset(int(i) for i in region))
    except (TypeError, ValueError) as exc:
        raise ScenarioError("region", str(exc)) from None


def scenario_instance(data: Mapping) -> GameInstance:
    exact, _ = scenario_mode(data)
    space = scenario_space(data)
    if "p0" not in data or "p1" not in data:
        missing = "p0" if "p0" not in data else "p1"
        raise ScenarioError(missing, "is required")
    p0 = scenario_measure(data, "p0", space)
    p1 = scenario_measure(data, "p1", space)
    t = parse_number(data.get("T", 1), exact, "T")
    eps = parse_number(data.get("epsilon", 0), exact, "epsilon")
    try:
        return GameInstance(space, p0, p1, t, eps)
    except (AdvRiskError, ValueError) as exc:
        raise ScenarioError("scenario", str(exc)) from None


def scenario_loss_problem(data: Mapping, space: FiniteMetricSpace) -> Optional[LossProblem]:
    exact, _ = scenario_mode(data)
    spec = data.get("loss_problem")
    if spec is None:
        return None
    for required in ("classes", "priors", "conditionals", "hypotheses", "loss"):
        if required not in spec:
            raise ScenarioError(f"loss_problem.{required}", "is required")
    classes = tuple(spec["classes"])
    hypotheses = tuple(spec["hypotheses"])
    priors = tuple(
        parse_number(v, exact, f"loss_problem.priors[{i}]") for i, v in enumerate(spec["priors"])
    )
    conditionals = []
    for i, vec in enumerate(spec["conditionals"]):
        mass = tuple(
            parse_number(v, exact, f"loss_problem.conditionals[{i}][{j}]")
            for j, v in enumerate(vec)
        )
        try:
            conditionals.append(DiscreteMeasure(space, mass))
        except ValueError as exc:
            raise ScenarioError(f"loss_problem.conditionals[{i}]", str(exc)) from None
    loss = {}
    table = spec["loss"]
    for y in classes:
        row = table.get(str(y)) if isinstance(table, Mapping) else None
        if row is None:
            raise ScenarioError(f"loss_problem.loss.{y}", "is required")
        for w in hypotheses:
            col = row.get(str(w)) if isinstance(row, Mapping) else None
            if col is None:
                raise ScenarioError(f"loss_problem.loss.{y}.{w}", "is required")
            loss[(y, w)] = tuple(
                parse_number(v, exact, f"loss_problem.loss.{y}.{w}[{k}]")
                for k, v in enumerate(col)
            )
    try:
        return LossProblem(space, classes, tuple(priors), tuple(conditionals), hypotheses, loss)
    except (AdvRiskError, ValueError) as exc:
        raise ScenarioError("loss_problem", str(exc)) from None
