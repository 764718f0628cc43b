"""Pydantic request/response models for the solver service.

These mirror the shipped JSON schema; FastAPI uses them to validate
incoming scenarios (HTTP 422 on shape errors) and to serialize reports.
Exact-mode values travel as rational strings, float-mode values as
numbers.
"""

from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

Rational = Union[str, int, float]
Value = Union[str, int, float]


class SpaceSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["grid1d", "grid2d", "matrix", "points"]
    n: Optional[int] = Field(default=None, ge=1)
    width: Optional[int] = Field(default=None, ge=1)
    height: Optional[int] = Field(default=None, ge=1)
    norm: Optional[Literal["l1", "linf", "l2"]] = None
    dist: Optional[List[List[Rational]]] = None
    labels: Optional[List[str]] = None
    coords: Optional[List[List[Rational]]] = None
    p: Optional[Union[int, float, Literal["inf"]]] = None

    @model_validator(mode="after")
    def _required_fields(self):
        needed = {
            "grid1d": ("n",),
            "grid2d": ("width", "height"),
            "matrix": ("dist",),
            "points": ("coords",),
        }[self.kind]
        for name in needed:
            if getattr(self, name) is None:
                raise ValueError(f"space kind {self.kind!r} requires field {name!r}")
        return self


class LossProblemSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    classes: List[str]
    priors: List[Rational]
    conditionals: List[List[Rational]]
    hypotheses: List[str]
    loss: Dict[str, Dict[str, List[Rational]]]


class Scenario(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1]
    space: SpaceSpec
    p0: Optional[List[Rational]] = None
    p1: Optional[List[Rational]] = None
    T: Rational = 1
    epsilon: Rational = 0
    region: Optional[List[int]] = None
    loss_problem: Optional[LossProblemSpec] = None
    mode: Literal["exact", "float"] = "exact"
    tolerance: float = Field(default=1e-9, gt=0)

    def to_data(self) -> dict:
        return self.model_dump(exclude_none=True)


class VerifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = 1
    suite: str = "all"
    seed: int = 1
    count: int = Field(default=100, ge=1)
    jobs: int = Field(default=1, ge=1)


# ---------------------------------------------------------------------------
# responses

class BinaryRiskReport(BaseModel):
    region: List[int]
    standard: Value
    expansion: Value
    transport_maps: Value
    winf_ball: Value
    maps: Dict[str, Dict[str, int]]
    worst_pair: List[List[Value]]


class RiskResponse(BaseModel):
    mode: str
    midpoint_complete: bool
    binary: Optional[BinaryRiskReport] = None
    general: Optional[Dict[str, Dict[str, Value]]] = None


class OptimalRiskResponse(BaseModel):
    mode: str
    value: Value
    witness: List[int]
    dual_set: List[int]
    coupling: List[List[Value]]
    mode_used: str
    agreement: Optional[bool] = None
    value_bruteforce: Optional[Value] = None
    midpoint_complete: bool


class AdversaryReport(BaseModel):
    region: List[int]
    value: Value
    q0: List[Value]
    q1: List[Value]


class GameResponse(BaseModel):
    mode: str
    value_supinf: Value
    value_infsup: Value
    p0_star: List[Value]
    p1_star: List[Value]
    a_star: List[int]
    midpoint_complete: bool
    adversary_at_region: Optional[AdversaryReport] = None


class NashResponse(BaseModel):
    mode: str
    value_supinf: Value
    value_infsup: Value
    delta_achieved: Value
    p0_star: List[Value]
    p1_star: List[Value]
    a_star: List[int]
    midpoint_complete: bool


class GapReport(BaseModel):
    eroded_value: Value
    excess_value: Value
    eroded_region: List[int]
    excess_region: List[int]


class ProbeResponse(BaseModel):
    mode: str
    midpoint_complete: bool
    gap: Optional[GapReport] = None


class CheckReportModel(BaseModel):
    check_name: str
    status: str
    instances_run: int
    skipped: int
    failures: List[dict]


class VerifyResponse(BaseModel):
    suite: str
    seed: int
    count: int
    failed: bool
    reports: List[CheckReportModel]
