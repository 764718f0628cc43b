"""The solver service: every operation as a stateless POST endpoint.

Computation is pure request -> response, so a single app instance serves
any number of clients; the CLI mounts the same app in-process.
"""

import json
from importlib import resources

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from ..checks import probe_midpoint_gap, run_suite
from ..errors import AdvRiskError
from ..game import adversary_best_response, nash_construct, supinf_value
from ..metric import is_midpoint_complete
from ..optimal import optimal_risk
from ..risk import (
    risk_expansion,
    risk_general,
    risk_standard,
    risk_transport_maps,
    risk_winf_ball,
)
from ..scenario import (
    ScenarioError,
    coupling_to_wire,
    format_number,
    measure_to_wire,
    parse_number,
    region_to_wire,
    scenario_instance,
    scenario_loss_problem,
    scenario_mode,
    scenario_region,
    scenario_space,
)
from .schemas import (
    GameResponse,
    NashResponse,
    OptimalRiskResponse,
    ProbeResponse,
    RiskResponse,
    Scenario,
    VerifyRequest,
    VerifyResponse,
)


def load_schema() -> dict:
    with resources.files("advrisk.schema").joinpath("scenario.schema.json").open() as fh:
        return json.load(fh)


def create_app() -> FastAPI:
    app = FastAPI(
        title="advrisk service",
        description=(
            "Adversarial classification risk, bottleneck transport and game "
            "certificates on finite metric spaces."
        ),
        version="0.1.0",
    )

    @app.exception_handler(ScenarioError)
    async def _scenario_error(_request, exc: ScenarioError):
        return JSONResponse(
            status_code=422,
            content={"detail": [{"loc": exc.field.split("."), "msg": str(exc)}]},
        )

    @app.exception_handler(AdvRiskError)
    async def _domain_error(_request, exc: AdvRiskError):
        return JSONResponse(
            status_code=422,
            content={"detail": [{"loc": ["scenario"], "msg": str(exc)}]},
        )

    @app.get("/healthz")
    def health():
        return {"status": "ok"}

    @app.get("/v1/schema")
    def schema():
        return load_schema()

    @app.post("/v1/risk", response_model=RiskResponse, response_model_exclude_none=True)
    def risk(scenario: Scenario) -> RiskResponse:
        data = scenario.to_data()
        exact, _tol = scenario_mode(data)
        space = scenario_space(data)
        eps = parse_number(data.get("epsilon", 0), exact, "epsilon")
        region = scenario_region(data, space)
        problem = scenario_loss_problem(data, space)
        if region is None and problem is None:
            raise ScenarioError("region", "provide a region and/or a loss_problem")
        binary = None
        if region is not None:
            inst = scenario_instance(data)
            maps_value, maps = risk_transport_maps(inst, region)
            ball_value, (q0, q1) = risk_winf_ball(inst, region)
            binary = {
                "region": region_to_wire(region),
                "standard": format_number(risk_standard(inst, region)),
                "expansion": format_number(risk_expansion(inst, region)),
                "transport_maps": format_number(maps_value),
                "winf_ball": format_number(ball_value),
                "maps": {
                    str(label): {str(src): dst for src, dst in moves.items()}
                    for label, moves in maps.items()
                },
                "worst_pair": [measure_to_wire(q0), measure_to_wire(q1)],
            }
        general = None
        if problem is not None:
            general = {
                str(w): {
                    mode: format_number(risk_general(problem, w, eps, mode))
                    for mode in ("sup", "maps", "kernels", "ball")
                }
                for w in problem.hypotheses
            }
        return RiskResponse(
            mode=data.get("mode", "exact"),
            midpoint_complete=is_midpoint_complete(space, eps).complete,
            binary=binary,
            general=general,
        )

    @app.post(
        "/v1/optimal-risk",
        response_model=OptimalRiskResponse,
        response_model_exclude_none=True,
    )
    def optimal(scenario: Scenario) -> OptimalRiskResponse:
        data = scenario.to_data()
        inst = scenario_instance(data)
        report = optimal_risk(inst)
        return OptimalRiskResponse(
            mode=data.get("mode", "exact"),
            value=format_number(report.value),
            witness=region_to_wire(report.witness),
            dual_set=region_to_wire(report.dual_set),
            coupling=coupling_to_wire(report.coupling),
            mode_used=report.mode_used,
            agreement=report.agreement,
            value_bruteforce=format_number(report.value_bruteforce),
            midpoint_complete=report.midpoint_complete,
        )

    @app.post("/v1/game", response_model=GameResponse, response_model_exclude_none=True)
    def game(scenario: Scenario) -> GameResponse:
        data = scenario.to_data()
        inst = scenario_instance(data)
        value_si, p0_star, p1_star = supinf_value(inst)
        report = optimal_risk(inst)
        adversary = None
        region = scenario_region(data, inst.space)
        if region is not None:
            q0, q1, value = adversary_best_response(inst, region)
            adversary = {
                "region": region_to_wire(region),
                "value": format_number(value),
                "q0": measure_to_wire(q0),
                "q1": measure_to_wire(q1),
            }
        return GameResponse(
            mode=data.get("mode", "exact"),
            value_supinf=format_number(value_si),
            value_infsup=format_number(report.value),
            p0_star=measure_to_wire(p0_star),
            p1_star=measure_to_wire(p1_star),
            a_star=region_to_wire(report.witness),
            midpoint_complete=report.midpoint_complete,
            adversary_at_region=adversary,
        )

    @app.post("/v1/nash", response_model=NashResponse, response_model_exclude_none=True)
    def nash(scenario: Scenario) -> NashResponse:
        data = scenario.to_data()
        inst = scenario_instance(data)
        cert = nash_construct(inst)
        return NashResponse(
            mode=data.get("mode", "exact"),
            value_supinf=format_number(cert.value_supinf),
            value_infsup=format_number(cert.value_infsup),
            delta_achieved=format_number(cert.delta_achieved),
            p0_star=measure_to_wire(cert.p0_star),
            p1_star=measure_to_wire(cert.p1_star),
            a_star=region_to_wire(cert.a_star),
            midpoint_complete=cert.midpoint_complete,
        )

    @app.post("/v1/probe", response_model=ProbeResponse, response_model_exclude_none=True)
    def probe(scenario: Scenario) -> ProbeResponse:
        data = scenario.to_data()
        inst = scenario_instance(data)
        record = probe_midpoint_gap(inst.space, inst.eps, inst.p0, inst.p1)
        gap = None
        if record is not None:
            gap = {
                "eroded_value": format_number(record.eroded_value),
                "excess_value": format_number(record.excess_value),
                "eroded_region": region_to_wire(record.eroded_region),
                "excess_region": region_to_wire(record.excess_region),
            }
        return ProbeResponse(
            mode=data.get("mode", "exact"),
            midpoint_complete=is_midpoint_complete(inst.space, inst.eps).complete,
            gap=gap,
        )

    @app.post("/v1/verify", response_model=VerifyResponse)
    def verify(request: VerifyRequest) -> VerifyResponse:
        reports = run_suite(request.seed, request.count, request.suite, request.jobs)
        return VerifyResponse(
            suite=request.suite,
            seed=request.seed,
            count=request.count,
            failed=any(r.status == "fail" for r in reports),
            reports=[r.to_json() for r in reports],
        )

    return app


app = create_app()


def serve() -> None:
    """Console entry point: run the service under uvicorn."""
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(prog="advrisk-service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    args = parser.parse_args()
    uvicorn.run("advrisk.service.app:app", host=args.host, port=args.port)
