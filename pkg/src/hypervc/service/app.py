"""FastAPI service wrapping the solvers, generators, and the reduction.

Domain errors map to HTTP 400, budget overruns to HTTP 413; every response
echoes the fully resolved request config for reproducibility.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..budget import BudgetExceeded
from ..gapgen import build_ahk, verify_gap
from ..hypergraph import (
    ParseError,
    PartiteHypergraph,
    UnknownVertexError,
)
from ..optimize import solve_all, solve_lp
from ..pcp import (
    DENSITY_FAIL,
    LayeredCsp,
    NO_CONSTRAINTS,
    ToySpec,
    best_labeling,
    make_toy_layered_csp,
    weak_density_check,
)
from ..rational import format_rational, parse_rational
from ..reduction import (
    ReductionInstance,
    ReductionParams,
    build_reduction,
    completeness_certificate,
    completeness_weight,
    decode_labeling,
)
from ..setfam import (
    AllDense,
    ProcedureBlocked,
    SetFamily,
    balls_and_bins_witness,
    chernoff_t,
    is_cross_intersecting,
    left_shift,
    measure_family,
    members_of,
    prefix_density_witness,
    shift_once,
)
from . import schemas as sch

app = FastAPI(
    title="hypervc",
    description=(
        "Exact tooling for vertex cover on k-partite k-uniform hypergraphs: "
        "LP relaxation, gap instances, cross-intersecting set families, and "
        "a layered label-cover reduction"
    ),
)


@app.exception_handler(ValueError)
async def _domain_error(request: Request, exc: ValueError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(UnknownVertexError)
async def _unknown_vertex(request: Request, exc: UnknownVertexError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": f"unknown vertex {exc}"})


@app.exception_handler(BudgetExceeded)
async def _budget(request: Request, exc: BudgetExceeded) -> JSONResponse:
    return JSONResponse(status_code=413, content={"detail": str(exc)})


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/gap", response_model=sch.GapResponse, response_model_exclude_none=True)
def gap(req: sch.GapRequest) -> sch.GapResponse:
    inst = build_ahk(req.r, req.k, full=req.full)
    report = None
    if req.solve:
        report = verify_gap(inst, node_budget=req.node_budget).to_obj()
    return sch.GapResponse(
        config=req.model_dump(by_alias=True),
        instance=inst.hypergraph.to_obj(),
        cert=inst.cert.to_obj(),
        report=report,
    )


@app.post("/solve", response_model=sch.SolveResponse, response_model_exclude_none=True)
def solve(req: sch.SolveRequest) -> sch.SolveResponse:
    h = PartiteHypergraph.from_obj(req.hypergraph)
    modes = (
        ("lp", "exact", "round", "greedy") if req.mode == "all" else (req.mode,)
    )
    report = solve_all(
        h, instance_id=req.instance_id, modes=modes, node_budget=req.node_budget
    )
    lp_obj = None
    if req.mode in ("lp", "all"):
        sol, _ = solve_lp(h)
        lp_obj = sol.to_obj()
    return sch.SolveResponse(
        config=req.model_dump(by_alias=True),
        report=report.to_obj(),
        lpSolution=lp_obj,
    )


@app.post("/hypergraph/validate", response_model=sch.ValidateResponse)
def validate(req: sch.ValidateRequest) -> sch.ValidateResponse:
    h = PartiteHypergraph.from_obj(req.hypergraph)
    return sch.ValidateResponse(
        config=req.model_dump(by_alias=True), violations=h.validate()
    )


@app.post("/hypergraph/check", response_model=sch.CheckSetResponse, response_model_exclude_none=True)
def check_set(req: sch.CheckSetRequest) -> sch.CheckSetResponse:
    h = PartiteHypergraph.from_obj(req.hypergraph)
    if req.mode == "cover":
        ok, witness = h.is_cover(req.vertices)
    else:
        ok, witness = h.is_independent(req.vertices)
    return sch.CheckSetResponse(
        config=req.model_dump(by_alias=True),
        ok=ok,
        witness=list(witness) if witness else None,
        weight=format_rational(h.set_weight(req.vertices)),
    )


@app.post("/setfam/measure", response_model=sch.MeasureResponse)
def setfam_measure(req: sch.MeasureRequest) -> sch.MeasureResponse:
    fam = SetFamily.from_obj(req.family)
    mu = measure_family(fam, parse_rational(req.p))
    return sch.MeasureResponse(
        config=req.model_dump(by_alias=True), measure=format_rational(mu)
    )


@app.post("/setfam/shift", response_model=sch.ShiftResponse)
def setfam_shift(req: sch.ShiftRequest) -> sch.ShiftResponse:
    fam = SetFamily.from_obj(req.family)
    if (req.i is None) != (req.j is None):
        raise ValueError("supply both i and j for a single shift, or neither")
    if req.i is not None:
        shifted = shift_once(fam, req.i, req.j)
    else:
        shifted = left_shift(fam)
    return sch.ShiftResponse(
        config=req.model_dump(by_alias=True),
        shifted=shifted.to_obj(),
        fixpoint=shifted.sets == fam.sets,
    )


@app.post("/setfam/cross", response_model=sch.CrossResponse, response_model_exclude_none=True)
def setfam_cross(req: sch.CrossRequest) -> sch.CrossResponse:
    fams = [SetFamily.from_obj(f) for f in req.families]
    ok, witness = is_cross_intersecting(fams, req.t)
    return sch.CrossResponse(
        config=req.model_dump(by_alias=True),
        crossIntersecting=ok,
        witness=(
            None if witness is None else [sorted(members_of(m)) for m in witness]
        ),
    )


@app.post("/setfam/density-witness", response_model=sch.DensityWitnessResponse, response_model_exclude_none=True)
def setfam_density(req: sch.DensityWitnessRequest) -> sch.DensityWitnessResponse:
    fam = SetFamily.from_obj(req.family)
    result = prefix_density_witness(
        fam, parse_rational(req.q), req.t, strict=req.strict, min_r=req.min_r
    )
    if isinstance(result, AllDense):
        return sch.DensityWitnessResponse(
            config=req.model_dump(by_alias=True),
            allDense=True,
            rBySet={
                ",".join(map(str, members_of(m))): r
                for m, r in result.r_by_mask.items()
            },
        )
    return sch.DensityWitnessResponse(
        config=req.model_dump(by_alias=True),
        allDense=False,
        counterexample=sorted(members_of(result.mask)),
    )


@app.post("/setfam/balls-and-bins", response_model=sch.BallsAndBinsResponse, response_model_exclude_none=True)
def setfam_balls(req: sch.BallsAndBinsRequest) -> sch.BallsAndBinsResponse:
    fams = [SetFamily.from_obj(f) for f in req.families]
    qs = [parse_rational(q) for q in req.qs]
    result = balls_and_bins_witness(fams, qs, req.t)
    if isinstance(result, ProcedureBlocked):
        return sch.BallsAndBinsResponse(
            config=req.model_dump(by_alias=True), blocked=True
        )
    return sch.BallsAndBinsResponse(
        config=req.model_dump(by_alias=True),
        blocked=False,
        witness=[sorted(members_of(m)) for m in result.masks],
        intersection=sorted(members_of(result.intersection)),
    )


@app.post("/setfam/chernoff-t", response_model=sch.ChernoffResponse)
def setfam_chernoff(req: sch.ChernoffRequest) -> sch.ChernoffResponse:
    t = chernoff_t(parse_rational(req.eps), parse_rational(req.delta))
    return sch.ChernoffResponse(config=req.model_dump(by_alias=True), t=t)


@app.post("/pcp/generate", response_model=sch.PcpGenerateResponse, response_model_exclude_none=True)
def pcp_generate(req: sch.PcpGenerateRequest) -> sch.PcpGenerateResponse:
    spec = ToySpec(
        layer_count=req.layer_count,
        vars_per_layer=req.vars_per_layer,
        range_sizes=req.range_sizes,
        constraint_density=parse_rational(req.constraint_density),
        planted=req.planted,
        seed=req.seed,
    )
    csp, hidden = make_toy_layered_csp(spec)
    return sch.PcpGenerateResponse(
        config=req.model_dump(by_alias=True),
        csp=csp.to_obj(),
        plantedLabeling=hidden,
    )


@app.post("/pcp/best", response_model=sch.PcpBestResponse)
def pcp_best(req: sch.PcpBestRequest) -> sch.PcpBestResponse:
    csp = LayeredCsp.from_obj(req.csp)
    labeling, frac = best_labeling(csp, req.layer_a, req.layer_b)
    return sch.PcpBestResponse(
        config=req.model_dump(by_alias=True),
        labeling=labeling,
        fraction=frac if isinstance(frac, str) else format_rational(frac),
    )


@app.post("/pcp/density", response_model=sch.PcpDensityResponse, response_model_exclude_none=True)
def pcp_density(req: sch.PcpDensityRequest) -> sch.PcpDensityResponse:
    csp = LayeredCsp.from_obj(req.csp)
    result = weak_density_check(
        csp, parse_rational(req.delta), req.layers, req.subsets
    )
    if result == DENSITY_FAIL:
        return sch.PcpDensityResponse(
            config=req.model_dump(by_alias=True), found=False
        )
    return sch.PcpDensityResponse(
        config=req.model_dump(by_alias=True),
        found=True,
        layerA=result.layer_a,
        layerB=result.layer_b,
        fraction=format_rational(result.fraction),
    )


@app.post("/reduce", response_model=sch.ReduceResponse)
def reduce(req: sch.ReduceRequest) -> sch.ReduceResponse:
    csp = LayeredCsp.from_obj(req.csp)
    params = ReductionParams.make(k=req.k, eps=parse_rational(req.eps), r=req.r)
    inst = build_reduction(csp, params)
    return sch.ReduceResponse(
        config=req.model_dump(by_alias=True), instance=inst.to_obj()
    )


@app.post("/reduce/completeness", response_model=sch.CompletenessResponse)
def reduce_completeness(req: sch.CompletenessRequest) -> sch.CompletenessResponse:
    inst = ReductionInstance.from_obj(req.instance)
    cert = completeness_certificate(inst, req.labeling)
    dummy_weight = Fraction(2) * (inst.params.k + 1)
    return sch.CompletenessResponse(
        config=req.model_dump(by_alias=True),
        independentSet=sorted(cert.vertex_set),
        weight=format_rational(cert.weight),
        nonDummyWeight=format_rational(cert.weight - dummy_weight),
    )


@app.post("/decode", response_model=sch.DecodeResponse)
def decode(req: sch.DecodeRequest) -> sch.DecodeResponse:
    inst = ReductionInstance.from_obj(req.instance)
    report = decode_labeling(
        inst, req.independent_set, seed=req.seed, layer_pair=tuple(req.layer_pair)
    )
    return sch.DecodeResponse(
        config=req.model_dump(by_alias=True), report=report.to_obj()
    )


@app.post("/report", response_model=sch.ReportResponse)
def report(req: sch.ReportRequest) -> sch.ReportResponse:
    rows = []
    for entry in req.instances:
        h = PartiteHypergraph.from_obj(entry["hypergraph"])
        rep = solve_all(
            h,
            instance_id=str(entry.get("id", "instance")),
            modes=("lp", "exact"),
            node_budget=req.node_budget,
        )
        rows.append(rep.to_obj())
    return sch.ReportResponse(config=req.model_dump(by_alias=True), rows=rows)
