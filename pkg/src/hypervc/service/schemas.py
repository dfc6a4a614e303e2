"""Pydantic request/response models for the service.

Rationals travel as "num/den" strings; hypergraphs, set families, and CSPs
travel as their canonical JSON objects and are re-validated on entry.
"""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field


class GapRequest(BaseModel):
    r: int
    k: int
    full: bool = False
    solve: bool = True
    node_budget: Optional[int] = Field(default=None, alias="nodeBudget")

    model_config = {"populate_by_name": True}


class GapResponse(BaseModel):
    config: dict
    instance: dict
    cert: dict
    report: Optional[dict] = None


class SolveRequest(BaseModel):
    hypergraph: dict
    mode: Literal["lp", "exact", "round", "greedy", "all"] = "all"
    instance_id: str = Field(default="instance", alias="instanceId")
    node_budget: Optional[int] = Field(default=None, alias="nodeBudget")

    model_config = {"populate_by_name": True}


class SolveResponse(BaseModel):
    config: dict
    report: dict
    lp_solution: Optional[dict] = Field(default=None, alias="lpSolution")

    model_config = {"populate_by_name": True}


class ValidateRequest(BaseModel):
    hypergraph: dict


class ValidateResponse(BaseModel):
    config: dict
    violations: list[str]


class CheckSetRequest(BaseModel):
    hypergraph: dict
    vertices: list[str]
    mode: Literal["cover", "independent"]


class CheckSetResponse(BaseModel):
    config: dict
    ok: bool
    witness: Optional[list[str]] = None
    weight: str


class MeasureRequest(BaseModel):
    family: dict
    p: str


class MeasureResponse(BaseModel):
    config: dict
    measure: str


class ShiftRequest(BaseModel):
    family: dict
    i: Optional[int] = None
    j: Optional[int] = None


class ShiftResponse(BaseModel):
    config: dict
    shifted: dict
    fixpoint: bool


class CrossRequest(BaseModel):
    families: list[dict]
    t: int


class CrossResponse(BaseModel):
    config: dict
    cross_intersecting: bool = Field(alias="crossIntersecting")
    witness: Optional[list[list[int]]] = None

    model_config = {"populate_by_name": True}


class DensityWitnessRequest(BaseModel):
    family: dict
    q: str
    t: int
    strict: bool = True
    min_r: int = Field(default=0, alias="minR")

    model_config = {"populate_by_name": True}


class DensityWitnessResponse(BaseModel):
    config: dict
    all_dense: bool = Field(alias="allDense")
    counterexample: Optional[list[int]] = None
    r_by_set: Optional[dict[str, int]] = Field(default=None, alias="rBySet")

    model_config = {"populate_by_name": True}


class BallsAndBinsRequest(BaseModel):
    families: list[dict]
    qs: list[str]
    t: int


class BallsAndBinsResponse(BaseModel):
    config: dict
    blocked: bool
    witness: Optional[list[list[int]]] = None
    intersection: Optional[list[int]] = None


class ChernoffRequest(BaseModel):
    eps: str
    delta: str


class ChernoffResponse(BaseModel):
    config: dict
    t: int


class PcpGenerateRequest(BaseModel):
    layer_count: int = Field(alias="layerCount")
    vars_per_layer: int = Field(alias="varsPerLayer")
    range_sizes: list[int] = Field(alias="rangeSizes")
    constraint_density: str = Field(default="1", alias="constraintDensity")
    planted: bool = True
    seed: int = 0

    model_config = {"populate_by_name": True}


class PcpGenerateResponse(BaseModel):
    config: dict
    csp: dict
    planted_labeling: Optional[dict[str, int]] = Field(
        default=None, alias="plantedLabeling"
    )

    model_config = {"populate_by_name": True}


class PcpBestRequest(BaseModel):
    csp: dict
    layer_a: int = Field(alias="layerA")
    layer_b: int = Field(alias="layerB")

    model_config = {"populate_by_name": True}


class PcpBestResponse(BaseModel):
    config: dict
    labeling: dict[str, int]
    fraction: str


class PcpDensityRequest(BaseModel):
    csp: dict
    delta: str
    layers: list[int]
    subsets: list[list[str]]


class PcpDensityResponse(BaseModel):
    config: dict
    found: bool
    layer_a: Optional[int] = Field(default=None, alias="layerA")
    layer_b: Optional[int] = Field(default=None, alias="layerB")
    fraction: Optional[str] = None

    model_config = {"populate_by_name": True}


class ReduceRequest(BaseModel):
    csp: dict
    k: int
    r: int
    eps: str


class ReduceResponse(BaseModel):
    config: dict
    instance: dict


class CompletenessRequest(BaseModel):
    instance: dict
    labeling: dict[str, int]


class CompletenessResponse(BaseModel):
    config: dict
    independent_set: list[str] = Field(alias="independentSet")
    weight: str
    non_dummy_weight: str = Field(alias="nonDummyWeight")

    model_config = {"populate_by_name": True}


class DecodeRequest(BaseModel):
    instance: dict
    independent_set: list[str] = Field(alias="independentSet")
    seed: int = 0
    layer_pair: tuple[int, int] = Field(default=(0, 1), alias="layerPair")

    model_config = {"populate_by_name": True}


class DecodeResponse(BaseModel):
    config: dict
    report: dict


class ReportRequest(BaseModel):
    instances: list[dict]  # each {"id": str, "hypergraph": {...}}
    node_budget: Optional[int] = Field(default=None, alias="nodeBudget")

    model_config = {"populate_by_name": True}


class ReportResponse(BaseModel):
    config: dict
    rows: list[dict]
