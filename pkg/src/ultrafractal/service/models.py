"""Request and response models for the HTTP service and the CLI.

Rationals travel as 'p/q' strings end to end so responses stay exact; field
order is fixed, which keeps serialized reports byte-identical across runs.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

SUITE_NAMES = (
    "height-tree",
    "norm",
    "morphism",
    "ultrametric",
    "lipschitz",
    "partition",
    "word-diameters",
)


class ClassifyRequest(BaseModel):
    space: str = Field(description="ordinal literal (meaning [0, gamma]) or 'cantor'")


class ClassifyResponse(BaseModel):
    space: str
    verdict: Literal["BanachUltrafractal", "NotTopologicalFractal"]
    height: str
    height_kind: Literal["zero", "successor", "limit", "infinity"]
    multiplicity: str


class TreeRequest(BaseModel):
    height: str
    depth: int = Field(default=3, ge=1, le=12)
    breadth: int = Field(default=6, ge=1, le=64)
    lam: str = Field(default="1/2", description="contraction factor for node norms")
    include_norms: bool = True


class TreeNodeModel(BaseModel):
    path: list[int]
    height: str
    norm: str | None = None


class TreeResponse(BaseModel):
    root_height: str
    nodes: list[TreeNodeModel]


class CapsModel(BaseModel):
    level_cap: int = Field(default=64, ge=1)
    net_cap: int = Field(default=10 ** 6, ge=1)
    word_cap: int = Field(default=20, ge=0)


class IfsRequest(BaseModel):
    space: str | None = None
    height: str | None = None
    lam: str = "1/2"
    iterate: int = Field(default=6, ge=1, le=16)
    caps: CapsModel = CapsModel()


class IfsResponse(BaseModel):
    target: str
    lam: str
    glued: bool
    pieces: int
    map_names: list[str]
    iterations: int
    level_sizes: list[int] | None
    piece_level_sizes: list[list[int]] | None
    net_sizes: list[int]
    step_distances: list[str]
    contraction_ok: bool


class VerifyRequest(BaseModel):
    space: str | None = None
    height: str | None = None
    suites: list[str] = ["all"]
    lam: str = "1/2"
    depth: int = Field(default=4, ge=1, le=8)
    breadth: int = Field(default=8, ge=1, le=32)
    levels: int = Field(default=6, ge=1, le=12)
    epsilon: str | None = None
    caps: CapsModel = CapsModel()


class CheckModel(BaseModel):
    label: str
    passed: bool
    detail: str = ""


class SuiteResultModel(BaseModel):
    name: str
    passed: bool
    scope: str
    checks_run: int
    failures: list[CheckModel]


class VerifyResponse(BaseModel):
    target: str
    lam: str
    suites: list[SuiteResultModel]
    all_passed: bool


class IterateRequest(BaseModel):
    space: str | None = None
    height: str | None = None
    lam: str = "1/2"
    tol: str = "1/1024"
    steps: int = Field(default=10, ge=1, le=64)
    seeds: list[list[int]] | None = None
    caps: CapsModel = CapsModel()


class FixedPointModel(BaseModel):
    map: str
    branch: list[int]


class OrbitModel(BaseModel):
    map: str
    seed: list[int]
    distances_to_fix: list[str]
    reached_tol: bool


class IterateResponse(BaseModel):
    target: str
    lam: str
    tol: str
    fixed_points: list[FixedPointModel]
    orbits: list[OrbitModel]


class ErrorBody(BaseModel):
    error: Literal["bad_request", "not_successor", "cap_exceeded"]
    detail: str


class ServiceInfo(BaseModel):
    name: str
    version: str
    endpoints: list[str]


def schema_bundle() -> dict:
    """JSON schemas of every wire model, keyed by model name."""
    models = [
        ClassifyRequest, ClassifyResponse,
        TreeRequest, TreeResponse,
        IfsRequest, IfsResponse,
        VerifyRequest, VerifyResponse,
        IterateRequest, IterateResponse,
        ErrorBody, ServiceInfo,
    ]
    return {model.__name__: model.model_json_schema() for model in models}
