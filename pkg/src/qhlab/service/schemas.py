"""Request/response models for the HTTP service (and the CLI, which
calls the same handlers in process).

Experiment endpoints return the report pre-serialized as text in the
requested format rather than as nested JSON, so the byte-identical
round-trip guarantee of the report layer survives transport untouched.
"""

from __future__ import annotations

from pydantic import BaseModel, Field, field_validator

Point = list[float]


class DomainSpec(BaseModel):
    kind: str
    params: dict[str, float] = Field(default_factory=dict)
    dim: int | None = None
    window: tuple[float, float] | None = None


class GridOptions(BaseModel):
    spacing: float | None = None
    margin: float | None = None
    stencil: int | None = None


class DistanceRequest(BaseModel):
    domain: DomainSpec
    a: Point
    b: Point
    grid: GridOptions | None = None
    refine: bool = True


class DistanceResponse(BaseModel):
    value: float
    error_estimate: float
    spacing: float
    converged: bool
    resolution_values: tuple[float, float]


class GeodesicRequest(DistanceRequest):
    pass


class GeodesicResponse(DistanceResponse):
    points: list[Point]


class PairBoundsRequest(BaseModel):
    domain: DomainSpec
    a: Point
    b: Point
    c_values: list[float] = Field(default_factory=lambda: [1.2])

    @field_validator("c_values")
    @classmethod
    def _c_gt_one(cls, v):
        if any(c <= 1.0 for c in v):
            raise ValueError("comparison constants must exceed 1")
        return v


class NaBound(BaseModel):
    c: float
    value: float


class PairBoundsResponse(BaseModel):
    d_a: float
    d_b: float
    sep: float
    s: float
    ghm: float
    na: list[NaBound]


class ModulusSpec(BaseModel):
    family: str  # "power" | "log_power"
    coeff: float
    exponent: float
    cap: float | None = None


class ModulusVerdictRequest(BaseModel):
    modulus: ModulusSpec
    omega_star_at: list[float] = Field(default_factory=list)


class IntegralVerdict(BaseModel):
    value: float
    truncated: float
    convergent: bool
    slope: float


class ModulusVerdictResponse(BaseModel):
    dini: IntegralVerdict
    log_dini: IntegralVerdict
    omega_star: list[float]


class JacobianSweepRequest(BaseModel):
    domain: DomainSpec
    map: str = "normal"  # "normal" | "sigma"
    bound: str | None = None  # "lower" | "sandwich"; default depends on map
    n_points: int = 1000
    C: float | None = None
    x0_min: float = 1e-3
    x0_max: float = 0.2
    seed: int = 0
    anchor_a: Point | None = None  # sigma map only
    anchor_b: Point | None = None


class JacobianSweepResponse(BaseModel):
    n_points: int
    n_failed: int
    worst_lower_slack: float
    worst_upper_slack: float | None
    C_used: float
    passed: bool


class PushforwardSweepRequest(BaseModel):
    domain: DomainSpec
    n_curves: int = 100
    C: float | None = None
    seed: int = 0
    x0_min: float = 0.02
    x0_max: float = 0.25


class PushforwardSweepResponse(BaseModel):
    n_checks: int
    min_margin: float
    C_used: float
    passed: bool


class AsymptoticsRequest(BaseModel):
    domain: DomainSpec
    zeta: Point
    mode: str = "tangential-pair"
    t0: float = 0.25
    rungs: int = 8
    ratio: float = 1.0
    c: float = 1.2
    format: str = "csv"
    timestamp: str | None = None


class ExperimentResponse(BaseModel):
    report: str
    format: str
    passed: bool | None = None
    metadata: dict[str, str]


class BoundSuiteRequest(BaseModel):
    domain: DomainSpec
    pairs: list[tuple[Point, Point]]
    c_values: list[float] = Field(default_factory=lambda: [1.2])
    grid: GridOptions | None = None
    format: str = "csv"
    timestamp: str | None = None


class BestConstantRequest(BaseModel):
    domain: DomainSpec
    zeta: Point
    depth: float


class BestConstantResponse(BaseModel):
    c: float


class HealthResponse(BaseModel):
    status: str
    version: str
