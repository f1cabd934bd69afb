"""
Report documents emitted by the analyses.

Every report carries ``schema`` = 1 when serialised; exact scalars are
always rendered as strings so no value goes through a float.
"""
from __future__ import annotations

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

__all__ = [
    "SCHEMA_VERSION",
    "ReportModel",
    "SmoothnessReport",
    "GridReport",
    "TorsionTrial",
    "TorsionReport",
    "FiniteGenerationVerdict",
    "GrilledCertificate",
    "GrilledReport",
    "H0Report",
    "SymProdTable",
    "SecantReport",
    "SurveyHistogram",
    "AnalysisReport",
    "SampleReport",
    "ErrorReport",
]

SCHEMA_VERSION = 1


class ReportModel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, populate_by_name=True)

    schema_version: int = Field(default=SCHEMA_VERSION, serialization_alias="schema")

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)


class SmoothnessReport(ReportModel):
    field: str
    bidegree: List[int]
    form: str
    smooth: bool
    witnesses: List[Dict[str, Any]] = Field(default_factory=list)
    shear: Optional[str] = None


class GridReport(ReportModel):
    rank: int
    is_grid: bool
    # f1, g1 are x-forms and f2, g2 y-forms with h = f1*g2 + g1*f2
    factorization: Optional[Dict[str, List[str]]] = None
    forms: Any = Field(default=None, exclude=True, repr=False)


class TorsionTrial(BaseModel):
    n: int
    kernel_dim: int


class TorsionReport(ReportModel):
    field: str
    k: int
    n_max: int
    tested: List[TorsionTrial] = Field(default_factory=list)
    order: Optional[int] = None
    lower_bound: int
    lower_bound_reason: str
    automorphism_bound: Optional[int] = None
    note: Optional[str] = None


class FiniteGenerationVerdict(ReportModel):
    verdict: Literal["FinitelyGenerated", "OpenUpTo", "NotApplicable"]
    order: Optional[int] = None
    n_max: Optional[int] = None
    reason: Optional[str] = None


class GrilledCertificate(BaseModel):
    f: str
    c: str
    scale: str = "1"
    clearing_exponent: int


class GrilledReport(ReportModel):
    n: int
    ambient_dim: int
    dim_w1: int
    dim_w2: int
    dim_intersection: int
    grilled: bool
    complement: List[str] = Field(default_factory=list)
    section: Dict[str, Any] = Field(default_factory=dict)
    certificate: Optional[GrilledCertificate] = None


class H0Report(ReportModel):
    field: str
    bundle: List[int]
    dimension: int
    riemann_roch: int
    basis: Dict[str, Any] = Field(default_factory=dict)


class SymProdTable(ReportModel):
    k: int
    genus: int
    classes: List[str]
    matrix: List[List[int]]
    kernel_vector: List[int]
    extended_classes: List[str]
    extended_matrix: List[List[int]]
    # K as a numerical combination of H and Delta
    canonical_in_h_delta: List[str]
    genus_gamma: int
    gamma_degree: int
    nef_rays: Dict[str, Dict[str, int]]
    checks: Dict[str, bool]

    @property
    def k_squared(self) -> int:
        return self.matrix[1][1]

    @property
    def k_delta(self) -> int:
        return self.matrix[1][2]

    @property
    def delta_squared(self) -> int:
        return self.matrix[2][2]


class SecantReport(ReportModel):
    k: int
    seed: int
    rank: int
    expected: int


class SurveyHistogram(ReportModel):
    k: int
    p: int
    n_max: int
    trials: int
    seed: int
    sampler: str
    # keys are orders as strings, plus "none" and "singular"
    counts: Dict[str, int] = Field(default_factory=dict)


class SampleReport(ReportModel):
    field: str
    k: int
    seed: int
    samples: List[Dict[str, Any]] = Field(default_factory=list)


class AnalysisReport(ReportModel):
    field: str
    form: str
    k: int
    genus: int
    smoothness: SmoothnessReport
    grid: GridReport
    torsion: Optional[TorsionReport] = None
    verdict: Optional[FiniteGenerationVerdict] = None
    grilled: Optional[GrilledReport] = None
    automorphism: Optional[Dict[str, Any]] = None


class ErrorReport(ReportModel):
    error: Dict[str, Any]
