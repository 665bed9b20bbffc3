"""Request and response models for the HTTP service.

Every request carries a ComplexSource naming exactly one input (a native
JSON document or a generator spec) plus an optional weight spec. Reports are
plain data; the CLI renders them and remote clients get them as JSON.

Form coefficients travel as a JSON object keyed by incidence pair, syntax
"dP:i>dQ:j" for the vector (p-cell i > q-cell j), for example "d1:0>d0:1".
"""

from __future__ import annotations

from typing import Dict, List, Optional, Union

from pydantic import BaseModel


class ComplexSource(BaseModel):
    document: Optional[str] = None
    generate: Optional[str] = None
    weights: Optional[Union[str, List[List[float]]]] = None
    seed: Optional[int] = None


class ValidateRequest(BaseModel):
    source: ComplexSource
    require_quasiconvex: bool = False


class HodgeRequest(BaseModel):
    source: ComplexSource
    tolerance: float = 1e-8


class CurvatureRequest(BaseModel):
    source: ComplexSource
    form: Optional[Dict[str, float]] = None


class CheckRequest(BaseModel):
    source: ComplexSource
    trials: int = 20
    tolerance: float = 1e-12


class ExportRequest(BaseModel):
    source: ComplexSource
    name: Optional[str] = None


class ValidateReport(BaseModel):
    cell_counts: List[int]
    dimension: int
    euler_characteristic: int
    quasiconvex: bool
    closed_surface: Optional[bool] = None
    weights_constant: bool


class DegreeReport(BaseModel):
    degree: int
    eigenvalues: List[float]
    harmonic_dim: int
    betti: int
    min_nonzero_eigenvalue: Optional[float] = None
    match: bool


class HodgeReport(BaseModel):
    degrees: List[DegreeReport]
    match: bool
    tolerance: float


class CellCurvatureModel(BaseModel):
    index: int
    degree: int
    gauss: int
    scalar: int


class VectorRicci(BaseModel):
    tau: List[int]
    sigma: List[int]
    definition_route: float
    closed_form: float


class FormReport(BaseModel):
    vectors: List[VectorRicci]
    max_route_discrepancy: float


class CurvatureReportModel(BaseModel):
    complex_class: str
    euler_characteristic: int
    vertices: List[CellCurvatureModel]
    faces: Optional[List[CellCurvatureModel]] = None
    gauss_total_vertices: int
    gauss_total_faces: Optional[int] = None
    gauss_bonnet_target: int
    gauss_bonnet_ok: bool
    form: Optional[FormReport] = None


class CheckReport(BaseModel):
    trials: int
    threshold: float
    residuals: Dict[str, float]
    passed: bool


class ExportReport(BaseModel):
    document: str


class ErrorEnvelope(BaseModel):
    kind: str
    message: str
    detail: dict = {}
