"""cellform: weighted regular cell complexes, combinatorial differential
forms, the Hodge Laplacian, and curvature with exact Gauss-Bonnet checks."""

from .complex import CellComplex, CellId, Chain, IncidenceVector, build
from .hodge import (
    Form,
    basis,
    betti_oracle,
    d_op,
    dstar_op,
    harmonic_dimension,
    hodge_decompose,
    inner_product,
    laplacian,
    spectrum,
)
from .calculus import (
    CellFunction,
    CombVectorField,
    derivative_of_function,
    div,
    grad,
    green_residual,
    integrate,
    laplacian_of_function,
    one_form_d,
    one_form_dstar,
)
from .curvature import (
    covariant_sq,
    flat_laplacian,
    gauss_bonnet,
    gauss_curvature_face,
    gauss_curvature_vertex,
    neighbors,
    pointwise_energy,
    ricci_all,
    ricci_closed_form,
    ricci_definition,
    scalar_curvature_face,
    scalar_curvature_vertex,
    unit_form_trace_check,
)
from .ingest import generate, parse_complex_json, parse_edge_list, parse_off, serialize_complex

__version__ = "0.1.0"

__all__ = [
    "CellComplex",
    "CellFunction",
    "CellId",
    "Chain",
    "CombVectorField",
    "Form",
    "IncidenceVector",
    "basis",
    "betti_oracle",
    "build",
    "covariant_sq",
    "d_op",
    "derivative_of_function",
    "div",
    "dstar_op",
    "flat_laplacian",
    "gauss_bonnet",
    "gauss_curvature_face",
    "gauss_curvature_vertex",
    "generate",
    "grad",
    "green_residual",
    "harmonic_dimension",
    "hodge_decompose",
    "inner_product",
    "integrate",
    "laplacian",
    "laplacian_of_function",
    "neighbors",
    "one_form_d",
    "one_form_dstar",
    "parse_complex_json",
    "parse_edge_list",
    "parse_off",
    "pointwise_energy",
    "ricci_all",
    "ricci_closed_form",
    "ricci_definition",
    "scalar_curvature_face",
    "scalar_curvature_vertex",
    "serialize_complex",
    "spectrum",
    "unit_form_trace_check",
    "__version__",
]
