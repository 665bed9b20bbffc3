"""Neighbor-vector combinatorics, the Bochner ingredients, Ricci curvature by
two independent routes, Gauss and scalar curvature, and the Gauss-Bonnet
identities.

================================================================
neighbor vectors
================================================================
Fix a base vector (tau > sigma) with dim tau = p + 1. Its neighbors are:

  0-up     (tau' > sigma), tau' != tau, with NO common coface of tau and
           tau' one dimension further up;
  0-down   (tau > sigma'), sigma' != sigma, with NO common face of sigma
           and sigma' one dimension further down;
  2-up     (mu > tau') where mu is a common coface of tau and tau' and
           tau' > sigma, tau' != tau;
  2-down   (sigma' > rho) where rho is a common face of sigma and sigma'
           and tau > sigma', sigma' != sigma.

Both relations are symmetric, and on a quasiconvex complex the witness mu
(resp. rho) of a 2-neighbor pair is unique, so the enumeration below insists
on quasiconvexity. Vertices have no faces, so 0-down pairs at the bottom
dimension are never excluded by a common face.

================================================================
weight prefactors
================================================================
Every neighbor term enters the quadratic forms with a fixed prefactor:

  2-up    (mu > tau')     : w_sigma / w_mu
  2-down  (sigma' > rho)  : w_rho / w_tau
  0-up    (tau' > sigma)  : w_sigma^2 / (w_tau w_tau')
  0-down  (tau > sigma')  : w_sigma w_sigma' / w_tau^2

covariant_sq squares differences against 2-neighbors and sums against
0-neighbors. flat_laplacian keeps difference-of-squares on 2-neighbors and
sum-of-squares on 0-neighbors; its 2-neighbor portion cancels globally
because the relation and the prefactor are both symmetric in each pair, and
the suite pins the single-edge total (4 for the all-ones form) to guard the
sign conventions.

flat_laplacian_centered is the variant with every term a neighbor-minus-base
difference of squares. It is the form under which the pointwise Bochner
decomposition closes: with it, ricci_definition reproduces
ricci_closed_form identically at constant weights (to round-off), which is
the module's central cross-check, and its total over all vectors vanishes
for every weight assignment. ricci_definition therefore uses the centered
variant; flat_laplacian itself is kept with the conventions above.

At non-constant weights the two Ricci routes genuinely differ; callers get
both numbers and the discrepancy is reported, never asserted away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .complex import CellComplex, CellId, IncidenceVector
from .errors import (
    NonConstantWeights,
    NormalizationViolated,
    NotClosedSurface,
    NotQuasiconvex,
    UnsupportedComplexClass,
    UnsupportedDimension,
)
from .hodge import Form, form_to_hat, hat_to_form, laplacian


@dataclass
class NeighborSets:
    """The four neighbor lists of a base incidence vector."""

    base: IncidenceVector
    zero_up: list
    zero_down: list
    two_up: list
    two_down: list

    def zero_count(self):
        return len(self.zero_up) + len(self.zero_down)

    def two_count(self):
        return len(self.two_up) + len(self.two_down)


@dataclass
class CellCurvature:
    cell: CellId
    degree: int
    gauss: int
    scalar: int


@dataclass
class CurvatureReport:
    complex_class: str
    euler_characteristic: int
    vertices: list
    faces: Optional[list]
    gauss_total_vertices: int
    gauss_total_faces: Optional[int]
    gauss_bonnet_target: int
    gauss_bonnet_ok: bool


def _require_quasiconvex(cx):
    ok, witness = cx.is_quasiconvex()
    if not ok:
        t1, t2, cells = witness
        raise NotQuasiconvex(
            f"closures of {t1!r} and {t2!r} violate quasiconvexity",
            detail={"tau1": tuple(t1), "tau2": tuple(t2), "cells": [tuple(c) for c in cells]},
        )


def neighbors(cx: CellComplex, base: IncidenceVector) -> NeighborSets:
    """Enumerate the 0- and 2-neighbor vectors of a base vector.

    Requires a quasiconvex complex (checked once per complex and cached).
    Lists are ordered by cell indices for deterministic downstream output.
    """
    _require_quasiconvex(cx)
    key = ("neighbors", base.tau, base.sigma)
    if key in cx._cache:
        return cx._cache[key]
    tau, sigma = base.tau, base.sigma
    up_of_tau = {mu for (mu, _) in cx.cofaces(tau)}
    zero_up, two_up = [], []
    for (tau2, _) in sorted(cx.cofaces(sigma)):
        if tau2 == tau:
            continue
        common = sorted(up_of_tau & {mu for (mu, _) in cx.cofaces(tau2)})
        if not common:
            zero_up.append(cx.incidence_vector(tau2, sigma))
        else:
            two_up.extend(cx.incidence_vector(mu, tau2) for mu in common)
    faces_of_sigma = {rho for (rho, _) in cx.boundary(sigma)} if sigma.dim >= 1 else set()
    zero_down, two_down = [], []
    for (sigma2, _) in sorted(cx.boundary(tau)):
        if sigma2 == sigma:
            continue
        faces2 = {rho for (rho, _) in cx.boundary(sigma2)} if sigma2.dim >= 1 else set()
        common = sorted(faces_of_sigma & faces2)
        if not common:
            zero_down.append(cx.incidence_vector(tau, sigma2))
        else:
            two_down.extend(cx.incidence_vector(sigma2, rho) for rho in common)
    result = NeighborSets(base, zero_up, zero_down, two_up, two_down)
    cx._cache[key] = result
    return result


def _neighbor_terms(cx, nbrs: NeighborSets, get):
    """Yield (kind, prefactor, neighbor coefficient) for all four lists.

    kind is 2 for 2-neighbors, 0 for 0-neighbors. ``get`` maps an incidence
    pair to the form coefficient.
    """
    tau, sigma = nbrs.base.tau, nbrs.base.sigma
    w_tau, w_sigma = cx.weight(tau), cx.weight(sigma)
    for v in nbrs.two_up:
        yield 2, w_sigma / cx.weight(v.tau), get((v.tau, v.sigma), 0.0)
    for v in nbrs.two_down:
        yield 2, cx.weight(v.sigma) / w_tau, get((v.tau, v.sigma), 0.0)
    for v in nbrs.zero_up:
        yield 0, w_sigma * w_sigma / (w_tau * cx.weight(v.tau)), get((v.tau, v.sigma), 0.0)
    for v in nbrs.zero_down:
        yield 0, w_sigma * cx.weight(v.sigma) / (w_tau * w_tau), get((v.tau, v.sigma), 0.0)


def covariant_sq(cx: CellComplex, omega: Form, base: IncidenceVector) -> float:
    """Squared covariant derivative at a base vector (a weighted sum of squares)."""
    nbrs = neighbors(cx, base)
    x = omega.coefficients.get((base.tau, base.sigma), 0.0)
    total = 0.0
    for kind, pref, y in _neighbor_terms(cx, nbrs, omega.coefficients.get):
        diff = (x - y) if kind == 2 else (x + y)
        total += pref * diff * diff
    return total


def flat_laplacian(cx: CellComplex, omega: Form, base: IncidenceVector) -> float:
    """Flat Laplacian of |omega|^2 at a base vector.

    2-neighbor terms are differences of squares (base minus neighbor),
    0-neighbor terms are sums of squares. See flat_laplacian_parts for the
    split used by the global 2-neighbor cancellation check.
    """
    two, zero = flat_laplacian_parts(cx, omega, base)
    return two + zero


def flat_laplacian_parts(cx: CellComplex, omega: Form, base: IncidenceVector):
    """(2-neighbor portion, 0-neighbor portion) of flat_laplacian."""
    nbrs = neighbors(cx, base)
    x = omega.coefficients.get((base.tau, base.sigma), 0.0)
    two = zero = 0.0
    for kind, pref, y in _neighbor_terms(cx, nbrs, omega.coefficients.get):
        if kind == 2:
            two += pref * (x * x - y * y)
        else:
            zero += pref * (x * x + y * y)
    return two, zero


def flat_laplacian_centered(cx: CellComplex, omega: Form, base: IncidenceVector) -> float:
    """Centered flat Laplacian: every term is neighbor-squared minus base-squared.

    The symmetric prefactors make the total over all base vectors vanish at
    every weight assignment, and this is the variant that closes the
    pointwise Bochner decomposition (see ricci_definition).
    """
    nbrs = neighbors(cx, base)
    x = omega.coefficients.get((base.tau, base.sigma), 0.0)
    total = 0.0
    for _, pref, y in _neighbor_terms(cx, nbrs, omega.coefficients.get):
        total += pref * (y * y - x * x)
    return total


def laplacian_image(cx: CellComplex, omega: Form) -> Form:
    """Delta omega as a 1-form (one dense matrix application, may be cached by caller)."""
    lap = laplacian(cx, 1).matrix
    return hat_to_form(cx, 1, lap @ form_to_hat(cx, omega))


def pointwise_energy(
    cx: CellComplex, omega: Form, base: IncidenceVector, lap_image: Optional[Form] = None
) -> float:
    """Pointwise share of <Delta omega, omega> at a base vector.

    Defined as (w_sigma / w_tau) (Delta omega)[tau, sigma] * omega[tau, sigma];
    summed over all incidence vectors this reproduces the global inner
    product. Pass lap_image to reuse Delta omega across many bases.
    """
    if lap_image is None:
        lap_image = laplacian_image(cx, omega)
    key = (base.tau, base.sigma)
    ratio = cx.weight(base.sigma) / cx.weight(base.tau)
    return ratio * lap_image.coefficients.get(key, 0.0) * omega.coefficients.get(key, 0.0)


def ricci_definition(
    cx: CellComplex, omega: Form, base: IncidenceVector, lap_image: Optional[Form] = None
) -> float:
    """Ricci curvature of a 1-form at a vector, from the Bochner decomposition.

    Ric = pointwise energy - 1/2 covariant_sq + 1/2 flat_laplacian_centered.
    With the centered flat Laplacian this agrees with ricci_closed_form to
    round-off whenever the weights are constant.
    """
    return (
        pointwise_energy(cx, omega, base, lap_image)
        - 0.5 * covariant_sq(cx, omega, base)
        + 0.5 * flat_laplacian_centered(cx, omega, base)
    )


def ricci_closed_form(cx: CellComplex, omega: Form, base: IncidenceVector) -> float:
    """Ricci curvature by the closed formula.

    (2 - #0-neighbors) (w_sigma / w_tau)^2 x^2 plus cross terms against the
    sibling vector of each 2-neighbor, with coefficients that vanish when
    the weights are constant, leaving (2 - #0-neighbors) x^2.
    """
    nbrs = neighbors(cx, base)
    tau, sigma = base.tau, base.sigma
    w_tau, w_sigma = cx.weight(tau), cx.weight(sigma)
    get = omega.coefficients.get
    x = get((tau, sigma), 0.0)
    ratio = w_sigma / w_tau
    total = (2 - nbrs.zero_count()) * ratio * ratio * x * x
    for v in nbrs.two_up:
        # sibling (tau' > sigma) of the 2-up neighbor (mu > tau')
        coef = w_sigma * w_sigma / (w_tau * cx.weight(v.sigma)) - w_sigma / cx.weight(v.tau)
        total += coef * x * get((v.sigma, sigma), 0.0)
    for v in nbrs.two_down:
        # sibling (tau > sigma') of the 2-down neighbor (sigma' > rho)
        coef = w_sigma * cx.weight(v.tau) / (w_tau * w_tau) - cx.weight(v.sigma) / w_tau
        total += coef * x * get((tau, v.tau), 0.0)
    return total


def ricci_all(cx: CellComplex, omega: Form):
    """Both Ricci routes on every incidence vector.

    Returns a list of (IncidenceVector, definition value, closed-form value)
    in the complex's vector order; Delta omega is computed once.
    """
    lap_image = laplacian_image(cx, omega)
    out = []
    for v in cx.incidence_vectors():
        out.append(
            (
                v,
                ricci_definition(cx, omega, v, lap_image),
                ricci_closed_form(cx, omega, v),
            )
        )
    return out


# ----------------------------------------------------------------------
# Gauss and scalar curvature, Gauss-Bonnet
# ----------------------------------------------------------------------

def _classify(cx):
    if cx.n == 1:
        return "graph"
    if cx.n == 2:
        if not cx.is_closed_surface():
            raise NotClosedSurface("the 2-complex is not a closed surface")
        return "surface"
    raise UnsupportedComplexClass(
        f"curvature classification needs top dimension 1 or 2, got {cx.n}"
    )


def _require_constant_weights(cx):
    if not cx.weights_constant():
        raise NonConstantWeights("this operation requires constant cell weights")


def gauss_curvature_vertex(cx: CellComplex, v: CellId) -> int:
    """2 - deg(v) on a graph, 4 - deg(v) on a closed surface."""
    cls = _classify(cx)
    _require_constant_weights(cx)
    if v.dim != 0:
        raise UnsupportedDimension(f"expected a vertex, got {v!r}")
    d = cx.degree(v)
    return (2 - d) if cls == "graph" else (4 - d)


def scalar_curvature_vertex(cx: CellComplex, v: CellId) -> int:
    """Trace of the localized Ricci quadratic form over the vectors at v.

    deg(v) (4 - deg(v)) on a closed surface. On a graph the same trace
    construction gives deg(v) (2 - deg(v)).
    """
    cls = _classify(cx)
    _require_constant_weights(cx)
    if v.dim != 0:
        raise UnsupportedDimension(f"expected a vertex, got {v!r}")
    d = cx.degree(v)
    return d * (2 - d) if cls == "graph" else d * (4 - d)


def gauss_curvature_face(cx: CellComplex, f: CellId) -> int:
    """4 - deg(f) on a closed surface."""
    if _classify(cx) != "surface":
        raise UnsupportedComplexClass("face curvature needs a closed surface")
    _require_constant_weights(cx)
    if f.dim != 2:
        raise UnsupportedDimension(f"expected a 2-cell, got {f!r}")
    return 4 - cx.degree(f)


def scalar_curvature_face(cx: CellComplex, f: CellId) -> int:
    """deg(f) (4 - deg(f)) on a closed surface."""
    if _classify(cx) != "surface":
        raise UnsupportedComplexClass("face curvature needs a closed surface")
    _require_constant_weights(cx)
    if f.dim != 2:
        raise UnsupportedDimension(f"expected a 2-cell, got {f!r}")
    d = cx.degree(f)
    return d * (4 - d)


def unit_form_trace_check(cx: CellComplex, cell: CellId, omega: Form) -> float:
    """Sum of Ricci values over the vectors at a vertex or face, for a unit form.

    The form must be localized so that sum (w_sigma / w_tau)^2 omega^2 over
    the vectors at the cell equals 1 (within 1e-10), otherwise
    NormalizationViolated is raised. For any such form the sum equals the
    Gauss curvature of the cell.

    At constant weights the sum uses the definition route. On a graph with
    non-constant weights the closed form is used instead, because the
    cross-term structure is what makes the identity weight-independent
    there; surfaces with non-constant weights are rejected.
    """
    cls = _classify(cx)
    if cell.dim == 0:
        bases = [cx.incidence_vector(tau, cell) for (tau, _) in sorted(cx.cofaces(cell))]
    elif cell.dim == 2 and cls == "surface":
        bases = [cx.incidence_vector(cell, e) for (e, _) in sorted(cx.boundary(cell))]
    else:
        raise UnsupportedDimension(f"trace check needs a vertex or a face, got {cell!r}")

    get = omega.coefficients.get
    norm = math.fsum(
        (cx.weight(b.sigma) / cx.weight(b.tau)) ** 2 * get((b.tau, b.sigma), 0.0) ** 2
        for b in bases
    )
    if abs(norm - 1.0) > 1e-10:
        raise NormalizationViolated(
            f"form normalization at {cell!r} is {norm!r}, expected 1",
            detail={"cell": tuple(cell), "norm": norm},
        )
    if cx.weights_constant():
        lap_image = laplacian_image(cx, omega)
        return math.fsum(ricci_definition(cx, omega, b, lap_image) for b in bases)
    if cls == "graph":
        return math.fsum(ricci_closed_form(cx, omega, b) for b in bases)
    raise NonConstantWeights("surface trace check requires constant weights")


def gauss_bonnet(cx: CellComplex) -> CurvatureReport:
    """Exact integer Gauss-Bonnet report.

    Graphs: per-vertex 2 - deg(v), total compared with 2 * chi. Closed
    quasiconvex surfaces: per-vertex 4 - deg(v) and per-face 4 - deg(f),
    total compared with 4 * chi. All integer arithmetic.
    """
    cls = _classify(cx)
    _require_constant_weights(cx)
    if cls == "surface":
        _require_quasiconvex(cx)
    chi = cx.euler_characteristic()
    vertices = []
    for v in cx.cells(0):
        d = cx.degree(v)
        g = (2 - d) if cls == "graph" else (4 - d)
        s = d * g
        vertices.append(CellCurvature(v, d, g, s))
    total_v = sum(item.gauss for item in vertices)
    if cls == "graph":
        target = 2 * chi
        return CurvatureReport(
            complex_class=cls,
            euler_characteristic=chi,
            vertices=vertices,
            faces=None,
            gauss_total_vertices=total_v,
            gauss_total_faces=None,
            gauss_bonnet_target=target,
            gauss_bonnet_ok=(total_v == target),
        )
    faces = []
    for f in cx.cells(2):
        d = cx.degree(f)
        faces.append(CellCurvature(f, d, 4 - d, d * (4 - d)))
    total_f = sum(item.gauss for item in faces)
    target = 4 * chi
    return CurvatureReport(
        complex_class=cls,
        euler_characteristic=chi,
        vertices=vertices,
        faces=faces,
        gauss_total_vertices=total_v,
        gauss_total_faces=total_f,
        gauss_bonnet_target=target,
        gauss_bonnet_ok=(total_v + total_f == target),
    )
