"""Handlers behind the HTTP endpoints.

The CLI calls these directly when no server is configured, so they take and
return the pydantic models and raise library errors; translation to HTTP
status codes or process exit codes happens in the callers.
"""

from __future__ import annotations

import re

import numpy as np

from .. import calculus, curvature, hodge, ingest
from ..complex import CellComplex, CellId
from ..errors import BadParameter, NotQuasiconvex, ParseError
from . import models

_FORM_KEY = re.compile(r"^d(\d+):(\d+)>d(\d+):(\d+)$")


def load_complex(source: models.ComplexSource) -> CellComplex:
    has_doc = source.document is not None
    has_gen = source.generate is not None
    if has_doc == has_gen:
        raise BadParameter("provide exactly one of 'document' or 'generate'")
    if has_doc:
        cx = ingest.parse_complex_json(source.document)
    else:
        kind, _, param = source.generate.partition(":")
        cx = ingest.generate(kind, param or None)
    return ingest.apply_weight_spec(cx, source.weights, source.seed)


def parse_form_coefficients(cx: CellComplex, data) -> hodge.Form:
    """1-form from a JSON object keyed "dP:i>dQ:j" (see models docstring)."""
    coeffs = {}
    for key in sorted(data):
        m = _FORM_KEY.match(key)
        if m is None:
            raise ParseError(f"bad form key {key!r}, expected 'dP:i>dQ:j'")
        tdim, tidx, sdim, sidx = (int(g) for g in m.groups())
        if tdim != sdim + 1:
            raise ParseError(f"form key {key!r} is not a codimension-1 pair")
        tau, sigma = CellId(tdim, tidx), CellId(sdim, sidx)
        cx.incidence_sign(tau, sigma)  # raises UnknownCell when not incident
        coeffs[(tau, sigma)] = float(data[key])
    return hodge.Form(1, coeffs)


def handle_validate(req: models.ValidateRequest) -> models.ValidateReport:
    cx = load_complex(req.source)
    ok, witness = cx.is_quasiconvex()
    if req.require_quasiconvex and not ok:
        t1, t2, cells = witness
        raise NotQuasiconvex(
            f"closures of {t1!r} and {t2!r} violate quasiconvexity",
            detail={"tau1": tuple(t1), "tau2": tuple(t2), "cells": [tuple(c) for c in cells]},
        )
    return models.ValidateReport(
        cell_counts=cx.cell_counts(),
        dimension=cx.n,
        euler_characteristic=cx.euler_characteristic(),
        quasiconvex=ok,
        closed_surface=cx.is_closed_surface() if cx.n == 2 else None,
        weights_constant=cx.weights_constant(),
    )


def handle_hodge(req: models.HodgeRequest) -> models.HodgeReport:
    if not req.tolerance > 0:
        raise BadParameter(f"tolerance must be positive, got {req.tolerance!r}")
    cx = load_complex(req.source)
    degrees = []
    for d in range(cx.n + 1):
        spec = hodge.spectrum(cx, d, req.tolerance)
        vals = spec.eigenvalues
        dim = hodge.harmonic_dimension(cx, d, req.tolerance)
        betti = hodge.betti_oracle(cx, d)
        thr = req.tolerance * max(1.0, float(np.max(np.abs(vals))) if vals.size else 1.0)
        above = [float(v) for v in vals if abs(v) > thr]
        degrees.append(
            models.DegreeReport(
                degree=d,
                eigenvalues=[float(v) for v in vals],
                harmonic_dim=dim,
                betti=betti,
                min_nonzero_eigenvalue=min(above) if above else None,
                match=(dim == betti),
            )
        )
    return models.HodgeReport(
        degrees=degrees,
        match=all(r.match for r in degrees),
        tolerance=req.tolerance,
    )


def handle_curvature(req: models.CurvatureRequest) -> models.CurvatureReportModel:
    cx = load_complex(req.source)
    report = curvature.gauss_bonnet(cx)

    def rows(items):
        return [
            models.CellCurvatureModel(
                index=item.cell.index, degree=item.degree, gauss=item.gauss, scalar=item.scalar
            )
            for item in items
        ]

    form_report = None
    if req.form is not None:
        omega = parse_form_coefficients(cx, req.form)
        vectors = []
        gap = 0.0
        for v, by_def, closed in curvature.ricci_all(cx, omega):
            vectors.append(
                models.VectorRicci(
                    tau=[v.tau.dim, v.tau.index],
                    sigma=[v.sigma.dim, v.sigma.index],
                    definition_route=by_def,
                    closed_form=closed,
                )
            )
            gap = max(gap, abs(by_def - closed))
        form_report = models.FormReport(vectors=vectors, max_route_discrepancy=gap)

    return models.CurvatureReportModel(
        complex_class=report.complex_class,
        euler_characteristic=report.euler_characteristic,
        vertices=rows(report.vertices),
        faces=rows(report.faces) if report.faces is not None else None,
        gauss_total_vertices=report.gauss_total_vertices,
        gauss_total_faces=report.gauss_total_faces,
        gauss_bonnet_target=report.gauss_bonnet_target,
        gauss_bonnet_ok=report.gauss_bonnet_ok,
        form=form_report,
    )


def handle_check(req: models.CheckRequest) -> models.CheckReport:
    """Randomized self-checks of the first-order calculus and the operators.

    Runs the stated number of trials with functions, fields, and forms drawn
    from [-1, 1) and reports the worst residual per identity:

      d_squared           max entry of the composite differential
      adjointness         <du, v> against <u, dstar v> (projection route)
      green               integral of <grad f, X> minus integral of f div X
      integral_div        integral of div X
      integral_laplacian  integral of the Laplacian of f
      gradient_pairing    df(X) against <X, grad f>, per cell
    """
    if req.trials < 1:
        raise BadParameter(f"trials must be >= 1, got {req.trials}")
    if req.tolerance < 0:
        raise BadParameter(f"tolerance must be >= 0, got {req.tolerance!r}")
    cx = load_complex(req.source)
    rng = np.random.default_rng(req.source.seed)

    d_squared = 0.0
    for k in range(cx.n - 1):
        prod = hodge.d_op(cx, k + 1).matrix @ hodge.d_op(cx, k).matrix
        if prod.size:
            d_squared = max(d_squared, float(np.max(np.abs(prod))))

    adjointness = green = integral_div = integral_laplacian = gradient_pairing = 0.0
    cells = list(cx.all_cells())
    pairs = [(v.tau, v.sigma) for v in cx.incidence_vectors()]
    for _ in range(req.trials):
        for k in range(1, cx.n + 1):
            u = rng.uniform(-1.0, 1.0, len(hodge.basis(cx, k - 1)))
            v = rng.uniform(-1.0, 1.0, len(hodge.basis(cx, k)))
            du_v = float((hodge.d_op(cx, k - 1).matrix @ u) @ v)
            u_dsv = float(u @ (hodge.dstar_op(cx, k, route="projection").matrix @ v))
            adjointness = max(adjointness, abs(du_v - u_dsv))

        f = calculus.CellFunction(dict(zip(cells, rng.uniform(-1.0, 1.0, len(cells)))))
        x = calculus.CombVectorField(dict(zip(pairs, rng.uniform(-1.0, 1.0, len(pairs)))))
        green = max(green, calculus.green_residual(cx, f, x))
        integral_div = max(integral_div, abs(calculus.integrate(cx, calculus.div(cx, x))))
        integral_laplacian = max(
            integral_laplacian,
            abs(calculus.integrate(cx, calculus.laplacian_of_function(cx, f))),
        )
        lhs = calculus.pairing(cx, calculus.derivative_of_function(cx, f), x)
        rhs = calculus.vf_inner_product(cx, x, calculus.grad(cx, f))
        gradient_pairing = max(
            gradient_pairing,
            max(abs(lhs.values[c] - rhs.values[c]) for c in cells),
        )

    residuals = {
        "adjointness": adjointness,
        "d_squared": d_squared,
        "gradient_pairing": gradient_pairing,
        "green": green,
        "integral_div": integral_div,
        "integral_laplacian": integral_laplacian,
    }
    return models.CheckReport(
        trials=req.trials,
        threshold=req.tolerance,
        residuals=residuals,
        passed=all(r <= req.tolerance for r in residuals.values()),
    )


def handle_export(req: models.ExportRequest) -> models.ExportReport:
    cx = load_complex(req.source)
    return models.ExportReport(document=ingest.serialize_complex(cx, name=req.name))
