"""First-order calculus: functions, 1-forms, vector fields, grad, div,
integrals, and Green's theorem.

Functions (0-forms) are total maps cell -> value over every cell of every
dimension. 1-forms and vector fields carry sparse coefficients on incidence
vectors (tau > sigma), orientation-independent by convention.

Sign conventions match the operator modules exactly: the divergence has the
minus sign on the coface sum, which makes Green's theorem hold in the form

    integral <grad(f), X> = integral f * div(X)

with no sign flip, unlike the smooth-manifold convention where a minus
appears. The dual derivative of a 1-form is the true adjoint of d on
functions for every weight assignment: its face-sum term carries the weight
ratio w_rho / w_sigma (see one_form_dstar). With that reading,
dual-derivative-of-df and div(grad f) are the same expression termwise.

Each incidence pair feeds one term t into the cell below and -t into the
cell above, so the integral of div X and of the Laplacian of f cancel
pairwise in exact arithmetic. Per-cell values are compensated sums
(math.fsum) and therefore correctly rounded, but rounded per-cell values no
longer cancel exactly across cells; the integrals land within a few ulps of
zero rather than at exact zero, orders of magnitude inside the 1e-12 budget
the identity checks use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complex import CellComplex, CellId
from .errors import DimensionOutOfRange, MissingValue
from .hodge import Form, form_to_raw, raw_to_form, d_matrix_raw


@dataclass
class CellFunction:
    """Total real-valued function on all cells."""

    values: dict

    def __getitem__(self, c):
        return self.values[c]


@dataclass
class CombVectorField:
    """Sparse coefficients X on incidence vectors (tau > sigma)."""

    coefficients: dict

    def get(self, tau, sigma):
        return self.coefficients.get((tau, sigma), 0.0)


def _check_total(cx, f: CellFunction):
    for c in cx.all_cells():
        if c not in f.values:
            raise MissingValue(f"function has no value on cell {c!r}")


def _pairs(cx):
    """Deterministic iteration over all incidence pairs (tau, sigma)."""
    for p in range(1, cx.n + 1):
        for tau in cx.cells(p):
            for (sigma, _) in cx.boundary(tau):
                yield tau, sigma


def derivative_of_function(cx: CellComplex, f: CellFunction) -> Form:
    """df as a 1-form: coefficient f(tau) - f(sigma) on every incidence vector."""
    _check_total(cx, f)
    coeffs = {}
    for tau, sigma in _pairs(cx):
        coeffs[(tau, sigma)] = f.values[tau] - f.values[sigma]
    return Form(1, coeffs)


def is_locally_constant(cx: CellComplex, f: CellFunction) -> bool:
    """True iff df vanishes identically (exact comparison).

    Equivalent to f being constant on every connected component of the face
    incidence graph; the test suite checks that equivalence independently.
    """
    _check_total(cx, f)
    return all(f.values[tau] - f.values[sigma] == 0.0 for tau, sigma in _pairs(cx))


def one_form_d(cx: CellComplex, omega: Form) -> Form:
    """Differential of a 1-form as a degree-2 form (raw coefficients).

    The coefficient on a codimension-2 pair (mu, sigma) accumulates
    sign-weighted sums of omega over the two-step descents mu > tau > sigma;
    when the complex has the diamond property this is the alternating sum
    over the unordered pair of intermediate cells.
    """
    if omega.degree != 1:
        raise DimensionOutOfRange(f"one_form_d expects degree 1, got {omega.degree}")
    if cx.n < 2:
        return Form(2, {})
    vec = form_to_raw(cx, omega)
    return raw_to_form(cx, 2, d_matrix_raw(cx, 1) @ vec)


def is_closed(cx: CellComplex, omega: Form, tol: float = 1e-12) -> bool:
    """Whether d(omega) vanishes, to tol relative to the coefficient scale.

    Exact zero is not attainable in floating point for differences such as
    df, so closedness is judged against tol * max(1, sup |omega|).
    """
    scale = max(1.0, omega.norm_sup())
    return one_form_d(cx, omega).norm_sup() <= tol * scale


def one_form_dstar(cx: CellComplex, omega: Form) -> CellFunction:
    """Dual derivative of a 1-form, the adjoint of d on functions.

        (dstar omega)(sigma) = - sum over tau > sigma: (w_sigma / w_tau) omega[tau, sigma]
                               + sum over rho < sigma: (w_rho / w_sigma) omega[sigma, rho]

    The face-sum weight is w_rho / w_sigma: this is the unique reading under
    which <dstar omega, f> = <omega, df> holds for every weight assignment,
    and it matches the degree-1 adjoint operator matrix entrywise (asserted
    in tests at random weights).
    """
    if omega.degree != 1:
        raise DimensionOutOfRange(f"one_form_dstar expects degree 1, got {omega.degree}")
    get = omega.coefficients.get
    values = {c: [] for c in cx.all_cells()}
    for tau, sigma in _pairs(cx):
        w = get((tau, sigma), 0.0)
        values[sigma].append(-(cx.weight(sigma) / cx.weight(tau)) * w)
        values[tau].append((cx.weight(sigma) / cx.weight(tau)) * w)
    return CellFunction({c: math.fsum(terms) for c, terms in values.items()})


def pairing(cx: CellComplex, omega: Form, x: CombVectorField) -> CellFunction:
    """omega(X): at each cell, the sum of omega * X over its coface vectors."""
    if omega.degree != 1:
        raise DimensionOutOfRange(f"pairing expects a 1-form, got degree {omega.degree}")
    values = {c: 0.0 for c in cx.all_cells()}
    for tau, sigma in _pairs(cx):
        values[sigma] += omega.coefficients.get((tau, sigma), 0.0) * x.get(tau, sigma)
    return CellFunction(values)


def grad(cx: CellComplex, f: CellFunction) -> CombVectorField:
    """Gradient field: (w_sigma / w_tau) (f(tau) - f(sigma)) per incidence vector."""
    _check_total(cx, f)
    coeffs = {}
    for tau, sigma in _pairs(cx):
        coeffs[(tau, sigma)] = (cx.weight(sigma) / cx.weight(tau)) * (
            f.values[tau] - f.values[sigma]
        )
    return CombVectorField(coeffs)


def div(cx: CellComplex, x: CombVectorField) -> CellFunction:
    """Divergence: minus the coface sum plus the face sum of X at each cell."""
    values = {c: [] for c in cx.all_cells()}
    for tau, sigma in _pairs(cx):
        v = x.get(tau, sigma)
        values[sigma].append(-v)
        values[tau].append(v)
    return CellFunction({c: math.fsum(terms) for c, terms in values.items()})


def vf_inner_product(cx: CellComplex, x: CombVectorField, y: CombVectorField) -> CellFunction:
    """Pointwise field inner product: sum of (w_tau / w_sigma) X Y over cofaces."""
    values = {c: 0.0 for c in cx.all_cells()}
    for tau, sigma in _pairs(cx):
        values[sigma] += (cx.weight(tau) / cx.weight(sigma)) * x.get(tau, sigma) * y.get(
            tau, sigma
        )
    return CellFunction(values)


def integrate(cx: CellComplex, f: CellFunction) -> float:
    """Sum of f over every cell of every dimension (compensated summation)."""
    _check_total(cx, f)
    return math.fsum(f.values[c] for c in cx.all_cells())


def green_residual(cx: CellComplex, f: CellFunction, x: CombVectorField) -> float:
    """| integral <grad f, X> - integral f div(X) |, which is zero up to round-off."""
    lhs = integrate(cx, vf_inner_product(cx, grad(cx, f), x))
    rhs = integrate(cx, CellFunction({c: f.values[c] * v for c, v in div(cx, x).values.items()}))
    return abs(lhs - rhs)


def laplacian_of_function(cx: CellComplex, f: CellFunction) -> CellFunction:
    """Laplacian of a function, the dual derivative of its derivative.

    Termwise identical to div(grad(f)) at every weight assignment: each
    incidence pair contributes the same float t = (w_sigma / w_tau)
    (f(tau) - f(sigma)) with opposite signs at its two cells, so the result
    integrates to zero up to the rounding of the per-cell sums.
    """
    _check_total(cx, f)
    values = {c: [] for c in cx.all_cells()}
    for tau, sigma in _pairs(cx):
        t = (cx.weight(sigma) / cx.weight(tau)) * (f.values[tau] - f.values[sigma])
        values[sigma].append(-t)
        values[tau].append(t)
    return CellFunction({c: math.fsum(terms) for c, terms in values.items()})
