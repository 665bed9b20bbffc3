"""Combinatorial differential forms, the weighted Hodge Laplacian, spectra,
and the Betti-number oracle.

================================================================
forms and bases
================================================================
A degree-d form is a local linear map on chains sending every cell tau into
the span of the codimension-d cells in its closure. The elementary forms
e[tau, sigma] (value sigma on tau, zero elsewhere) are a basis; we order it
by (dim tau, index tau, index sigma), which fixes all matrix layouts.

Coefficient conventions follow the Form type contract: for degree 1 the
stored coefficient at (tau, sigma) is the vector-component value w with
omega(tau) = sum over sigma of w * sign(tau > sigma) * sigma, so 1-form data
is attached to incidence vectors and survives re-orientation. For every
other degree the stored coefficient is the raw chain coefficient.

================================================================
inner product and orthonormalization
================================================================
Cells satisfy <sigma, sigma'> = delta * w_sigma and forms inherit
<u, v> = sum_sigma (1/w_sigma) <u(sigma), v(sigma)>, which makes the
elementary forms orthogonal with norm ||e[tau, sigma]||^2 = w_sigma / w_tau.
All public operator matrices are expressed in the orthonormalized basis
ehat = sqrt(w_tau / w_sigma) * e, where the adjoint is a plain transpose and
the Laplacian is symmetric, so standard dense symmetric eigensolvers apply.

The raw differential matrix (in the unnormalized basis) has integer entries;
d expands purely through boundary incidences and never leaves closures, so
no projection is involved. The adjoint is assembled two independent ways,
once as the transpose in the orthonormalized basis and once from the
face/coface expansion followed by the projection onto local maps; the two
must agree to machine precision and both are exposed for cross-checking.

Betti numbers are computed independently of any floating point through
integer ranks of the boundary matrices (fraction-free Bareiss elimination),
giving the oracle that the kernel dimension of the Laplacian is tested
against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .complex import CellComplex, CellId, Chain
from .errors import (
    DimensionOutOfRange,
    EigensolverFailure,
    NotClosed,
    ToleranceAmbiguous,
)


@dataclass(frozen=True)
class FormBasisElement:
    """Elementary form e[tau, sigma]: sigma in closure(tau), codimension = degree."""

    tau: CellId
    sigma: CellId

    @property
    def degree(self):
        return self.tau.dim - self.sigma.dim


@dataclass
class Form:
    """Sparse form of fixed degree; keys are (tau, sigma) CellId pairs.

    Degree-1 coefficients use the vector-component convention, all other
    degrees store raw chain coefficients (see module docstring).
    """

    degree: int
    coefficients: dict

    def norm_sup(self):
        return max((abs(v) for v in self.coefficients.values()), default=0.0)


@dataclass
class OperatorMatrix:
    """Dense matrix of an operator between form degrees, orthonormalized basis."""

    degree_from: int
    degree_to: int
    matrix: np.ndarray
    basis_from: list
    basis_to: list


@dataclass
class Spectrum:
    degree: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    zero_tolerance: float


# ----------------------------------------------------------------------
# bases and coefficient transforms
# ----------------------------------------------------------------------

def basis(cx: CellComplex, d: int):
    """Ordered basis of degree-d forms: all (tau, sigma) closure pairs of codim d."""
    if not 0 <= d <= cx.n:
        raise DimensionOutOfRange(f"form degree must lie in [0, {cx.n}], got {d}")
    key = ("form_basis", d)
    if key not in cx._cache:
        out = []
        for p in range(d, cx.n + 1):
            for t in range(cx.num_cells(p)):
                tau = CellId(p, t)
                members = sorted(c.index for c in cx.closure(tau) if c.dim == p - d)
                out.extend(FormBasisElement(tau, CellId(p - d, s)) for s in members)
        cx._cache[key] = out
    return cx._cache[key]


def _basis_index(cx, d):
    key = ("form_basis_index", d)
    if key not in cx._cache:
        cx._cache[key] = {(b.tau, b.sigma): i for i, b in enumerate(basis(cx, d))}
    return cx._cache[key]


def _norms(cx, d):
    """sqrt gram diagonal: ||e[tau, sigma]|| = sqrt(w_sigma / w_tau)."""
    key = ("form_norms", d)
    if key not in cx._cache:
        cx._cache[key] = np.array(
            [np.sqrt(cx.weight(b.sigma) / cx.weight(b.tau)) for b in basis(cx, d)]
        )
    return cx._cache[key]


def form_to_raw(cx, form: Form) -> np.ndarray:
    """Raw coefficient vector over basis(cx, form.degree)."""
    idx = _basis_index(cx, form.degree)
    vec = np.zeros(len(idx))
    for (tau, sigma), v in form.coefficients.items():
        if form.degree == 1:
            v = v * cx.incidence_sign(tau, sigma)
        vec[idx[(tau, sigma)]] = v
    return vec


def raw_to_form(cx, d, vec) -> Form:
    coeffs = {}
    for i, b in enumerate(basis(cx, d)):
        v = float(vec[i])
        if v != 0.0:
            if d == 1:
                v = v * cx.incidence_sign(b.tau, b.sigma)
            coeffs[(b.tau, b.sigma)] = v
    return Form(d, coeffs)


def form_to_hat(cx, form: Form) -> np.ndarray:
    """Coordinates in the orthonormalized basis."""
    return form_to_raw(cx, form) * _norms(cx, form.degree)


def hat_to_form(cx, d, vec) -> Form:
    return raw_to_form(cx, d, np.asarray(vec) / _norms(cx, d))


def inner_product(cx, u: Form, v: Form) -> float:
    if u.degree != v.degree:
        raise DimensionOutOfRange("inner product needs forms of equal degree")
    return float(form_to_hat(cx, u) @ form_to_hat(cx, v))


def apply_form(cx, form: Form, chain: Chain) -> Chain:
    """Evaluate the form as a linear map on a chain."""
    out = {}
    for (tau, sigma), v in form.coefficients.items():
        x = chain.coefficients.get(tau)
        if x is None:
            continue
        if form.degree == 1:
            v = v * cx.incidence_sign(tau, sigma)
        out[sigma] = out.get(sigma, 0.0) + v * x
    return Chain(out)


# ----------------------------------------------------------------------
# operators
# ----------------------------------------------------------------------

def d_matrix_raw(cx: CellComplex, d: int) -> np.ndarray:
    """Integer matrix of the differential on degree-d forms, raw basis.

    The differential of a form is (boundary compose form) minus (-1)^d
    (form compose boundary). On an elementary form this expands to

        d e[tau, sigma] = sum over faces rho of sigma: sign(sigma > rho) e[tau, rho]
                        - (-1)^d sum over cofaces mu of tau: sign(mu > tau) e[mu, sigma]

    Both sums stay inside closures, so the result is local with no
    projection, and all entries are incidence signs: the matrix is exact.
    """
    if not 0 <= d <= cx.n - 1:
        raise DimensionOutOfRange(f"d_op degree must lie in [0, {cx.n - 1}], got {d}")
    key = ("d_raw", d)
    if key in cx._cache:
        return cx._cache[key]
    dom = basis(cx, d)
    idx_cod = _basis_index(cx, d + 1)
    mat = np.zeros((len(idx_cod), len(dom)), dtype=np.int64)
    for col, b in enumerate(dom):
        if b.sigma.dim >= 1:
            for (rho, s) in cx.boundary(b.sigma):
                mat[idx_cod[(b.tau, rho)], col] += s
        for (mu, s) in cx.cofaces(b.tau):
            mat[idx_cod[(mu, b.sigma)], col] += -((-1) ** d) * s
    cx._cache[key] = mat
    return mat


def d_op(cx: CellComplex, d: int) -> OperatorMatrix:
    """Differential from degree d to d+1 in the orthonormalized basis."""
    key = ("d_op", d)
    if key not in cx._cache:
        raw = d_matrix_raw(cx, d)
        sc = _norms(cx, d + 1)
        sd = _norms(cx, d)
        mat = raw * (sc[:, None] / sd[None, :]) if raw.size else np.zeros(raw.shape)
        cx._cache[key] = OperatorMatrix(d, d + 1, mat, basis(cx, d), basis(cx, d + 1))
    return cx._cache[key]


def _dstar_projection_raw(cx, d):
    """Adjoint of the degree-(d-1) differential via the expansion route, raw basis.

    Apply the adjoint boundary on the output side, subtract (-1)^(d-1) times
    the composition with the adjoint boundary on the input side, then project
    onto local maps by dropping every (cell, non-closure-face) pair. The
    adjoint boundary carries the weight ratios: its coefficient on a coface
    step sigma -> tau'' is sign * w_sigma / w_tau''.
    """
    dom = basis(cx, d)
    idx_cod = _basis_index(cx, d - 1)
    mat = np.zeros((len(idx_cod), len(dom)))
    for col, b in enumerate(dom):
        cl = cx.closure(b.tau)
        for (tpp, s) in cx.cofaces(b.sigma):
            if tpp in cl:
                mat[idx_cod[(b.tau, tpp)], col] += s * cx.weight(b.sigma) / cx.weight(tpp)
        for (c, s) in cx.boundary(b.tau):
            if b.sigma in cx.closure(c):
                mat[idx_cod[(c, b.sigma)], col] += (
                    -((-1) ** (d - 1)) * s * cx.weight(c) / cx.weight(b.tau)
                )
    return mat


def dstar_op(cx: CellComplex, d: int, route: str = "transpose") -> OperatorMatrix:
    """Adjoint of the differential, mapping degree d to degree d-1.

    route="transpose" transposes the orthonormalized differential;
    route="projection" assembles the face/coface expansion with the explicit
    projection onto local maps. The two agree to 1e-12 on every valid
    complex and the test suite asserts it; the transpose is the default
    because it is exact by construction.
    """
    if not 1 <= d <= cx.n:
        raise DimensionOutOfRange(f"dstar_op degree must lie in [1, {cx.n}], got {d}")
    if route == "transpose":
        key = ("dstar_t", d)
        if key not in cx._cache:
            cx._cache[key] = OperatorMatrix(
                d, d - 1, d_op(cx, d - 1).matrix.T.copy(), basis(cx, d), basis(cx, d - 1)
            )
        return cx._cache[key]
    if route == "projection":
        key = ("dstar_p", d)
        if key not in cx._cache:
            raw = _dstar_projection_raw(cx, d)
            sc = _norms(cx, d - 1)
            sd = _norms(cx, d)
            mat = raw * (sc[:, None] / sd[None, :]) if raw.size else raw
            cx._cache[key] = OperatorMatrix(d, d - 1, mat, basis(cx, d), basis(cx, d - 1))
        return cx._cache[key]
    raise ValueError(f"unknown dstar route {route!r}")


def laplacian(cx: CellComplex, d: int) -> OperatorMatrix:
    """Hodge Laplacian on degree d in the orthonormalized basis (symmetric PSD)."""
    if not 0 <= d <= cx.n:
        raise DimensionOutOfRange(f"laplacian degree must lie in [0, {cx.n}], got {d}")
    key = ("laplacian", d)
    if key not in cx._cache:
        size = len(basis(cx, d))
        mat = np.zeros((size, size))
        if d + 1 <= cx.n:
            up = d_op(cx, d).matrix
            mat += up.T @ up
        if d >= 1:
            down = d_op(cx, d - 1).matrix
            mat += down @ down.T
        cx._cache[key] = OperatorMatrix(d, d, mat, basis(cx, d), basis(cx, d))
    return cx._cache[key]


def spectrum(cx: CellComplex, d: int, zero_tolerance: float = 1e-8) -> Spectrum:
    key = ("spectrum", d)
    if key not in cx._cache:
        mat = laplacian(cx, d).matrix
        try:
            vals, vecs = np.linalg.eigh(mat)
        except np.linalg.LinAlgError as exc:
            raise EigensolverFailure(f"eigh failed on degree {d}: {exc}") from exc
        cx._cache[key] = (vals, vecs)
    vals, vecs = cx._cache[key]
    return Spectrum(d, vals, vecs, zero_tolerance)


def harmonic_dimension(cx: CellComplex, d: int, zero_tolerance: float = 1e-8) -> int:
    """Dimension of the numerical kernel of the degree-d Laplacian.

    Eigenvalues with absolute value at most zero_tolerance * max(1, lambda_max)
    count as zero. If any eigenvalue lies within a factor of 10 of that
    threshold the kernel is not well separated and ToleranceAmbiguous is
    raised instead of guessing.
    """
    spec = spectrum(cx, d, zero_tolerance)
    vals = spec.eigenvalues
    if vals.size == 0:
        return 0
    lam_max = float(np.max(np.abs(vals)))
    thr = zero_tolerance * max(1.0, lam_max)
    mags = np.abs(vals)
    gray = (mags > thr / 10.0) & (mags < thr * 10.0)
    if np.any(gray):
        bad = float(vals[np.argmax(gray)])
        raise ToleranceAmbiguous(
            f"eigenvalue {bad!r} lies within a factor 10 of threshold {thr!r} on degree {d}",
            detail={"degree": d, "eigenvalue": bad, "threshold": thr},
        )
    return int(np.sum(mags <= thr))


# ----------------------------------------------------------------------
# exact Betti oracle
# ----------------------------------------------------------------------

def _integer_rank(mat) -> int:
    """Rank of an integer matrix by fraction-free Bareiss elimination.

    Exact over the integers, no rationals materialize: every intermediate
    division is known to be exact. Desk-scale matrices only.
    """
    rows = [[int(x) for x in row] for row in mat]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pivot = rows[rank][col]
        for i in range(rank + 1, nrows):
            head = rows[i][col]
            for j in range(col + 1, ncols):
                rows[i][j] = (rows[i][j] * pivot - head * rows[rank][j]) // prev
            rows[i][col] = 0
        prev = pivot
        rank += 1
        if rank == nrows:
            break
    return rank


def betti_oracle(cx: CellComplex, p: int) -> int:
    """Betti number b_p from exact integer ranks of the boundary matrices."""
    if not 0 <= p <= cx.n:
        raise DimensionOutOfRange(f"betti degree must lie in [0, {cx.n}], got {p}")
    rank_low = _integer_rank(cx.boundary_matrix(p)) if p >= 1 else 0
    rank_high = _integer_rank(cx.boundary_matrix(p + 1)) if p + 1 <= cx.n else 0
    return cx.num_cells(p) - rank_low - rank_high


# ----------------------------------------------------------------------
# Hodge decomposition
# ----------------------------------------------------------------------

def hodge_decompose(cx: CellComplex, u: Form, zero_tolerance: float = 1e-8):
    """Split a closed degree-d form as u = u0 + d(uprime), u0 harmonic.

    uprime is assembled from the nonzero part of the spectrum as the sum of
    dstar(u_i) / lambda_i over eigencomponents u_i of u. Closedness of the
    input is checked to 1e-10 relative and NotClosed raised otherwise.
    """
    d = u.degree
    uhat = form_to_hat(cx, u)
    norm_u = float(np.linalg.norm(uhat))
    if d + 1 <= cx.n and norm_u > 0.0:
        du = d_op(cx, d).matrix @ uhat
        if float(np.linalg.norm(du)) > 1e-10 * norm_u:
            raise NotClosed(
                f"input is not closed: |du| = {float(np.linalg.norm(du))!r} "
                f"exceeds 1e-10 * |u|",
                detail={"norm_du": float(np.linalg.norm(du)), "norm_u": norm_u},
            )
    spec = spectrum(cx, d, zero_tolerance)
    vals, vecs = spec.eigenvalues, spec.eigenvectors
    if vals.size == 0:
        return Form(d, {}), Form(max(d - 1, 0), {})
    lam_max = float(np.max(np.abs(vals)))
    thr = zero_tolerance * max(1.0, lam_max)
    zero_mask = np.abs(vals) <= thr
    comps = vecs.T @ uhat
    u0_hat = vecs[:, zero_mask] @ comps[zero_mask]
    if d >= 1:
        pos = ~zero_mask
        dn = d_op(cx, d - 1).matrix
        uprime_hat = dn.T @ (vecs[:, pos] @ (comps[pos] / vals[pos]))
        uprime = hat_to_form(cx, d - 1, uprime_hat)
    else:
        uprime = Form(0, {})
    return hat_to_form(cx, d, u0_hat), uprime
