"""First-order calculus: derivative, dual derivative, gradient, divergence,
integration, and the Green identity."""

import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from cellform import CellId, build, generate
from cellform.calculus import (
    CellFunction,
    CombVectorField,
    derivative_of_function,
    div,
    grad,
    green_residual,
    integrate,
    is_closed,
    is_locally_constant,
    laplacian_of_function,
    one_form_d,
    one_form_dstar,
    pairing,
    vf_inner_product,
)
from cellform.errors import MissingValue
from cellform.hodge import Form, dstar_op, form_to_hat, hat_to_form
from conftest import random_one_form, random_weighted


def single_edge(weights=None):
    return build([2, 1], [[[], []], [[(0, -1), (1, 1)]]], weights)


def function_on(cx, values_by_cell):
    return CellFunction({c: float(values_by_cell(c)) for c in cx.all_cells()})


def random_function(cx, rng, scale=1.0):
    cells = list(cx.all_cells())
    vals = rng.uniform(-scale, scale, len(cells))
    return CellFunction({c: float(x) for c, x in zip(cells, vals)})


def random_field(cx, rng, scale=1.0):
    vecs = cx.incidence_vectors()
    vals = rng.uniform(-scale, scale, len(vecs))
    return CombVectorField({v.key: float(x) for v, x in zip(vecs, vals)})


def test_derivative_is_difference():
    cx = single_edge()
    f = CellFunction({CellId(0, 0): 1.0, CellId(0, 1): 4.0, CellId(1, 0): 2.5})
    df = derivative_of_function(cx, f)
    assert df.coefficients[(CellId(1, 0), CellId(0, 0))] == 1.5
    assert df.coefficients[(CellId(1, 0), CellId(0, 1))] == -1.5


def test_locally_constant_detection():
    cx = generate("cycle", "4")
    const = function_on(cx, lambda c: 3.25)
    assert is_locally_constant(cx, const)
    assert all(v == 0.0 for v in derivative_of_function(cx, const).coefficients.values())
    bumped = dict(const.values)
    bumped[CellId(0, 2)] = 4.0
    assert not is_locally_constant(cx, CellFunction(bumped))


def test_derivative_of_function_is_closed(triangle):
    f = function_on(triangle, lambda c: (c.dim + 1.0) * (c.index + 0.5))
    assert is_closed(triangle, derivative_of_function(triangle, f))


def test_one_form_d_detects_non_closed(triangle):
    omega = random_one_form(triangle, np.random.default_rng(0))
    d_omega = one_form_d(triangle, omega)
    assert d_omega.degree == 2
    assert not is_closed(triangle, omega)


def test_one_form_d_empty_on_graphs():
    cx = generate("cycle", "3")
    omega = random_one_form(cx, np.random.default_rng(1))
    assert one_form_d(cx, omega).coefficients == {}
    assert is_closed(cx, omega)


def test_dual_derivative_unweighted_values():
    cx = single_edge()
    e, v0, v1 = CellId(1, 0), CellId(0, 0), CellId(0, 1)
    a, b = 1.25, -2.0
    out = one_form_dstar(cx, Form(1, {(e, v0): a, (e, v1): b}))
    assert out[v0] == -a
    assert out[v1] == -b
    assert out[e] == a + b


def test_dual_derivative_weighted_values():
    cx = single_edge([[2.0, 3.0], [5.0]])
    e, v0, v1 = CellId(1, 0), CellId(0, 0), CellId(0, 1)
    a, b = 1.7, -0.6
    out = one_form_dstar(cx, Form(1, {(e, v0): a, (e, v1): b}))
    assert math.isclose(out[e], 0.32, abs_tol=1e-15)
    assert math.isclose(out[v0], -(2.0 / 5.0) * a, abs_tol=1e-15)
    assert math.isclose(out[v1], -(3.0 / 5.0) * b, abs_tol=1e-15)


def test_dual_derivative_matches_operator_route():
    rng = np.random.default_rng(13)
    for base in (generate("complete", "4"), generate("cube")):
        cx = random_weighted(base, rng)
        omega = random_one_form(cx, rng)
        by_function = one_form_dstar(cx, omega)
        by_matrix = hat_to_form(cx, 0, dstar_op(cx, 1).matrix @ form_to_hat(cx, omega))
        for c in cx.all_cells():
            assert abs(by_function[c] - by_matrix.coefficients.get((c, c), 0.0)) <= 1e-12


def test_gradient_weight_ratio():
    # the difference runs from the cell to its coface, vertex value against
    # the edge value, scaled by the weight ratio 2/4
    cx = single_edge([[2.0, 2.0], [4.0]])
    f = CellFunction({CellId(0, 0): 1.0, CellId(0, 1): 13.0, CellId(1, 0): 7.0})
    x = grad(cx, f)
    assert x.get(CellId(1, 0), CellId(0, 0)) == 3.0  # (2/4) * (7 - 1)
    assert x.get(CellId(1, 0), CellId(0, 1)) == -3.0  # (2/4) * (7 - 13)


def test_integrate_counts_cells():
    k4 = generate("complete", "4")
    assert integrate(k4, function_on(k4, lambda c: 1.0)) == 10.0
    cube = generate("cube")
    assert integrate(cube, function_on(cube, lambda c: 1.0)) == 26.0
    partial = CellFunction({CellId(0, 0): 1.0})
    with pytest.raises(MissingValue):
        integrate(k4, partial)


def test_divergence_integrates_to_zero():
    rng = np.random.default_rng(17)
    for base in (generate("complete", "4"), generate("cube"), generate("genus2")):
        for cx in (base, random_weighted(base, rng)):
            x = random_field(cx, rng, scale=5.0)
            assert abs(integrate(cx, div(cx, x))) <= 1e-12


def test_laplacian_integrates_to_zero():
    rng = np.random.default_rng(19)
    for base in (generate("petersen"), generate("torus_grid", "3x3")):
        for cx in (base, random_weighted(base, rng)):
            f = random_function(cx, rng, scale=20.0)
            # weight ratios reach 100, so terms reach 2e3; a few ulps of that
            assert abs(integrate(cx, laplacian_of_function(cx, f))) <= 1e-11


def test_laplacian_is_div_grad_termwise():
    rng = np.random.default_rng(23)
    cx = random_weighted(generate("octahedron"), rng)
    f = random_function(cx, rng)
    direct = laplacian_of_function(cx, f)
    composed = div(cx, grad(cx, f))
    assert direct.values == composed.values


def test_green_identity():
    rng = np.random.default_rng(29)
    for base in (generate("complete", "4"), generate("cube")):
        for cx in (base, random_weighted(base, rng)):
            f = random_function(cx, rng)
            x = random_field(cx, rng)
            assert green_residual(cx, f, x) <= 1e-12


def test_pairing_matches_metric_inner_product():
    rng = np.random.default_rng(31)
    for base in (generate("petersen"), generate("icosahedron")):
        for cx in (base, random_weighted(base, rng)):
            f = random_function(cx, rng)
            x = random_field(cx, rng)
            lhs = pairing(cx, derivative_of_function(cx, f), x)
            rhs = vf_inner_product(cx, x, grad(cx, f))
            assert all(abs(lhs[c] - rhs[c]) <= 1e-13 for c in cx.all_cells())


def test_orientation_flip_leaves_calculus_alone():
    cx = generate("cube")
    flipped = cx.with_flipped_orientation(CellId(1, 7))
    f = function_on(cx, lambda c: c.dim * 10.0 + c.index)
    assert (
        derivative_of_function(cx, f).coefficients
        == derivative_of_function(flipped, f).coefficients
    )
    x = CombVectorField({v.key: 1.0 for v in cx.incidence_vectors()})
    assert div(cx, x).values == div(flipped, x).values


@seed(101)
@settings(max_examples=40, deadline=None)
@given(
    weights=st.lists(st.floats(min_value=0.1, max_value=10.0), min_size=10, max_size=10),
    values=st.lists(st.floats(min_value=-100.0, max_value=100.0), min_size=10, max_size=10),
)
def test_exactness_properties_hypothesis(weights, values):
    """Integral identities hold for arbitrary weights and data, not just the
    seeded draws: the Laplacian integrates to exactly zero and the Green
    residual stays at round-off scale."""
    k4 = generate("complete", "4")
    cx = k4.with_weights([weights[:4], weights[4:]])
    cells = list(cx.all_cells())
    f = CellFunction(dict(zip(cells, values)))
    scale = max(1.0, max(abs(v) for v in values))
    # weight ratios are bounded by 100 here
    assert abs(integrate(cx, laplacian_of_function(cx, f))) <= 1e-12 * scale * 100
    x = CombVectorField({v.key: values[hash(v.key) % 10] for v in cx.incidence_vectors()})
    assert green_residual(cx, f, x) <= 1e-12 * scale * scale
