"""Shared fixtures and small builders used across the test modules."""

import numpy as np
import pytest

from cellform import build, generate
from cellform.hodge import Form, basis
from cellform.ingest import _surface_from_faces


def make_triangle():
    """Filled triangle: 3 vertices, 3 edges, 1 face."""
    return build(
        [3, 3, 1],
        [
            [[], [], []],
            [[(0, -1), (1, 1)], [(1, -1), (2, 1)], [(0, -1), (2, 1)]],
            [[(0, 1), (1, 1), (2, -1)]],
        ],
    )


def make_cylinder():
    """Two quadrilaterals glued along two opposite edge pairs.

    Faces 0 and 1 share edges 0 and 2, so their closures meet in more than
    a single edge and the complex is not quasiconvex.
    """
    edges = [
        [(0, -1), (1, 1)],  # e0: 0-1
        [(1, -1), (2, 1)],  # e1: 1-2
        [(2, -1), (3, 1)],  # e2: 2-3
        [(0, -1), (3, 1)],  # e3: 0-3
        [(0, -1), (2, 1)],  # e4: 0-2
        [(1, -1), (3, 1)],  # e5: 1-3
    ]
    faces = [
        [(0, 1), (1, 1), (2, 1), (3, -1)],
        [(0, -1), (4, 1), (2, 1), (5, -1)],
    ]
    return build([4, 6, 2], [[[] for _ in range(4)], edges, faces])


def make_pillow():
    """Two triangles glued along all three edges: a closed surface (sphere)
    that is not quasiconvex (the faces share three edges)."""
    return _surface_from_faces(3, [(0, 1, 2), (0, 1, 2)])


def make_hexagonal_prism():
    top = tuple(range(6))
    bottom = tuple(range(11, 5, -1))
    sides = [(i, (i + 1) % 6, 6 + (i + 1) % 6, 6 + i) for i in range(6)]
    return _surface_from_faces(12, [top, bottom] + sides)


def make_two_spheres_joined():
    """Two tetrahedron surfaces sharing a single vertex; the vertex link is
    two disjoint cycles, so this is not a closed surface."""
    first = [(0, 1, 2), (0, 3, 1), (1, 3, 2), (0, 2, 3)]
    second = [tuple(0 if v == 0 else v + 3 for v in f) for f in first]
    return _surface_from_faces(7, first + second)


def random_one_form(cx, rng, scale=2.0):
    vecs = cx.incidence_vectors()
    values = rng.uniform(-scale, scale, len(vecs))
    return Form(1, {v.key: float(x) for v, x in zip(vecs, values)})


def random_form(cx, degree, rng, scale=2.0):
    elems = basis(cx, degree)
    values = rng.uniform(-scale, scale, len(elems))
    return Form(degree, {(b.tau, b.sigma): float(x) for b, x in zip(elems, values)})


def unit_star_form(cx, cell, rng):
    """Random 1-form supported on the vectors at a vertex or face, scaled so
    the weighted square sum used by the trace check equals 1."""
    if cell.dim == 0:
        vecs = [cx.incidence_vector(t, cell) for (t, _) in sorted(cx.cofaces(cell))]
    else:
        vecs = [cx.incidence_vector(cell, e) for (e, _) in sorted(cx.boundary(cell))]
    values = rng.uniform(-1.0, 1.0, len(vecs))
    while not np.any(values):
        values = rng.uniform(-1.0, 1.0, len(vecs))
    total = sum(
        (cx.weight(v.sigma) / cx.weight(v.tau)) ** 2 * float(x) ** 2
        for v, x in zip(vecs, values)
    )
    values = values / np.sqrt(total)
    return Form(1, {v.key: float(x) for v, x in zip(vecs, values)})


def random_weighted(cx, rng):
    return cx.with_weights(
        [list(rng.uniform(0.1, 10.0, cx.num_cells(p))) for p in range(cx.n + 1)]
    )


@pytest.fixture
def triangle():
    return make_triangle()


@pytest.fixture
def cylinder():
    return make_cylinder()


@pytest.fixture
def cube():
    return generate("cube")


@pytest.fixture
def k4():
    return generate("complete", "4")
