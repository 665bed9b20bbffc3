"""Complex construction, validation, and combinatorial queries."""

from fractions import Fraction

import numpy as np
import pytest

from cellform import CellId, Chain, build, generate
from cellform.errors import (
    BadSign,
    BoundaryNotSquareZero,
    DanglingFace,
    DimensionOutOfRange,
    NonPositiveWeight,
    UnknownCell,
    UnsupportedDimension,
    ValidationError,
)
from conftest import make_cylinder, make_two_spheres_joined


def fraction_rank(mat):
    """Row reduction over exact rationals, the oracle for integer ranks."""
    rows = [[Fraction(int(x)) for x in row] for row in mat]
    rank = 0
    for col in range(len(rows[0]) if rows else 0):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        rows[rank] = [x / rows[rank][col] for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def test_triangle_structure(triangle):
    assert triangle.n == 2
    assert triangle.cell_counts() == [3, 3, 1]
    assert triangle.euler_characteristic() == 1
    face = CellId(2, 0)
    assert [(e.index, s) for (e, s) in triangle.boundary(face)] == [(0, 1), (1, 1), (2, -1)]
    edge = CellId(1, 0)
    assert [(f.index, s) for (f, s) in triangle.cofaces(edge)] == [(0, 1)]
    assert triangle.incidence_sign(face, CellId(1, 2)) == -1


def test_boundary_matrices_square_zero(triangle):
    d1 = triangle.boundary_matrix(1)
    d2 = triangle.boundary_matrix(2)
    assert d1.dtype == np.int64 and d2.dtype == np.int64
    assert np.array_equal(d1 @ d2, np.zeros((3, 1), dtype=np.int64))


def test_tetrahedron_boundary_by_hand():
    cx = generate("tetrahedron")
    d1, d2 = cx.boundary_matrix(1), cx.boundary_matrix(2)
    assert d1.shape == (4, 6) and d2.shape == (6, 4)
    # every column of the edge boundary is one -1 and one +1
    assert np.all(np.sort(d1, axis=0)[:2].sum(axis=0) == -1)
    assert np.all(d1.sum(axis=0) == 0)
    assert not np.any(d1 @ d2)


def test_cycle_rank_matches_fraction_oracle():
    cx = generate("cycle", "3")
    d1 = cx.boundary_matrix(1)
    assert fraction_rank(d1) == 2


def test_boundary_matrix_range():
    cx = generate("cycle", "4")
    with pytest.raises(DimensionOutOfRange):
        cx.boundary_matrix(0)
    with pytest.raises(DimensionOutOfRange):
        cx.boundary_matrix(2)


def test_build_rejects_bad_sign():
    with pytest.raises(BadSign):
        build([2, 1], [[[], []], [[(0, -1), (1, 2)]]])


def test_build_rejects_dangling_face():
    with pytest.raises(DanglingFace):
        build([2, 1], [[[], []], [[(0, -1), (5, 1)]]])
    with pytest.raises(DanglingFace):
        build([1], [[[(0, 1)]]])


def test_build_rejects_nonzero_composite():
    # two parallel edges both oriented 0 -> 1, "face" glued along both:
    # the composite boundary is 2*(v1 - v0)
    with pytest.raises(BoundaryNotSquareZero) as err:
        build(
            [2, 2, 1],
            [[[], []], [[(0, -1), (1, 1)], [(0, -1), (1, 1)]], [[(0, 1), (1, 1)]]],
        )
    assert err.value.detail["p"] == 1


def test_build_rejects_repeated_face():
    with pytest.raises(BoundaryNotSquareZero):
        build([2, 1], [[[], []], [[(0, -1), (0, 1)]]])


def test_build_rejects_single_face():
    with pytest.raises(ValidationError):
        build([2, 1], [[[], []], [[(0, 1)]]])


def test_build_rejects_bad_weights():
    lists = [[[], []], [[(0, -1), (1, 1)]]]
    for bad in (0.0, -1.0, float("nan"), float("inf")):
        with pytest.raises(NonPositiveWeight):
            build([2, 1], lists, [[1.0, 1.0], [bad]])
    with pytest.raises(ValidationError):
        build([2, 1], lists, [[1.0], [1.0]])


def test_unknown_cell():
    cx = generate("path", "1")
    with pytest.raises(UnknownCell):
        cx.weight(CellId(0, 99))
    with pytest.raises(UnknownCell):
        cx.boundary(CellId(2, 0))


def test_closure(triangle):
    face = CellId(2, 0)
    assert len(triangle.closure(face)) == 7
    edge = CellId(1, 1)
    assert triangle.closure(edge) == {edge, CellId(0, 1), CellId(0, 2)}


def test_degree():
    cube = generate("cube")
    assert all(cube.degree(v) == 3 for v in cube.cells(0))
    assert all(cube.degree(f) == 4 for f in cube.cells(2))
    with pytest.raises(UnsupportedDimension):
        cube.degree(CellId(1, 0))
    k4 = generate("complete", "4")
    assert [k4.degree(v) for v in k4.cells(0)] == [3, 3, 3, 3]


def test_quasiconvexity():
    ok, witness = generate("cube").is_quasiconvex()
    assert ok and witness is None
    ok, witness = generate("torus_grid", "4x4").is_quasiconvex()
    assert ok
    ok, witness = make_cylinder().is_quasiconvex()
    assert not ok
    t1, t2, shared = witness
    assert {t1.index, t2.index} == {0, 1}
    assert [c.index for c in shared] == [0, 2]


def test_closed_surface_detection():
    assert generate("cube").is_closed_surface()
    assert generate("torus_grid", "3x3").is_closed_surface()
    assert generate("genus2").is_closed_surface()
    assert not make_cylinder().is_closed_surface()
    assert not generate("cycle", "5").is_closed_surface()
    # two spheres sharing a vertex: edge condition holds, link at the shared
    # vertex is two disjoint cycles
    joined = make_two_spheres_joined()
    assert all(len(joined.cofaces(e)) == 2 for e in joined.cells(1))
    assert not joined.is_closed_surface()


def test_euler_characteristic():
    assert generate("complete", "4").euler_characteristic() == -2
    assert generate("cube").euler_characteristic() == 2
    assert generate("genus2").euler_characteristic() == -2


def test_boundary_of_chain(triangle):
    chain = Chain({CellId(2, 0): 2.0})
    out = triangle.boundary_of_chain(chain)
    assert out.coefficients == {CellId(1, 0): 2.0, CellId(1, 1): 2.0, CellId(1, 2): -2.0}
    # boundary of boundary vanishes
    again = triangle.boundary_of_chain(out)
    assert all(abs(x) == 0.0 for x in again.coefficients.values())


def test_relabeled_preserves_invariants():
    cube = generate("cube")
    rng = np.random.default_rng(4)
    perms = [list(rng.permutation(cube.num_cells(p))) for p in range(3)]
    moved = cube.relabeled(perms)
    assert moved.euler_characteristic() == 2
    assert moved.is_closed_surface()
    assert moved.is_quasiconvex()[0]
    assert sorted(moved.weight(c) for c in moved.all_cells()) == sorted(
        cube.weight(c) for c in cube.all_cells()
    )


def test_flip_orientation_keeps_validity():
    cube = generate("cube")
    e = CellId(1, 5)
    flipped = cube.with_flipped_orientation(e)
    assert not np.any(flipped.boundary_matrix(1) @ flipped.boundary_matrix(2))
    for (v, s) in cube.boundary(e):
        assert flipped.incidence_sign(e, v) == -s
    for (f, s) in cube.cofaces(e):
        assert flipped.incidence_sign(f, e) == -s


def test_scaled_weights():
    cx = generate("cycle", "3").with_scaled_weights(7.0)
    assert cx.weights_constant()
    assert cx.weight(CellId(0, 0)) == 7.0
