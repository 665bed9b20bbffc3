"""Parsers, the JSON document format, generators, and weight specs."""

import pytest

from cellform import (
    CellId,
    gauss_bonnet,
    generate,
    parse_complex_json,
    parse_edge_list,
    parse_off,
    serialize_complex,
)
from cellform.errors import (
    BadParameter,
    BadSign,
    DuplicateEdge,
    NonPositiveWeight,
    ParseError,
    SelfLoop,
    ValidationError,
)
from cellform.ingest import apply_weight_spec

CYCLE3_DOC = (
    '{"cells":[[{"boundary":[]},{"boundary":[]},{"boundary":[]}],'
    '[{"boundary":[[0,-1],[1,1]]},{"boundary":[[1,-1],[2,1]]},'
    '{"boundary":[[2,-1],[0,1]]}]],"dimension":1,"name":"c3",'
    '"schema_version":"1","weights":[[1.0,1.0,1.0],[1.0,1.0,1.0]]}'
)


# ----------------------------------------------------------------------
# JSON documents
# ----------------------------------------------------------------------

def test_serialize_golden():
    assert serialize_complex(generate("cycle", "3"), name="c3") == CYCLE3_DOC


def test_round_trip_is_stable():
    for kind, param in [("complete", "4"), ("cube", None), ("torus_grid", "3x3")]:
        cx = generate(kind, param)
        cx = apply_weight_spec(cx, "random", seed=7)
        doc = serialize_complex(cx)
        again = serialize_complex(parse_complex_json(doc))
        assert doc == again


def test_parse_rejects_malformed_json():
    with pytest.raises(ParseError) as exc:
        parse_complex_json('{"cells": [')
    assert "line" in str(exc.value.detail)


def test_parse_rejects_wrong_schema():
    doc = CYCLE3_DOC.replace('"schema_version":"1"', '"schema_version":"2"')
    with pytest.raises(ParseError):
        parse_complex_json(doc)
    with pytest.raises(ParseError):
        parse_complex_json('"just a string"')
    with pytest.raises(ParseError):
        parse_complex_json(CYCLE3_DOC.replace('"dimension":1', '"dimension":2'))
    with pytest.raises(ParseError):
        parse_complex_json(CYCLE3_DOC.replace("[0,-1]", "[0,true]"))
    with pytest.raises(ParseError):
        parse_complex_json(CYCLE3_DOC.replace("[[1.0,1.0,1.0],[1.0,1.0,1.0]]", '"x"'))


def test_parse_propagates_build_errors():
    with pytest.raises(BadSign):
        parse_complex_json(CYCLE3_DOC.replace("[0,-1]", "[0,-2]"))
    with pytest.raises(ValidationError):
        parse_complex_json(CYCLE3_DOC.replace("[1.0,1.0,1.0],[1.0,1.0,1.0]", "[1.0],[1.0]"))
    with pytest.raises(NonPositiveWeight):
        parse_complex_json(CYCLE3_DOC.replace("[1.0,1.0,1.0],", "[1.0,0.0,1.0],"))


# ----------------------------------------------------------------------
# edge lists
# ----------------------------------------------------------------------

def test_edge_list_basic():
    text = "# a comment\na b\nb c\n\nc a  # inline comment\n"
    cx = parse_edge_list(text)
    assert cx.cell_counts() == [3, 3]
    ## vertex indices follow first occurrence: a=0, b=1, c=2
    assert cx.boundary(CellId(1, 0)) == ((CellId(0, 0), -1), (CellId(0, 1), 1))
    assert cx.boundary(CellId(1, 2)) == ((CellId(0, 2), -1), (CellId(0, 0), 1))


def test_edge_list_rejects_self_loops_and_duplicates():
    with pytest.raises(SelfLoop):
        parse_edge_list("a a\n")
    with pytest.raises(DuplicateEdge) as exc:
        parse_edge_list("a b\nc d\nb a\n")
    assert exc.value.detail["first_line"] == 1
    with pytest.raises(ParseError):
        parse_edge_list("a\n")
    with pytest.raises(ParseError):
        parse_edge_list("a b c\n")


# ----------------------------------------------------------------------
# OFF meshes
# ----------------------------------------------------------------------

OFF_CUBE = """OFF
8 6 12
-1 -1 -1
1 -1 -1
-1 1 -1
1 1 -1
-1 -1 1
1 -1 1
-1 1 1
1 1 1
4 0 1 3 2
4 4 6 7 5
4 0 4 5 1
4 2 3 7 6
4 0 2 6 4
4 1 5 7 3
"""


def test_off_cube():
    result = parse_off(OFF_CUBE)
    cx = result.complex
    assert cx.cell_counts() == [8, 12, 6]
    assert cx.is_closed_surface()
    assert len(result.coordinates) == 8
    assert result.nonmanifold_edges == []
    report = gauss_bonnet(cx)
    assert report.gauss_total_vertices + report.gauss_total_faces == 8


def test_off_open_triangle():
    result = parse_off("OFF\n3 1 3\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n")
    assert result.complex.cell_counts() == [3, 3, 1]
    assert not result.complex.is_closed_surface()


def test_off_nonmanifold_flag():
    text = "OFF\n5 3 7\n" + "0 0 0\n" * 5 + "3 0 1 2\n3 0 1 3\n3 0 1 4\n"
    result = parse_off(text)
    assert result.nonmanifold_edges == [(0, 1)]


def test_off_rejects_malformed_input():
    with pytest.raises(ParseError):
        parse_off("PLY\n1 0 0\n0 0 0\n")
    with pytest.raises(ParseError):
        parse_off("OFF\n1 0\n0 0 0\n")
    with pytest.raises(ParseError):
        parse_off("OFF\n3 1 3\n0 0 0\n1 0 0\n0 1 0\n3 0 1 9\n")
    with pytest.raises(ParseError):
        parse_off("OFF\n3 1 3\n0 0 0\n1 0 0\n0 1 0\n3 0 1 1\n")
    with pytest.raises(ParseError):
        parse_off("OFF\n3 1 3\n0 0\n1 0 0\n0 1 0\n3 0 1 2\n")


# ----------------------------------------------------------------------
# generators
# ----------------------------------------------------------------------

def test_generator_counts():
    assert generate("path", "1").cell_counts() == [2, 1]
    assert generate("cycle", "5").cell_counts() == [5, 5]
    assert generate("complete", "5").cell_counts() == [5, 10]
    assert generate("star", "7").cell_counts() == [8, 7]
    assert generate("petersen").cell_counts() == [10, 15]
    assert generate("tetrahedron").cell_counts() == [4, 6, 4]
    assert generate("cube").cell_counts() == [8, 12, 6]
    assert generate("octahedron").cell_counts() == [6, 12, 8]
    assert generate("icosahedron").cell_counts() == [12, 30, 20]
    assert generate("dodecahedron").cell_counts() == [20, 30, 12]
    assert generate("torus_grid", "4x3").cell_counts() == [12, 24, 12]
    assert generate("genus2").cell_counts() == [14, 32, 16]


def test_generated_surfaces_are_closed_and_quasiconvex():
    for kind, param in [
        ("tetrahedron", None),
        ("cube", None),
        ("octahedron", None),
        ("icosahedron", None),
        ("dodecahedron", None),
        ("torus_grid", "3x3"),
        ("genus2", None),
    ]:
        cx = generate(kind, param)
        assert cx.is_closed_surface(), kind
        ok, witness = cx.is_quasiconvex()
        assert ok, (kind, witness)


def test_platonic_degrees():
    icosa = generate("icosahedron")
    assert all(icosa.degree(CellId(0, i)) == 5 for i in range(12))
    assert all(icosa.degree(CellId(2, i)) == 3 for i in range(20))
    dodeca = generate("dodecahedron")
    assert all(dodeca.degree(CellId(0, i)) == 3 for i in range(20))
    assert all(dodeca.degree(CellId(2, i)) == 5 for i in range(12))


def test_genus2_euler_characteristic():
    assert generate("genus2").euler_characteristic() == -2


def test_generator_rejects_bad_parameters():
    with pytest.raises(BadParameter):
        generate("torus_grid", "2x2")
    with pytest.raises(BadParameter):
        generate("torus_grid", "3")
    with pytest.raises(BadParameter):
        generate("cycle", "2")
    with pytest.raises(BadParameter):
        generate("cycle")
    with pytest.raises(BadParameter):
        generate("mystery")
    with pytest.raises(BadParameter):
        generate("cube", "3")


# ----------------------------------------------------------------------
# weight specs
# ----------------------------------------------------------------------

def test_weight_specs():
    cx = generate("cycle", "4")
    assert apply_weight_spec(cx, None) is cx
    const = apply_weight_spec(cx, "const:2.5")
    assert all(const.weight(c) == 2.5 for c in const.all_cells())
    r1 = apply_weight_spec(cx, "random", seed=9)
    r2 = apply_weight_spec(cx, "random", seed=9)
    r3 = apply_weight_spec(cx, "random", seed=10)
    assert [r1.weight(c) for c in r1.all_cells()] == [r2.weight(c) for c in r2.all_cells()]
    assert [r1.weight(c) for c in r1.all_cells()] != [r3.weight(c) for c in r3.all_cells()]
    assert all(0.1 <= r1.weight(c) < 10.0 for c in r1.all_cells())
    explicit = apply_weight_spec(cx, [[1, 2, 3, 4], [5, 6, 7, 8]])
    assert explicit.weight(CellId(1, 3)) == 8.0


def test_weight_spec_errors():
    cx = generate("cycle", "4")
    with pytest.raises(BadParameter):
        apply_weight_spec(cx, "const:abc")
    with pytest.raises(BadParameter):
        apply_weight_spec(cx, "gaussian")
    with pytest.raises(NonPositiveWeight):
        apply_weight_spec(cx, "const:-1")
