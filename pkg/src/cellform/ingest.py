"""Input formats and built-in generators.

Three input formats are supported:

  * the native JSON document (see serialize_complex for the exact shape),
  * plain edge lists (one edge per line, "tail head", '#' comments),
  * OFF polygon meshes (header, counts, coordinates, faces).

Edge lists produce 1-dimensional complexes with the edge oriented tail to
head. OFF faces orient each traversal step low-to-high vertex index, which
keeps the square-zero condition exact regardless of whether the mesh is
coherently oriented; edges borne by more than two faces are reported as
flags, not errors, since the complex itself is still valid.

The generators cover the graph and surface families used by the curvature
checks: paths, cycles, complete graphs, stars, the Petersen graph, the five
platonic surfaces, square grid tori, and a genus-2 surface glued from two
punctured tori.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .complex import CellComplex, build
from .errors import BadParameter, DuplicateEdge, ParseError, SelfLoop


# ----------------------------------------------------------------------
# native JSON document
# ----------------------------------------------------------------------

def serialize_complex(cx: CellComplex, name=None) -> str:
    """Canonical JSON document for a complex.

    Keys are sorted and separators are compact, so equal complexes
    serialize to byte-identical strings. Shape:

        {"schema_version": "1",
         "dimension": n,
         "cells": [[{"boundary": [[face, sign], ...]}, ...], ...],
         "weights": [[...], ...],
         "name": optional}
    """
    cells = []
    for p in range(cx.n + 1):
        dim = []
        for c in cx.cells(p):
            bnd = [[f.index, s] for (f, s) in cx.boundary(c)] if p >= 1 else []
            dim.append({"boundary": bnd})
        cells.append(dim)
    doc = {
        "schema_version": "1",
        "dimension": cx.n,
        "cells": cells,
        "weights": [[cx.weight(c) for c in cx.cells(p)] for p in range(cx.n + 1)],
    }
    if name is not None:
        doc["name"] = name
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def parse_complex_json(text: str) -> CellComplex:
    """Parse the native JSON document; malformed input raises ParseError,
    structurally valid but inconsistent cell data raises the specific
    validation error from the builder."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            detail={"line": exc.lineno, "column": exc.colno},
        ) from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    version = doc.get("schema_version")
    if version != "1":
        raise ParseError(f"unsupported schema_version {version!r}")
    cells = doc.get("cells")
    if not isinstance(cells, list) or not cells:
        raise ParseError("'cells' must be a non-empty list with one entry per dimension")
    if "dimension" in doc and doc["dimension"] != len(cells) - 1:
        raise ParseError(
            f"'dimension' says {doc['dimension']!r} but 'cells' covers "
            f"dimensions 0..{len(cells) - 1}"
        )
    boundary_lists = []
    for p, dim_cells in enumerate(cells):
        if not isinstance(dim_cells, list):
            raise ParseError(f"cells[{p}] must be a list of cell objects")
        row = []
        for i, cell in enumerate(dim_cells):
            if not isinstance(cell, dict) or "boundary" not in cell:
                raise ParseError(
                    f"cell (dim {p}, index {i}) must be an object with a 'boundary' key"
                )
            bnd = cell["boundary"]
            if not isinstance(bnd, list):
                raise ParseError(f"cell (dim {p}, index {i}): 'boundary' must be a list")
            entries = []
            for entry in bnd:
                if (
                    not isinstance(entry, list)
                    or len(entry) != 2
                    or not all(isinstance(x, int) and not isinstance(x, bool) for x in entry)
                ):
                    raise ParseError(
                        f"cell (dim {p}, index {i}): boundary entries must be "
                        f"[face index, sign] integer pairs, got {entry!r}"
                    )
                entries.append((entry[0], entry[1]))
            row.append(entries)
        boundary_lists.append(row)
    weights = doc.get("weights")
    if weights is not None:
        if not isinstance(weights, list) or not all(
            isinstance(dim, list)
            and all(isinstance(w, (int, float)) and not isinstance(w, bool) for w in dim)
            for dim in weights
        ):
            raise ParseError("'weights' must be per-dimension lists of numbers")
    counts = [len(row) for row in boundary_lists]
    return build(counts, boundary_lists, weights)


# ----------------------------------------------------------------------
# edge lists
# ----------------------------------------------------------------------

def parse_edge_list(text: str) -> CellComplex:
    """Graph from an edge list, one "tail head" pair of labels per line.

    Blank lines and '#' comments are skipped. Vertices are indexed by first
    occurrence; each edge is oriented tail to head. Self loops and repeated
    edges (in either direction) are rejected.
    """
    vertex_index = {}
    edges = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(
                f"line {lineno}: expected two vertex labels, got {len(parts)}",
                detail={"line": lineno},
            )
        a, b = parts
        if a == b:
            raise SelfLoop(
                f"line {lineno}: edge from {a!r} to itself",
                detail={"line": lineno, "vertex": a},
            )
        for lab in (a, b):
            if lab not in vertex_index:
                vertex_index[lab] = len(vertex_index)
        key = frozenset((a, b))
        if key in seen:
            raise DuplicateEdge(
                f"line {lineno}: edge {a!r} {b!r} already given on line {seen[key]}",
                detail={"line": lineno, "first_line": seen[key]},
            )
        seen[key] = lineno
        edges.append((vertex_index[a], vertex_index[b]))
    return _graph_from_edges(len(vertex_index), edges)


def _graph_from_edges(num_vertices, edges):
    edge_b = [[(t, -1), (h, 1)] for (t, h) in edges]
    return build(
        [num_vertices, len(edges)],
        [[[] for _ in range(num_vertices)], edge_b],
    )


# ----------------------------------------------------------------------
# OFF meshes
# ----------------------------------------------------------------------

@dataclass
class OffResult:
    """Parsed OFF mesh: the 2-complex, vertex coordinates, and any edges
    carried by more than two faces (reported, not rejected)."""

    complex: CellComplex
    coordinates: list
    nonmanifold_edges: list


def parse_off(text: str) -> OffResult:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines or lines[0][1] != "OFF":
        raise ParseError("missing OFF header")
    if len(lines) < 2:
        raise ParseError("missing OFF counts line")
    counts_line = lines[1][1].split()
    if len(counts_line) != 3:
        raise ParseError(f"line {lines[1][0]}: counts line needs 3 integers")
    try:
        nv, nf, _ = (int(x) for x in counts_line)
    except ValueError as exc:
        raise ParseError(f"line {lines[1][0]}: counts line needs 3 integers") from exc
    if len(lines) < 2 + nv + nf:
        raise ParseError(f"expected {nv} vertex and {nf} face lines, found fewer")

    coordinates = []
    for (lineno, line) in lines[2 : 2 + nv]:
        parts = line.split()
        if len(parts) < 3:
            raise ParseError(f"line {lineno}: vertex line needs 3 coordinates")
        try:
            coordinates.append([float(x) for x in parts[:3]])
        except ValueError as exc:
            raise ParseError(f"line {lineno}: bad vertex coordinate") from exc

    faces = []
    for (lineno, line) in lines[2 + nv : 2 + nv + nf]:
        parts = line.split()
        try:
            count = int(parts[0])
            verts = [int(x) for x in parts[1 : 1 + count]]
        except (ValueError, IndexError) as exc:
            raise ParseError(f"line {lineno}: bad face line") from exc
        if count < 3 or len(verts) != count:
            raise ParseError(f"line {lineno}: face needs at least 3 vertex indices")
        for v in verts:
            if not 0 <= v < nv:
                raise ParseError(f"line {lineno}: vertex index {v} out of range")
        for i in range(count):
            if verts[i] == verts[(i + 1) % count]:
                raise ParseError(f"line {lineno}: face repeats consecutive vertex {verts[i]}")
        faces.append(tuple(verts))

    cx = _surface_from_faces(nv, faces)
    nonmanifold = [
        tuple(sorted(v.index for (v, _) in cx.boundary(e)))
        for e in cx.cells(1)
        if len(cx.cofaces(e)) > 2
    ]
    return OffResult(complex=cx, coordinates=coordinates, nonmanifold_edges=nonmanifold)


def _surface_from_faces(num_vertices, faces) -> CellComplex:
    """2-complex from polygon faces given as vertex-index cycles.

    Edges are keyed by their unordered vertex pair in order of first
    appearance and oriented low-to-high; a face step then contributes sign
    +1 when traversed low-to-high and -1 otherwise, which makes the
    composite boundary vanish identically.
    """
    edge_index = {}
    edge_list = []
    face_bnds = []
    for f in faces:
        k = len(f)
        bnd = []
        for i in range(k):
            a, b = f[i], f[(i + 1) % k]
            key = (min(a, b), max(a, b))
            if key not in edge_index:
                edge_index[key] = len(edge_list)
                edge_list.append(key)
            bnd.append((edge_index[key], 1 if a < b else -1))
        face_bnds.append(bnd)
    edge_b = [[(a, -1), (b, 1)] for (a, b) in edge_list]
    return build(
        [num_vertices, len(edge_list), len(faces)],
        [[[] for _ in range(num_vertices)], edge_b, face_bnds],
    )


# ----------------------------------------------------------------------
# generators
# ----------------------------------------------------------------------

_PLATONIC_FACES = {
    "tetrahedron": (4, [(0, 1, 2), (0, 3, 1), (1, 3, 2), (0, 2, 3)]),
    "cube": (
        8,
        [(0, 1, 3, 2), (4, 6, 7, 5), (0, 4, 5, 1), (2, 3, 7, 6), (0, 2, 6, 4), (1, 5, 7, 3)],
    ),
    "octahedron": (
        6,
        [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 1), (5, 2, 1), (5, 3, 2), (5, 4, 3), (5, 1, 4)],
    ),
    "icosahedron": (
        12,
        [
            (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
            (1, 6, 2), (2, 6, 7), (2, 7, 3), (3, 7, 8), (3, 8, 4),
            (4, 8, 9), (4, 9, 5), (5, 9, 10), (5, 10, 1), (1, 10, 6),
            (11, 7, 6), (11, 8, 7), (11, 9, 8), (11, 10, 9), (11, 6, 10),
        ],
    ),
}


def _int_param(kind, param, minimum):
    if param is None:
        raise BadParameter(f"generator {kind!r} needs an integer parameter")
    try:
        val = int(param)
    except (TypeError, ValueError):
        raise BadParameter(f"generator {kind!r}: bad integer parameter {param!r}") from None
    if val < minimum:
        raise BadParameter(f"generator {kind!r} needs parameter >= {minimum}, got {val}")
    return val


def _no_param(kind, param):
    if param is not None:
        raise BadParameter(f"generator {kind!r} takes no parameter")


def _dual_faces(faces, num_vertices):
    """Faces of the dual surface: for each primal vertex, the cycle of
    primal faces around it, walked deterministically from the lowest face
    index across shared edges."""
    edge_faces = {}
    for fi, f in enumerate(faces):
        k = len(f)
        for i in range(k):
            a, b = f[i], f[(i + 1) % k]
            edge_faces.setdefault((min(a, b), max(a, b)), []).append(fi)
    vert_faces = [set() for _ in range(num_vertices)]
    for fi, f in enumerate(faces):
        for v in f:
            vert_faces[v].add(fi)

    def edges_at(fi, v):
        f = faces[fi]
        k = len(f)
        return [
            (min(f[i], f[(i + 1) % k]), max(f[i], f[(i + 1) % k]))
            for i in range(k)
            if v in (f[i], f[(i + 1) % k])
        ]

    dual = []
    for v in range(num_vertices):
        start = min(vert_faces[v])
        cycle = [start]
        e = sorted(edges_at(start, v))[0]
        while True:
            nxt = next(fi for fi in edge_faces[e] if fi != cycle[-1])
            if nxt == start:
                break
            cycle.append(nxt)
            e = next(ee for ee in edges_at(nxt, v) if ee != e)
        dual.append(tuple(cycle))
    return dual


def _torus_faces(p, q):
    def vid(i, j):
        return (i % p) * q + (j % q)

    return [
        (vid(i, j), vid(i, j + 1), vid(i + 1, j + 1), vid(i + 1, j))
        for i in range(p)
        for j in range(q)
    ]


def _genus2_faces():
    """Two 3x3 grid tori, each with the corner square removed, glued along
    the resulting boundary square (vertices 0, 1, 3, 4 of the grid)."""
    base = _torus_faces(3, 3)
    # base[0] is the square on vertices {0, 1, 4, 3}; removing it from both
    # copies and identifying those four vertices glues the tori along it
    kept = base[1:]
    relabel = {0: 0, 1: 1, 3: 3, 4: 4, 2: 9, 5: 10, 6: 11, 7: 12, 8: 13}
    mirrored = [tuple(relabel[v] for v in f) for f in kept]
    return 14, kept + mirrored


def generate(kind: str, param=None) -> CellComplex:
    """Build a named complex.

    Graphs: "path:n" (n edges), "cycle:n" (n >= 3), "complete:n" (n >= 2),
    "star:n" (hub plus n leaves), "petersen". Surfaces: "tetrahedron",
    "cube", "octahedron", "icosahedron", "dodecahedron",
    "torus_grid:PxQ" (P, Q >= 3), "genus2". All weights are 1; use
    apply_weight_spec to change them.
    """
    if kind == "path":
        n = _int_param(kind, param, 1)
        return _graph_from_edges(n + 1, [(i, i + 1) for i in range(n)])
    if kind == "cycle":
        n = _int_param(kind, param, 3)
        return _graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])
    if kind == "complete":
        n = _int_param(kind, param, 2)
        return _graph_from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    if kind == "star":
        n = _int_param(kind, param, 1)
        return _graph_from_edges(n + 1, [(0, i) for i in range(1, n + 1)])
    if kind == "petersen":
        _no_param(kind, param)
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + ((i + 2) % 5)) for i in range(5)]
        return _graph_from_edges(10, outer + spokes + inner)
    if kind in _PLATONIC_FACES:
        _no_param(kind, param)
        nv, faces = _PLATONIC_FACES[kind]
        return _surface_from_faces(nv, faces)
    if kind == "dodecahedron":
        _no_param(kind, param)
        nv, faces = _PLATONIC_FACES["icosahedron"]
        return _surface_from_faces(len(faces), _dual_faces(faces, nv))
    if kind == "torus_grid":
        if param is None:
            raise BadParameter("generator 'torus_grid' needs a PxQ parameter")
        parts = str(param).lower().split("x")
        if len(parts) != 2:
            raise BadParameter(f"generator 'torus_grid': bad size {param!r}, expected PxQ")
        p = _int_param(kind, parts[0], 3)
        q = _int_param(kind, parts[1], 3)
        return _surface_from_faces(p * q, _torus_faces(p, q))
    if kind == "genus2":
        _no_param(kind, param)
        nv, faces = _genus2_faces()
        return _surface_from_faces(nv, faces)
    raise BadParameter(f"unknown generator kind {kind!r}")


# ----------------------------------------------------------------------
# weights
# ----------------------------------------------------------------------

def apply_weight_spec(cx: CellComplex, spec, seed=None) -> CellComplex:
    """Reweight a complex from a spec.

    "const:X" sets every weight to X; "random" draws uniformly from
    [0.1, 10) with numpy's default_rng seeded by ``seed``; a nested list is
    used verbatim. None returns the complex unchanged.
    """
    if spec is None:
        return cx
    if isinstance(spec, str):
        if spec.startswith("const:"):
            try:
                val = float(spec.split(":", 1)[1])
            except ValueError:
                raise BadParameter(f"bad constant weight spec {spec!r}") from None
            return cx.with_weights(
                [[val] * cx.num_cells(p) for p in range(cx.n + 1)]
            )
        if spec == "random":
            rng = np.random.default_rng(seed)
            return cx.with_weights(
                [list(rng.uniform(0.1, 10.0, cx.num_cells(p))) for p in range(cx.n + 1)]
            )
        raise BadParameter(f"unknown weight spec {spec!r}")
    return cx.with_weights(spec)
