"""Weighted regular cell complexes: data model, validation, and queries.

A complex is stored as per-dimension cell arrays. Each p-cell with p >= 1
carries a boundary list of (face index, incidence sign) pairs over the
(p-1)-cells, and every cell carries a positive weight (default 1.0).

Validation enforces the combinatorial proxy for regularity:

  * incidence signs are +1 or -1,
  * every p-cell with p >= 1 has at least 2 boundary faces, none repeated,
  * the composite boundary is zero as an integer matrix for every pair of
    consecutive dimensions.

Geometric regularity of attaching maps cannot be recovered from this data;
callers feeding hand-built complexes are responsible for it. All integer
quantities here (boundary matrices, Euler characteristic, degrees) are
computed in exact integer arithmetic; floating point enters only through
weights.

Instances are immutable after construction. Derived data (closures, the
quasiconvexity scan, operator matrices built by other modules) is cached on
the instance; all queries are pure and safe to call concurrently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    BadSign,
    BoundaryNotSquareZero,
    DanglingFace,
    DimensionOutOfRange,
    NonPositiveWeight,
    UnknownCell,
    UnsupportedDimension,
    ValidationError,
)


class CellId(NamedTuple):
    """A cell, identified by its dimension and dense per-dimension index."""

    dim: int
    index: int


@dataclass(frozen=True)
class IncidenceVector:
    """An ordered coface/face pair (tau > sigma) with dim tau = dim sigma + 1.

    ``sign`` is the incidence number of sigma in the boundary of tau.
    Coefficients of 1-forms and vector fields are attached to the pair
    itself, not to the sign, so they do not change under re-orientation.
    """

    tau: CellId
    sigma: CellId
    sign: int

    @property
    def key(self):
        return (self.tau, self.sigma)


@dataclass
class Chain:
    """A finitely supported real chain, possibly mixing dimensions."""

    coefficients: dict

    def __add__(self, other):
        out = dict(self.coefficients)
        for c, x in other.coefficients.items():
            out[c] = out.get(c, 0.0) + x
        return Chain(out)

    def scaled(self, a):
        return Chain({c: a * x for c, x in self.coefficients.items()})


class CellComplex:
    """A validated finite weighted regular cell complex.

    Use :func:`build` to construct one; the constructor performs no checks.
    """

    def __init__(self, boundary_lists, weights):
        # boundary_lists[p][i] = tuple of (face_index, sign); empty for p = 0
        self._boundary = boundary_lists
        self._weights = weights
        self._cofaces = self._index_cofaces()
        self._cache = {}

    def _index_cofaces(self):
        cof = [[[] for _ in dim_cells] for dim_cells in self._boundary]
        for p in range(1, len(self._boundary)):
            for i, bnd in enumerate(self._boundary[p]):
                for (j, s) in bnd:
                    cof[p - 1][j].append((i, s))
        return [[tuple(lst) for lst in dim] for dim in cof]

    # ------------------------------------------------------------------
    # basic queries
    # ------------------------------------------------------------------

    @property
    def n(self):
        """Top dimension."""
        return len(self._boundary) - 1

    def num_cells(self, p):
        if not 0 <= p <= self.n:
            return 0
        return len(self._boundary[p])

    def cell_counts(self):
        return [len(d) for d in self._boundary]

    def cells(self, p):
        return [CellId(p, i) for i in range(self.num_cells(p))]

    def all_cells(self):
        for p in range(self.n + 1):
            for i in range(self.num_cells(p)):
                yield CellId(p, i)

    def _check_cell(self, c):
        if not (0 <= c.dim <= self.n and 0 <= c.index < self.num_cells(c.dim)):
            raise UnknownCell(f"no cell {c!r} in this complex")

    def boundary(self, c: CellId):
        """Boundary list of c as tuples (face CellId, sign)."""
        self._check_cell(c)
        return tuple((CellId(c.dim - 1, j), s) for (j, s) in self._boundary[c.dim][c.index])

    def cofaces(self, c: CellId):
        """Cofaces of c as tuples (coface CellId, sign of c inside it)."""
        self._check_cell(c)
        return tuple((CellId(c.dim + 1, j), s) for (j, s) in self._cofaces[c.dim][c.index])

    def weight(self, c: CellId):
        self._check_cell(c)
        return self._weights[c.dim][c.index]

    def weights_constant(self):
        flat = [w for dim in self._weights for w in dim]
        return all(w == flat[0] for w in flat)

    def incidence_sign(self, tau: CellId, sigma: CellId):
        """Incidence number of sigma in the boundary of tau."""
        for (j, s) in self._boundary[tau.dim][tau.index]:
            if j == sigma.index and tau.dim - 1 == sigma.dim:
                return s
        raise UnknownCell(f"{sigma!r} is not a boundary face of {tau!r}")

    def incidence_vector(self, tau: CellId, sigma: CellId) -> IncidenceVector:
        return IncidenceVector(tau, sigma, self.incidence_sign(tau, sigma))

    def incidence_vectors(self):
        """All vectors (tau > sigma), ordered by (dim tau, index tau, boundary order)."""
        out = []
        for p in range(1, self.n + 1):
            for i, bnd in enumerate(self._boundary[p]):
                for (j, s) in bnd:
                    out.append(IncidenceVector(CellId(p, i), CellId(p - 1, j), s))
        return out

    # ------------------------------------------------------------------
    # matrices and invariants
    # ------------------------------------------------------------------

    def boundary_matrix(self, p):
        """Integer matrix of the boundary operator C_p -> C_{p-1}.

        Rows are (p-1)-cells, columns are p-cells; entry (sigma, tau) is the
        incidence sign when sigma is a face of tau and 0 otherwise.
        """
        if not 1 <= p <= self.n:
            raise DimensionOutOfRange(f"boundary_matrix needs 1 <= p <= {self.n}, got {p}")
        mat = np.zeros((self.num_cells(p - 1), self.num_cells(p)), dtype=np.int64)
        for i, bnd in enumerate(self._boundary[p]):
            for (j, s) in bnd:
                mat[j, i] += s
        return mat

    def euler_characteristic(self):
        return sum((-1) ** p * self.num_cells(p) for p in range(self.n + 1))

    def degree(self, c: CellId):
        """Vertex degree (number of incident edges) or face degree (boundary edges)."""
        self._check_cell(c)
        if c.dim == 0:
            return len(self._cofaces[0][c.index])
        if c.dim == 2:
            return len(self._boundary[2][c.index])
        raise UnsupportedDimension(f"degree is defined for vertices and 2-cells, not dim {c.dim}")

    def closure(self, c: CellId):
        """Transitive face set of c, including c itself."""
        self._check_cell(c)
        key = ("closure", c)
        if key not in self._cache:
            out = {c}
            stack = [c]
            while stack:
                cur = stack.pop()
                if cur.dim == 0:
                    continue
                for (j, _) in self._boundary[cur.dim][cur.index]:
                    f = CellId(cur.dim - 1, j)
                    if f not in out:
                        out.add(f)
                        stack.append(f)
            self._cache[key] = frozenset(out)
        return self._cache[key]

    def is_quasiconvex(self):
        """Check quasiconvexity; returns (ok, witness).

        For every pair of distinct (p+1)-cells whose closures share a p-cell,
        the intersection of the closures must equal the closure of that
        single shared p-cell. On failure the witness is a tuple
        (tau1, tau2, offending cells): the two cofaces and either the list of
        shared p-cells (when there is more than one) or the extra cells in
        the intersection beyond the closure of the shared face.
        """
        if "quasiconvex" not in self._cache:
            self._cache["quasiconvex"] = self._quasiconvex_scan()
        return self._cache["quasiconvex"]

    def _quasiconvex_scan(self):
        for p in range(0, self.n):
            pairs = set()
            for s in range(self.num_cells(p)):
                cof = sorted(i for (i, _) in self._cofaces[p][s])
                pairs.update(itertools.combinations(cof, 2))
            for (a, b) in sorted(pairs):
                t1, t2 = CellId(p + 1, a), CellId(p + 1, b)
                inter = self.closure(t1) & self.closure(t2)
                shared = sorted(c for c in inter if c.dim == p)
                if len(shared) != 1:
                    return False, (t1, t2, shared)
                if inter != self.closure(shared[0]):
                    extra = sorted(inter - self.closure(shared[0]))
                    return False, (t1, t2, extra)
        return True, None

    def is_closed_surface(self):
        """True iff n = 2, every edge lies in exactly two faces, and every
        vertex link is a single cycle.

        The link of a vertex v is the graph whose nodes are the edges at v,
        with one connection for each face at v through its two edges at v. A
        face whose boundary meets v in a number of edges other than two
        cannot appear in a surface decomposition and fails the check.
        """
        if "closed_surface" not in self._cache:
            self._cache["closed_surface"] = self._closed_surface_scan()
        return self._cache["closed_surface"]

    def _closed_surface_scan(self):
        if self.n != 2:
            return False
        for e in range(self.num_cells(1)):
            if len(self._cofaces[1][e]) != 2:
                return False
        edges_at = [[] for _ in range(self.num_cells(0))]
        for e, bnd in enumerate(self._boundary[1]):
            for (v, _) in bnd:
                edges_at[v].append(e)
        for v in range(self.num_cells(0)):
            nodes = edges_at[v]
            if not nodes:
                return False
            adj = {e: [] for e in nodes}
            node_set = set(nodes)
            seen_faces = set()
            for e in nodes:
                for (f, _) in self._cofaces[1][e]:
                    if f in seen_faces:
                        continue
                    seen_faces.add(f)
                    local = [ee for (ee, _) in self._boundary[2][f] if ee in node_set]
                    if len(local) != 2:
                        return False
                    adj[local[0]].append(local[1])
                    adj[local[1]].append(local[0])
            if any(len(nbrs) != 2 for nbrs in adj.values()):
                return False
            # connectivity: walk from one node
            stack, visited = [nodes[0]], {nodes[0]}
            while stack:
                for nxt in adj[stack.pop()]:
                    if nxt not in visited:
                        visited.add(nxt)
                        stack.append(nxt)
            if len(visited) != len(nodes):
                return False
        return True

    # ------------------------------------------------------------------
    # chains
    # ------------------------------------------------------------------

    def boundary_of_chain(self, chain: Chain) -> Chain:
        out = {}
        for c, x in chain.coefficients.items():
            self._check_cell(c)
            if c.dim == 0:
                continue
            for (j, s) in self._boundary[c.dim][c.index]:
                f = CellId(c.dim - 1, j)
                out[f] = out.get(f, 0.0) + s * x
        return Chain(out)

    # ------------------------------------------------------------------
    # derived complexes
    # ------------------------------------------------------------------

    def with_weights(self, weights):
        """Return a copy with new weights (revalidated)."""
        return build(self.cell_counts(), self._boundary, weights)

    def with_scaled_weights(self, factor):
        return self.with_weights([[factor * w for w in dim] for dim in self._weights])

    def with_flipped_orientation(self, c: CellId):
        """Return a copy with the orientation of one cell reversed.

        All incidence signs in the boundary of c and the sign of c inside
        every coface boundary are negated. This is conjugation of the chain
        complex by a diagonal sign map, so validity is preserved.
        """
        self._check_cell(c)
        new = [[list(b) for b in dim] for dim in self._boundary]
        if c.dim >= 1:
            new[c.dim][c.index] = [(j, -s) for (j, s) in new[c.dim][c.index]]
        if c.dim + 1 <= self.n:
            for i, bnd in enumerate(new[c.dim + 1]):
                new[c.dim + 1][i] = [(j, -s if j == c.index else s) for (j, s) in bnd]
        return build(self.cell_counts(), new, self._weights)

    def relabeled(self, permutations):
        """Return a copy with cells of each dimension permuted.

        ``permutations[p][i]`` is the new index of old cell i. Boundary data
        and weights follow the cells.
        """
        perms = [list(permutations[p]) for p in range(self.n + 1)]
        counts = self.cell_counts()
        new_b = [[None] * counts[p] for p in range(self.n + 1)]
        new_w = [[None] * counts[p] for p in range(self.n + 1)]
        for p in range(self.n + 1):
            for i in range(counts[p]):
                ni = perms[p][i]
                if p == 0:
                    new_b[p][ni] = []
                else:
                    new_b[p][ni] = [(perms[p - 1][j], s) for (j, s) in self._boundary[p][i]]
                new_w[p][ni] = self._weights[p][i]
        return build(counts, new_b, new_w)

    def __repr__(self):
        counts = " ".join(str(c) for c in self.cell_counts())
        return f"<CellComplex dim={self.n} cells=[{counts}]>"


def build(cell_counts, boundary_lists, weights=None) -> CellComplex:
    """Validate raw cell data and construct a CellComplex.

    Parameters
    ----------
    cell_counts : number of cells per dimension, [n0, n1, ..., nn]
    boundary_lists : per dimension, per cell, a list of (face_index, sign)
        pairs; entries for dimension 0 must be empty
    weights : optional per-dimension lists of positive cell weights,
        defaulting to 1.0 everywhere

    Raises
    ------
    DanglingFace, BadSign, BoundaryNotSquareZero, NonPositiveWeight, or a
    plain ValidationError for shape mismatches.
    """
    counts = [int(c) for c in cell_counts]
    if not counts or any(c < 0 for c in counts):
        raise ValidationError(f"bad cell counts {counts!r}")
    if len(boundary_lists) != len(counts):
        raise ValidationError(
            f"boundary data covers {len(boundary_lists)} dimensions, counts cover {len(counts)}"
        )
    n = len(counts) - 1

    norm = []
    for p in range(n + 1):
        dim_lists = boundary_lists[p]
        if len(dim_lists) != counts[p]:
            raise ValidationError(
                f"dimension {p}: {len(dim_lists)} boundary lists for {counts[p]} cells"
            )
        cells = []
        for i, bnd in enumerate(dim_lists):
            entries = []
            for entry in bnd:
                j, s = entry
                j = int(j)
                if s not in (1, -1):
                    raise BadSign(
                        f"cell (dim {p}, index {i}): incidence sign {s!r} is not +1 or -1",
                        detail={"dim": p, "index": i, "sign": s},
                    )
                if p == 0:
                    raise DanglingFace(
                        f"vertex {i} lists a boundary face; 0-cells have no faces",
                        detail={"dim": 0, "index": i},
                    )
                if not 0 <= j < counts[p - 1]:
                    raise DanglingFace(
                        f"cell (dim {p}, index {i}) references face {j} "
                        f"but dimension {p - 1} has {counts[p - 1]} cells",
                        detail={"dim": p, "index": i, "face": j},
                    )
                entries.append((j, int(s)))
            if p >= 1:
                faces = [j for (j, _) in entries]
                if len(set(faces)) != len(faces):
                    raise BoundaryNotSquareZero(
                        f"cell (dim {p}, index {i}) repeats a boundary face",
                        detail={"dim": p, "index": i, "faces": faces},
                    )
                if len(entries) < 2:
                    raise ValidationError(
                        f"cell (dim {p}, index {i}) has {len(entries)} boundary faces, needs >= 2"
                    )
            cells.append(tuple(entries))
        norm.append(cells)

    if weights is None:
        wnorm = [[1.0] * counts[p] for p in range(n + 1)]
    else:
        if len(weights) != n + 1:
            raise ValidationError(f"weights cover {len(weights)} dimensions, expected {n + 1}")
        wnorm = []
        for p in range(n + 1):
            dim_w = [float(w) for w in weights[p]]
            if len(dim_w) != counts[p]:
                raise ValidationError(
                    f"dimension {p}: {len(dim_w)} weights for {counts[p]} cells"
                )
            for i, w in enumerate(dim_w):
                if not (w > 0.0) or not np.isfinite(w):
                    raise NonPositiveWeight(
                        f"cell (dim {p}, index {i}) has weight {w!r}",
                        detail={"dim": p, "index": i, "weight": w},
                    )
            wnorm.append(dim_w)

    cx = CellComplex(norm, wnorm)

    # exact integer check of the square-zero condition
    for p in range(1, n):
        prod = cx.boundary_matrix(p) @ cx.boundary_matrix(p + 1)
        nz = np.argwhere(prod != 0)
        if nz.size:
            row, col = (int(v) for v in nz[0])
            raise BoundaryNotSquareZero(
                f"boundary composite at dimension {p + 1} has entry "
                f"{int(prod[row, col])} at row {row}, column {col}",
                detail={"p": p, "row": row, "col": col},
            )
    return cx
