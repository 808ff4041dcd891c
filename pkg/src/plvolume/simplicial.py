"""Exact simplicial complexes.

Coordinates and barycentric weights are ``fractions.Fraction``.  Every volume
comparison the library makes is a ratio inside one simplex, computed from
barycentric weights, so irrational Euclidean volumes (surfaces embedded in
R^3, say) never reach the exact core.  ``euclidean_volume_approx`` is the
only float path and exists for display.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from . import _linalg
from .exceptions import (
    DegenerateSimplex,
    FaceNotFound,
    ImproperIntersection,
    InvalidBaryPoint,
    MixedCells,
    NonOrientable,
    NonPseudomanifold,
    NotAdjacent,
    PointOutsideComplex,
)

Scalar = Fraction
Point = tuple  # tuple[Fraction, ...]
Face = tuple  # sorted tuple of vertex ids

__all__ = [
    "Scalar", "Point", "Cell", "BaryPoint", "Complex", "as_scalar", "as_point",
    "build_complex", "star", "link", "orient", "barycenter", "relative_volume",
    "euclidean_volume_approx", "permutation_sign", "is_coherent", "signed_relative_volume",
]


def as_scalar(x) -> Fraction:
    """Coerce ``x`` to an exact rational.

    Floats are accepted and converted exactly (their binary value), strings
    must be integer or ``p/q`` literals.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite scalar {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "item"):  # numpy scalars
        return as_scalar(x.item())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def as_point(coords: Iterable) -> Point:
    return tuple(as_scalar(c) for c in coords)


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (entries distinct)."""
    sign = 1
    items = list(seq)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class Cell:
    id: int
    vertex_ids: tuple[int, ...]
    orientation: int = 1

    @property
    def dim(self) -> int:
        return len(self.vertex_ids) - 1

    def facet(self, position: int) -> tuple[int, ...]:
        """Vertex ids of the facet opposite the vertex at ``position``, in cell order."""
        return self.vertex_ids[:position] + self.vertex_ids[position + 1:]

    def position(self, vertex_id: int) -> int:
        return self.vertex_ids.index(vertex_id)

    def induced_sign(self, position: int) -> int:
        """Orientation the cell induces on a facet, relative to the sorted facet."""
        return self.orientation * (-1) ** position * permutation_sign(self.facet(position))


@dataclass(frozen=True)
class BaryPoint:
    """A point of a cell given by its barycentric weights."""

    cell_id: int
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        w = tuple(as_scalar(x) for x in self.weights)
        if sum(w) != 1:
            raise InvalidBaryPoint(f"barycentric weights sum to {sum(w)}, not 1")
        if any(x < 0 for x in w):
            raise InvalidBaryPoint("barycentric weights must be nonnegative")
        object.__setattr__(self, "weights", w)

    @property
    def is_interior(self) -> bool:
        return all(x > 0 for x in self.weights)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.weights) if x)


class Complex:
    """A finite geometric simplicial complex given by its top cells.

    Immutable.  Derived structure (face lattice, facet incidence, dual graph)
    is computed lazily and cached.  Instances are normally produced by
    :func:`build_complex`, which validates; the constructor trusts its input.
    """

    def __init__(self, vertices: Sequence[Sequence], cells: Sequence, oriented: bool = False):
        self._vertices = tuple(as_point(v) for v in vertices)
        built = []
        for i, c in enumerate(cells):
            if isinstance(c, Cell):
                built.append(Cell(i, tuple(c.vertex_ids), c.orientation))
            else:
                built.append(Cell(i, tuple(int(v) for v in c)))
        self._cells = tuple(built)
        self._oriented = bool(oriented)

    # -- basic attributes ---------------------------------------------------
    @property
    def vertices(self) -> tuple[Point, ...]:
        return self._vertices

    @property
    def cells(self) -> tuple[Cell, ...]:
        return self._cells

    @property
    def oriented(self) -> bool:
        return self._oriented

    @property
    def dim(self) -> int:
        return self._cells[0].dim if self._cells else -1

    @property
    def ambient_dim(self) -> int:
        return len(self._vertices[0]) if self._vertices else 0

    @property
    def n_cells(self) -> int:
        return len(self._cells)

    def cell(self, cell_id: int) -> Cell:
        return self._cells[cell_id]

    def cell_points(self, cell_id: int) -> tuple[Point, ...]:
        return tuple(self._vertices[v] for v in self._cells[cell_id].vertex_ids)

    def with_orientation(self, signs: Sequence[int], oriented: bool = True) -> "Complex":
        cells = [Cell(c.id, c.vertex_ids, int(s)) for c, s in zip(self._cells, signs)]
        return Complex(self._vertices, cells, oriented=oriented)

    def __eq__(self, other):
        if not isinstance(other, Complex):
            return NotImplemented
        return (self is other) or (
            self._vertices == other._vertices and self._cells == other._cells
            and self._oriented == other._oriented
        )

    def __hash__(self):
        return hash((self._vertices, self._cells, self._oriented))

    def __repr__(self):
        return (f"Complex(dim={self.dim}, ambient_dim={self.ambient_dim}, "
                f"n_vertices={len(self._vertices)}, n_cells={self.n_cells})")

    # -- combinatorics ------------------------------------------------------
    @cached_property
    def face_lattice(self) -> dict[int, tuple[Face, ...]]:
        lattice: dict[int, set] = {k: set() for k in range(self.dim + 1)}
        for c in self._cells:
            s = tuple(sorted(c.vertex_ids))
            for k in range(self.dim + 1):
                lattice[k].update(combinations(s, k + 1))
        return {k: tuple(sorted(v)) for k, v in lattice.items()}

    def faces(self, k: int) -> tuple[Face, ...]:
        return self.face_lattice.get(k, ())

    @cached_property
    def _facet_index(self) -> dict[Face, tuple[int, ...]]:
        index: dict[Face, list[int]] = {}
        for c in self._cells:
            for pos in range(len(c.vertex_ids)):
                index.setdefault(tuple(sorted(c.facet(pos))), []).append(c.id)
        return {f: tuple(ids) for f, ids in index.items()}

    def facet_cells(self, facet: Iterable[int]) -> tuple[int, ...]:
        return self._facet_index.get(tuple(sorted(facet)), ())

    @cached_property
    def _adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, set] = {c.id: set() for c in self._cells}
        for ids in self._facet_index.values():
            for a, b in combinations(ids, 2):
                adj[a].add(b)
                adj[b].add(a)
        return {k: tuple(sorted(v)) for k, v in adj.items()}

    def neighbors(self, cell_id: int) -> tuple[int, ...]:
        return self._adjacency[cell_id]

    @property
    def dual_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((a, b) for a, nb in self._adjacency.items() for b in nb if a < b))

    def shared_facet(self, a: int, b: int) -> Face:
        common = set(self._cells[a].vertex_ids) & set(self._cells[b].vertex_ids)
        if a == b or len(common) != self.dim:
            raise NotAdjacent(f"cells {a} and {b} do not share a facet")
        return tuple(sorted(common))

    def components(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for c in self._cells:
            if c.id in seen:
                continue
            comp = []
            queue = deque([c.id])
            seen.add(c.id)
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in self._adjacency[x]:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            out.append(tuple(sorted(comp)))
        return out

    @property
    def boundary_facets(self) -> tuple[Face, ...]:
        return tuple(sorted(f for f, ids in self._facet_index.items() if len(ids) == 1))

    @property
    def is_pseudomanifold(self) -> bool:
        return all(len(ids) <= 2 for ids in self._facet_index.values())

    @property
    def is_closed(self) -> bool:
        return all(len(ids) == 2 for ids in self._facet_index.values())

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(f) for k, f in self.face_lattice.items())

    # -- points -------------------------------------------------------------
    def coords(self, p: BaryPoint) -> Point:
        pts = self.cell_points(p.cell_id)
        return tuple(sum((w * q[i] for w, q in zip(p.weights, pts)), Fraction(0))
                     for i in range(self.ambient_dim))

    def combination(self, p: BaryPoint) -> dict[int, Fraction]:
        """The point as a weighted combination of vertex ids (zero weights dropped)."""
        cell = self._cells[p.cell_id]
        return {v: w for v, w in zip(cell.vertex_ids, p.weights) if w}

    def to_bary(self, cell_id: int, combination: Mapping[int, Fraction]) -> BaryPoint:
        cell = self._cells[cell_id]
        missing = set(combination) - set(cell.vertex_ids)
        if missing:
            raise MixedCells(f"vertices {sorted(missing)} are not in cell {cell_id}")
        return BaryPoint(cell_id, tuple(combination.get(v, Fraction(0)) for v in cell.vertex_ids))

    @cached_property
    def _locators(self):
        out = []
        for c in self._cells:
            pts = self.cell_points(c.id)
            edges = [[q - p0 for q, p0 in zip(p, pts[0])] for p in pts[1:]]
            gram = [[sum(a * b for a, b in zip(e1, e2)) for e2 in edges] for e1 in edges]
            out.append((pts[0], edges, _linalg.inverse(gram)))
        return out

    def barycentric(self, cell_id: int, point: Sequence) -> tuple[Fraction, ...] | None:
        """Barycentric weights of ``point`` in the affine hull of a cell, or None off the hull."""
        x = as_point(point)
        p0, edges, ginv = self._locators[cell_id]
        d = [a - b for a, b in zip(x, p0)]
        proj = [sum(a * b for a, b in zip(e, d)) for e in edges]
        mu = [sum(g * q for g, q in zip(row, proj)) for row in ginv]
        recon = [p0[i] + sum(m * e[i] for m, e in zip(mu, edges)) for i in range(len(x))]
        if recon != list(x):
            return None
        return (1 - sum(mu), *mu)

    def locate(self, point: Sequence) -> BaryPoint:
        """The lowest-id cell containing ``point``."""
        for c in self._cells:
            w = self.barycentric(c.id, point)
            if w is not None and all(x >= 0 for x in w):
                return BaryPoint(c.id, w)
        raise PointOutsideComplex(f"point {tuple(str(c) for c in point)} is not in |K|")

    def euclidean_volume(self, cell_id: int) -> float:
        return euclidean_volume_approx(self.cell_points(cell_id))


# -- validation -------------------------------------------------------------

def _check_nondegenerate(points: Sequence[Point], cell_id: int) -> None:
    edges = [[a - b for a, b in zip(p, points[0])] for p in points[1:]]
    if _linalg.rank(edges) != len(edges):
        raise DegenerateSimplex(f"cell {cell_id} spans a degenerate simplex")


def _bbox(points: Sequence[Point]):
    return [min(c) for c in zip(*points)], [max(c) for c in zip(*points)]


def _proper_pair(K: Complex, a: Cell, b: Cell) -> bool:
    """True when the two cells meet in a common face (possibly empty)."""
    shared = set(a.vertex_ids) & set(b.vertex_ids)
    if len(shared) == len(a.vertex_ids):
        return False
    pa, pb = K.cell_points(a.id), K.cell_points(b.id)
    if not shared:
        (lo_a, hi_a), (lo_b, hi_b) = _bbox(pa), _bbox(pb)
        if any(h1 < l2 or h2 < l1 for l1, h1, l2, h2 in zip(lo_a, hi_a, lo_b, hi_b)):
            return True
    n, N = K.dim, K.ambient_dim
    if len(shared) == n and n == N:
        # full-dimensional neighbours: apexes must lie on opposite sides
        facet = [K.vertices[v] for v in sorted(shared)]
        apex_a = next(K.vertices[v] for v in a.vertex_ids if v not in shared)
        apex_b = next(K.vertices[v] for v in b.vertex_ids if v not in shared)

        def side(apex):
            rows = [[x - y for x, y in zip(p, facet[0])] for p in facet[1:] + [apex]]
            return _linalg.det(rows)

        return side(apex_a) * side(apex_b) < 0
    # general case: maximise the weight a point of a∩b puts outside the shared face
    na, nb = len(pa), len(pb)
    rows = []
    for i in range(N):
        rows.append([p[i] for p in pa] + [-q[i] for q in pb])
    rows.append([Fraction(1)] * na + [Fraction(0)] * nb)
    rows.append([Fraction(0)] * na + [Fraction(1)] * nb)
    rhs = [Fraction(0)] * N + [Fraction(1), Fraction(1)]
    objective = [Fraction(int(v not in shared)) for v in a.vertex_ids] + [Fraction(0)] * nb
    best = _linalg.lp_max(objective, rows, rhs)
    return best is None or best == 0


def build_complex(
    vertices: Sequence[Sequence],
    cells: Sequence[Sequence[int]],
    *,
    check_intersections: bool = True,
    strict: bool = False,
) -> Complex:
    """Validate and build a complex from a vertex table and top cells.

    ``check_intersections`` runs the exact pairwise intersection test
    (quadratic in the number of cells, bounding-box pruned).  ``strict``
    additionally requires every facet to lie in at most two cells.
    """
    verts = [as_point(v) for v in vertices]
    if not cells:
        raise DegenerateSimplex("a complex needs at least one cell")
    if verts and any(len(v) != len(verts[0]) for v in verts):
        raise DegenerateSimplex("vertices have mixed ambient dimensions")
    sizes = {len(c) for c in cells}
    if len(sizes) != 1:
        raise DegenerateSimplex("cells must all have the same dimension")
    for i, c in enumerate(cells):
        if len(set(c)) != len(c):
            raise DegenerateSimplex(f"cell {i} repeats a vertex")
        if any(not 0 <= v < len(verts) for v in c):
            raise DegenerateSimplex(f"cell {i} references a missing vertex")
    K = Complex(verts, cells)
    if K.dim > K.ambient_dim:
        raise DegenerateSimplex("cell dimension exceeds ambient dimension")
    for c in K.cells:
        _check_nondegenerate(K.cell_points(c.id), c.id)
    if check_intersections:
        keys = [tuple(sorted(c.vertex_ids)) for c in K.cells]
        if len(set(keys)) != len(keys):
            raise ImproperIntersection("two cells span the same vertex set")
        boxes = [_bbox(K.cell_points(c.id)) for c in K.cells]
        for a, b in combinations(K.cells, 2):
            (lo_a, hi_a), (lo_b, hi_b) = boxes[a.id], boxes[b.id]
            if any(h1 < l2 or h2 < l1 for l1, h1, l2, h2 in zip(lo_a, hi_a, lo_b, hi_b)):
                continue
            if not _proper_pair(K, a, b):
                raise ImproperIntersection(f"cells {a.id} and {b.id} meet outside a common face")
    if strict and not K.is_pseudomanifold:
        bad = next(f for f, ids in K._facet_index.items() if len(ids) > 2)
        raise NonPseudomanifold(f"facet {bad} lies in more than two cells")
    return K


# -- star / link ------------------------------------------------------------

def _face_key(K: Complex, face: Iterable[int]) -> Face:
    key = tuple(sorted(face))
    if not key or key not in set(K.faces(len(key) - 1)):
        raise FaceNotFound(f"{key} is not a face of the complex")
    return key


def star(K: Complex, face: Iterable[int]) -> frozenset[Face]:
    """All simplices containing ``face``, together with their faces."""
    key = _face_key(K, face)
    out: set = set()
    for c in K.cells:
        s = tuple(sorted(c.vertex_ids))
        if set(key) <= set(s):
            for k in range(1, len(s) + 1):
                out.update(combinations(s, k))
    return frozenset(out)


def link(K: Complex, face: Iterable[int]) -> frozenset[Face]:
    """Simplices of the star that are disjoint from ``face``."""
    key = set(_face_key(K, face))
    return frozenset(f for f in star(K, key) if key.isdisjoint(f))


# -- orientation ------------------------------------------------------------

def orient(K: Complex) -> Complex:
    """Coherently orient a pseudomanifold.

    Each connected component is seeded from its lowest-id cell, keeping that
    cell's current sign, and signs propagate breadth-first across shared
    facets so that neighbours induce opposite orientations on them.
    Re-orienting a coherently oriented complex returns the same signs.
    """
    if not K.is_pseudomanifold:
        raise NonPseudomanifold("orientation requires every facet in at most two cells")
    signs: dict[int, int] = {}
    for comp in K.components():
        seed = comp[0]
        signs[seed] = K.cell(seed).orientation
        queue = deque([seed])
        while queue:
            a = queue.popleft()
            ca = Cell(a, K.cell(a).vertex_ids, signs[a])
            for pos in range(len(ca.vertex_ids)):
                facet = ca.facet(pos)
                for b in K.facet_cells(facet):
                    if b == a:
                        continue
                    cb = K.cell(b)
                    pos_b = next(i for i, v in enumerate(cb.vertex_ids) if v not in facet)
                    raw = Cell(b, cb.vertex_ids, 1).induced_sign(pos_b)
                    want = -ca.induced_sign(pos) * raw
                    if b in signs:
                        if signs[b] != want:
                            raise NonOrientable(f"orientation conflict across facet {tuple(sorted(facet))}")
                    else:
                        signs[b] = want
                        queue.append(b)
    return K.with_orientation([signs[c.id] for c in K.cells])


def is_coherent(K: Complex) -> bool:
    for facet, ids in K._facet_index.items():
        if len(ids) == 2:
            a, b = (K.cell(i) for i in ids)
            pa = next(i for i, v in enumerate(a.vertex_ids) if v not in facet)
            pb = next(i for i, v in enumerate(b.vertex_ids) if v not in facet)
            if a.induced_sign(pa) != -b.induced_sign(pb):
                return False
    return True


# -- barycentric geometry ---------------------------------------------------

def barycenter(cell: Cell) -> BaryPoint:
    k = len(cell.vertex_ids)
    return BaryPoint(cell.id, (Fraction(1, k),) * k)


def signed_relative_volume(points: Sequence[BaryPoint]) -> Fraction:
    ids = {p.cell_id for p in points}
    if len(ids) != 1:
        raise MixedCells("relative volume needs points of a single cell")
    if len(points) != len(points[0].weights):
        raise MixedCells(f"need {len(points[0].weights)} points, got {len(points)}")
    return _linalg.det([p.weights for p in points])


def relative_volume(points: Sequence[BaryPoint]) -> Fraction:
    """vol(<p_0 ... p_n>) / vol(cell), exactly, from barycentric weights."""
    return abs(signed_relative_volume(points))


def euclidean_volume_approx(points: Sequence[Sequence]) -> float:
    """k-volume of a simplex in R^N: sqrt(det Gram) / k!.  Display only."""
    pts = [as_point(p) for p in points]
    edges = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
    if not edges:
        return 0.0
    gram = [[sum(a * b for a, b in zip(e1, e2)) for e2 in edges] for e1 in edges]
    g = _linalg.det(gram)
    return math.sqrt(max(float(g), 0.0)) / math.factorial(len(edges))
