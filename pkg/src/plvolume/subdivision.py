"""Stellar subdivision and the adjacent-pair conical subdivision.

Child cells keep the vertex order of their parent with some positions
replaced by new vertices, so each child's barycentric weight matrix (rows in
the parent's frame) has positive determinant and the child inherits the
parent's orientation sign unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping

from .exceptions import NonInteriorPoint, PLVolumeError
from .simplicial import BaryPoint, Cell, Complex, barycenter, signed_relative_volume

__all__ = [
    "SubdivisionRecord", "PairSubdivision", "stellar_subdivide", "pair_subdivide",
    "compose_records",
]


@dataclass(frozen=True)
class SubdivisionRecord:
    """A subdivision ``child`` of ``parent`` with its bookkeeping.

    ``piece_map`` sends each child cell to the parent cell containing it and
    ``new_vertices`` locates every vertex the child adds (ids continue after
    the parent's) as a point of some parent cell.
    """

    parent: Complex
    child: Complex
    piece_map: Mapping[int, int]
    new_vertices: tuple[tuple[int, BaryPoint], ...]

    def __post_init__(self):
        object.__setattr__(self, "piece_map", MappingProxyType(dict(self.piece_map)))

    def vertex_combination(self, vertex_id: int) -> dict[int, Fraction]:
        if vertex_id < len(self.parent.vertices):
            return {vertex_id: Fraction(1)}
        for vid, p in self.new_vertices:
            if vid == vertex_id:
                return self.parent.combination(p)
        raise KeyError(vertex_id)

    def pieces_of(self, parent_id: int) -> tuple[int, ...]:
        return tuple(sorted(c for c, p in self.piece_map.items() if p == parent_id))

    def piece_rows(self, child_id: int) -> tuple[tuple[Fraction, ...], ...]:
        """Barycentric weights (in the parent cell) of the child's vertices, in child order."""
        parent_id = self.piece_map[child_id]
        return tuple(
            self.parent.to_bary(parent_id, self.vertex_combination(v)).weights
            for v in self.child.cell(child_id).vertex_ids
        )

    def piece_points(self, child_id: int) -> tuple[BaryPoint, ...]:
        parent_id = self.piece_map[child_id]
        return tuple(BaryPoint(parent_id, row) for row in self.piece_rows(child_id))

    def relative_volume(self, child_id: int) -> Fraction:
        return abs(signed_relative_volume(self.piece_points(child_id)))

    def is_valid(self) -> bool:
        """Every piece nondegenerate and the pieces of each parent sum to volume 1."""
        totals: dict[int, Fraction] = {}
        for child_id, parent_id in self.piece_map.items():
            vol = self.relative_volume(child_id)
            if vol == 0:
                return False
            totals[parent_id] = totals.get(parent_id, Fraction(0)) + vol
        return set(totals) == {c.id for c in self.parent.cells} and all(t == 1 for t in totals.values())


def stellar_subdivide(K: Complex, at: Mapping[int, BaryPoint] | None = None) -> SubdivisionRecord:
    """Cone every top cell from an interior point (its barycenter by default).

    Lower-dimensional faces are left alone.  Children of a cell are ordered by
    the position of the vertex they replace.
    """
    at = at or {}
    verts = list(K.vertices)
    cells: list[Cell] = []
    piece_map: dict[int, int] = {}
    new: list[tuple[int, BaryPoint]] = []
    for c in K.cells:
        p = at.get(c.id) or barycenter(c)
        if p.cell_id != c.id or not p.is_interior:
            raise NonInteriorPoint(f"subdivision point for cell {c.id} is not interior to it")
        vid = len(verts)
        verts.append(K.coords(p))
        new.append((vid, p))
        for i in range(len(c.vertex_ids)):
            vs = list(c.vertex_ids)
            vs[i] = vid
            piece_map[len(cells)] = c.id
            cells.append(Cell(len(cells), tuple(vs), c.orientation))
    child = Complex(verts, cells, oriented=K.oriented)
    return SubdivisionRecord(K, child, piece_map, tuple(new))


@dataclass(frozen=True)
class PairSubdivision:
    """The conical subdivision of two adjacent cells sharing the facet ``theta``.

    ``tau`` is coned from ``u`` (interior to ``theta``); ``sigma`` is coned
    from ``v`` and its piece over ``theta`` is further coned from ``u``.  Piece
    dictionaries are keyed by the vertex of ``theta`` opposite the piece's
    base facet: ``tau_pieces[t] = <u, facet of tau opposite t>``,
    ``sigma_cone_pieces[t] = <v, facet of sigma opposite t>``,
    ``sigma_theta_pieces[t] = <v, u, facet of theta opposite t>``.
    """

    record: SubdivisionRecord
    sigma: int
    tau: int
    theta: tuple[int, ...]
    v_id: int
    u_id: int
    tau_pieces: Mapping[int, int]
    sigma_cone_pieces: Mapping[int, int]
    sigma_theta_pieces: Mapping[int, int]

    @property
    def v(self) -> BaryPoint:
        return self.record.new_vertices[0][1]

    @property
    def u(self) -> BaryPoint:
        return self.record.new_vertices[1][1]

    @property
    def child(self) -> Complex:
        return self.record.child


def _theta_interior(K: Complex, u: BaryPoint, sigma: int, tau: int, theta: tuple[int, ...]) -> dict[int, Fraction]:
    if u.cell_id not in (sigma, tau):
        raise NonInteriorPoint("the facet point must be given in one of the two cells")
    comb = K.combination(u)
    if set(comb) != set(theta):
        raise NonInteriorPoint("the facet point is not interior to the shared facet")
    return comb


def pair_subdivide(K: Complex, sigma: int, tau: int, v: BaryPoint, u: BaryPoint) -> PairSubdivision:
    """Build S_{v,u}(sigma, tau), leaving every other cell of ``K`` untouched.

    ``v`` must be interior to ``sigma``; ``u`` interior to the shared facet,
    given in the barycentric frame of either cell.
    """
    theta = K.shared_facet(sigma, tau)
    if v.cell_id != sigma or not v.is_interior:
        raise NonInteriorPoint(f"v must be interior to cell {sigma}")
    u_comb = _theta_interior(K, u, sigma, tau, theta)
    cs, ct = K.cell(sigma), K.cell(tau)
    v_id = len(K.vertices)
    u_id = v_id + 1
    u_sigma = K.to_bary(sigma, u_comb)
    verts = list(K.vertices) + [K.coords(v), K.coords(u_sigma)]

    cells: list[Cell] = []
    piece_map: dict[int, int] = {}

    def add(parent: Cell, vertex_ids: tuple[int, ...]) -> int:
        cid = len(cells)
        cells.append(Cell(cid, vertex_ids, parent.orientation))
        piece_map[cid] = parent.id
        return cid

    for c in K.cells:
        if c.id not in (sigma, tau):
            add(c, c.vertex_ids)
    tau_pieces, cone_pieces, theta_pieces = {}, {}, {}
    for pos, t in enumerate(ct.vertex_ids):
        if t in theta:
            vs = list(ct.vertex_ids)
            vs[pos] = u_id
            tau_pieces[t] = add(ct, tuple(vs))
    apex_pos = next(i for i, x in enumerate(cs.vertex_ids) if x not in theta)
    for pos, t in enumerate(cs.vertex_ids):
        if t in theta:
            vs = list(cs.vertex_ids)
            vs[pos] = v_id
            cone_pieces[t] = add(cs, tuple(vs))
    for pos, t in enumerate(cs.vertex_ids):
        if t in theta:
            vs = list(cs.vertex_ids)
            vs[apex_pos] = v_id
            vs[pos] = u_id
            theta_pieces[t] = add(cs, tuple(vs))

    child = Complex(verts, cells, oriented=K.oriented)
    record = SubdivisionRecord(K, child, piece_map, ((v_id, v), (u_id, u_sigma)))
    return PairSubdivision(
        record, sigma, tau, theta, v_id, u_id,
        MappingProxyType(tau_pieces), MappingProxyType(cone_pieces), MappingProxyType(theta_pieces),
    )


def compose_records(first: SubdivisionRecord, second: SubdivisionRecord) -> SubdivisionRecord:
    """Flatten ``second`` (a subdivision of ``first.child``) into a subdivision of ``first.parent``."""
    if second.parent != first.child:
        raise PLVolumeError("records do not chain: second.parent must be first.child")
    K = first.parent
    piece_map = {c: first.piece_map[p] for c, p in second.piece_map.items()}
    new: list[tuple[int, BaryPoint]] = list(first.new_vertices)
    for vid, p in second.new_vertices:
        comb: dict[int, Fraction] = {}
        for mid_vid, w in first.child.combination(p).items():
            for base_vid, w2 in first.vertex_combination(mid_vid).items():
                comb[base_vid] = comb.get(base_vid, Fraction(0)) + w * w2
        parent_cell = first.piece_map[p.cell_id]
        new.append((vid, K.to_bary(parent_cell, {k: x for k, x in comb.items() if x})))
    return SubdivisionRecord(K, second.child, piece_map, tuple(new))
