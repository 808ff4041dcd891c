"""Moving a prescribed volume between two adjacent cells.

Given adjacent top cells ``sigma`` (receiver) and ``tau`` (giver) sharing the
facet ``theta``, and a target ``0 < A < V(tau)``, we build a simplicial map

    psi : S_{v,u_tau}(sigma, tau) -> S_{w,u_sigma}(tau, sigma)

sending ``v -> u_sigma`` and ``u_tau -> w`` and fixing every original vertex,
such that the pulled-back form is constant on ``tau`` with total ``A`` and
constant on ``sigma`` with total ``T = V(sigma) + V(tau) - A``.

Point choices (weights on the apex opposite ``theta`` / on each vertex of
``theta``; ``n`` the dimension):

* ``u_tau = u_sigma`` = barycenter of ``theta``
* ``w``: ``1 - A/V(tau)`` / ``A / (n V(tau))``
* ``v``: ``(V(tau) - A)/T`` / ``V(sigma) / (n T)``

The shipped closed forms are cross-checked against the general affine
solve and, more importantly, every map is checked by :func:`verify_transfer`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Mapping

from . import _linalg
from .exceptions import (
    ComplexMismatch,
    DegenerateSolve,
    DimensionUnsupported,
    PointOutsideComplex,
    SpecOutOfRange,
)
from .forms import PCForm
from .simplicial import BaryPoint, Complex, as_point, as_scalar
from .subdivision import PairSubdivision, pair_subdivide

__all__ = [
    "TransferSpec", "TransferMap", "VerificationReport", "solve_transfer",
    "verify_transfer", "evaluate_transfer",
]


@dataclass(frozen=True)
class TransferSpec:
    """Give volume from ``tau`` to its neighbour ``sigma`` until ``tau`` holds ``amount``."""

    sigma: int
    tau: int
    amount: Fraction

    def __post_init__(self):
        object.__setattr__(self, "amount", as_scalar(self.amount))


@dataclass(frozen=True)
class TransferMap:
    complex: Complex
    sigma: int
    tau: int
    amount: Fraction
    theta: tuple[int, ...]
    v: BaryPoint
    w: BaryPoint
    u_sigma: BaryPoint
    u_tau: BaryPoint
    volumes_before: tuple[Fraction, Fraction]
    source: PairSubdivision = field(init=False, repr=False, compare=False)
    target: PairSubdivision = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        K = self.complex
        object.__setattr__(self, "source", pair_subdivide(K, self.sigma, self.tau, self.v, self.u_tau))
        object.__setattr__(self, "target", pair_subdivide(K, self.tau, self.sigma, self.w, self.u_sigma))

    @property
    def result_volumes(self) -> tuple[Fraction, Fraction]:
        vs, vt = self.volumes_before
        return vs + vt - self.amount, self.amount

    @cached_property
    def correspondence(self) -> Mapping[int, int]:
        """Source child cell id -> target child cell id."""
        src, dst = self.source, self.target
        corr = {c: c for c in range(self.complex.n_cells - 2)}
        for t in self.theta:
            corr[src.tau_pieces[t]] = dst.sigma_cone_pieces[t]
            corr[src.sigma_cone_pieces[t]] = dst.tau_pieces[t]
            corr[src.sigma_theta_pieces[t]] = dst.sigma_theta_pieces[t]
        return MappingProxyType(corr)

    @cached_property
    def vertex_map(self) -> Mapping[int, int]:
        m = {i: i for i in range(len(self.complex.vertices))}
        m[self.source.v_id] = self.target.u_id
        m[self.source.u_id] = self.target.v_id
        return MappingProxyType(m)

    def image_rows(self, child_id: int) -> tuple[tuple[Fraction, ...], ...]:
        """Weights of psi(source piece) vertices in the image's parent frame, in source order."""
        dst = self.target.record
        img = self.correspondence[child_id]
        parent = dst.piece_map[img]
        return tuple(
            self.complex.to_bary(parent, dst.vertex_combination(self.vertex_map[vid])).weights
            for vid in self.source.child.cell(child_id).vertex_ids
        )

    def image_volume(self, child_id: int, omega2: PCForm) -> Fraction:
        dst = self.target.record
        img = self.correspondence[child_id]
        return omega2[dst.piece_map[img]] * dst.relative_volume(img)

    def pulled_back_volumes(self, omega2: PCForm) -> dict[int, Fraction]:
        src = self.source.record
        return {
            cell: sum((self.image_volume(c, omega2) for c in src.pieces_of(cell)), Fraction(0))
            for cell in (self.sigma, self.tau)
        }

    @cached_property
    def _evaluators(self):
        # per direction and parent cell: (inverse of piece rows, image rows, image parent)
        out = {}
        for inverse in (False, True):
            src = self.target if inverse else self.source
            corr = self.correspondence
            if inverse:
                corr = {b: a for a, b in corr.items()}
                vmap = {b: a for a, b in self.vertex_map.items()}
            else:
                vmap = self.vertex_map
            dst = self.source if inverse else self.target
            table = {}
            for parent in (self.sigma, self.tau):
                entries = []
                for child in src.record.pieces_of(parent):
                    rows = src.record.piece_rows(child)
                    img = corr[child]
                    img_parent = dst.record.piece_map[img]
                    img_rows = [
                        self.complex.to_bary(img_parent, dst.record.vertex_combination(vmap[vid])).weights
                        for vid in src.child.cell(child).vertex_ids
                    ]
                    entries.append((child, _linalg.inverse(rows), img_rows, img_parent))
                table[parent] = entries
            out[inverse] = table
        return out

    def evaluate(self, p: BaryPoint, inverse: bool = False) -> BaryPoint:
        if p.cell_id not in (self.sigma, self.tau):
            return p
        for _child, inv, img_rows, img_parent in self._evaluators[inverse][p.cell_id]:
            lam = _linalg.vecmat(p.weights, inv)
            if all(x >= 0 for x in lam):
                return BaryPoint(img_parent, tuple(_linalg.vecmat(lam, img_rows)))
        raise PointOutsideComplex("point not covered by the subdivision pieces")


def _affine_cone_point(n_vertices: int, targets: Mapping[int, Fraction]) -> tuple[Fraction, ...]:
    """Solve for the point x of a cell with rel.vol(<x, facet opposite k>) = targets[k].

    Each relative volume is affine in x (a determinant with x as one row), so
    the coefficients come from evaluating at the cell's vertices.
    """
    basis = [tuple(Fraction(int(i == j)) for j in range(n_vertices)) for i in range(n_vertices)]
    rows = []
    for k in range(n_vertices):
        rows.append([
            _linalg.det([basis[j] if i == k else basis[i] for i in range(n_vertices)])
            for j in range(n_vertices)
        ])
    try:
        x = _linalg.solve(rows, [targets[k] for k in range(n_vertices)])
    except ZeroDivisionError as exc:
        raise DegenerateSolve("singular volume constraint system") from exc
    if sum(x) != 1:
        raise DegenerateSolve("volume constraints are inconsistent")
    return tuple(x)


def _cone_targets(cell_ids: tuple[int, ...], theta: tuple[int, ...], apex: Fraction, each: Fraction) -> dict[int, Fraction]:
    return {pos: (each if vid in theta else apex) for pos, vid in enumerate(cell_ids)}


def solve_transfer(K: Complex, omega2: PCForm, spec: TransferSpec) -> TransferMap:
    if omega2.complex != K:
        raise ComplexMismatch("the form does not live on this complex")
    n = K.dim
    if n < 2:
        raise DimensionUnsupported("volume transfer needs dimension >= 2")
    sigma, tau, A = spec.sigma, spec.tau, spec.amount
    theta = K.shared_facet(sigma, tau)
    vs, vt = omega2[sigma], omega2[tau]
    if not 0 < A < vt:
        raise SpecOutOfRange(f"amount {A} outside (0, {vt})")
    T = vs + vt - A
    cs, ct = K.cell(sigma), K.cell(tau)

    u_tau = _affine_cone_point(n + 1, _cone_targets(ct.vertex_ids, theta, Fraction(0), Fraction(1, n)))
    w = _affine_cone_point(n + 1, _cone_targets(ct.vertex_ids, theta, (vt - A) / vt, A / (n * vt)))
    v = _affine_cone_point(n + 1, _cone_targets(cs.vertex_ids, theta, (vt - A) / T, vs / (n * T)))
    u_sigma = _affine_cone_point(n + 1, _cone_targets(cs.vertex_ids, theta, Fraction(0), Fraction(1, n)))

    # closed forms: u's are the barycenter of theta
    bary_theta = {t: Fraction(1, n) for t in theta}
    if (K.combination(BaryPoint(tau, u_tau)) != bary_theta
            or K.combination(BaryPoint(sigma, u_sigma)) != bary_theta):
        raise DegenerateSolve("facet points disagree with the barycenter of theta")

    pv, pw = BaryPoint(sigma, v), BaryPoint(tau, w)
    if not (pv.is_interior and pw.is_interior):
        raise DegenerateSolve("solved points are not interior")
    return TransferMap(
        K, sigma, tau, A, theta, pv, pw, BaryPoint(sigma, u_sigma), BaryPoint(tau, u_tau), (vs, vt),
    )


@dataclass
class VerificationReport:
    checks: dict[str, bool]
    details: dict[str, str]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def failures(self) -> list[str]:
        return [k for k, ok in self.checks.items() if not ok]


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def verify_transfer(step: TransferMap, omega2: PCForm) -> VerificationReport:
    """Exact re-check of a transfer step against the form it was solved on.

    Independent of how the points were found: everything is recomputed from
    the two pair subdivisions, the vertex map and piece volumes.
    """
    K = step.complex
    checks: dict[str, bool] = {}
    details: dict[str, str] = {}
    src, dst = step.source.record, step.target.record
    corr, vmap = step.correspondence, step.vertex_map

    checks["same_complex"] = omega2.complex == K
    checks["fresh"] = (omega2[step.sigma], omega2[step.tau]) == step.volumes_before
    checks["amount_in_range"] = 0 < step.amount < step.volumes_before[1]

    # (i) identity on the boundary of sigma ∪ tau
    n_orig = len(K.vertices)
    checks["vertices_fixed"] = all(vmap[i] == i for i in range(n_orig)) and all(
        vmap[i] >= n_orig for i in (step.source.v_id, step.source.u_id)
    )
    outer = []
    for cid in (step.sigma, step.tau):
        cell = K.cell(cid)
        outer += [tuple(sorted(cell.facet(p))) for p in range(len(cell.vertex_ids))]
    outer = [f for f in outer if f != step.theta]
    src_faces = set(step.source.child.faces(K.dim - 1))
    dst_faces = set(step.target.child.faces(K.dim - 1))
    checks["boundary_fixed"] = all(f in src_faces and f in dst_faces for f in outer)

    # simplicial bijection between the two subdivisions
    checks["bijection"] = (
        sorted(corr) == list(range(src.child.n_cells))
        and sorted(corr.values()) == list(range(dst.child.n_cells))
    )
    checks["simplicial"] = all(
        sorted(vmap[v] for v in src.child.cell(a).vertex_ids) == sorted(dst.child.cell(b).vertex_ids)
        for a, b in corr.items()
    )
    checks["untouched_cells_fixed"] = all(
        corr[c] == c and src.piece_map[c] == dst.piece_map[c]
        and src.child.cell(c).vertex_ids == dst.child.cell(c).vertex_ids
        for c in range(K.n_cells - 2)
    )
    checks["source_tiles"] = src.is_valid()
    checks["target_tiles"] = dst.is_valid()

    # orientation preserved piece by piece
    ok = True
    for a in src.pieces_of(step.sigma) + src.pieces_of(step.tau):
        s_src = K.cell(src.piece_map[a]).orientation * _sign(_linalg.det(src.piece_rows(a)))
        img_parent = dst.piece_map[corr[a]]
        s_img = K.cell(img_parent).orientation * _sign(_linalg.det(step.image_rows(a)))
        ok &= s_src == s_img and s_src != 0
    checks["orientation_preserved"] = ok

    # (ii) constant pulled-back density on each original cell, (iii) totals
    targets = {step.tau: step.amount, step.sigma: step.result_volumes[0]}
    for name, cell in (("tau", step.tau), ("sigma", step.sigma)):
        ratios = []
        total = Fraction(0)
        for a in src.pieces_of(cell):
            image = step.image_volume(a, omega2)
            total += image
            ratios.append(image / src.relative_volume(a))
        checks[f"constant_on_{name}"] = len(set(ratios)) == 1
        checks[f"volume_on_{name}"] = total == targets[cell] and set(ratios) == {targets[cell]}
        details[f"ratios_{name}"] = ", ".join(str(r) for r in ratios)
        details[f"volume_{name}"] = str(total)
    return VerificationReport(checks, details)


def evaluate_transfer(step: TransferMap, p, inverse: bool = False):
    """Apply psi (or its inverse) to a point of |K|.

    ``p`` may be a :class:`BaryPoint` (returned as one) or ambient coordinates,
    located in the lowest-id containing cell (returned as coordinates).
    """
    K = step.complex
    if isinstance(p, BaryPoint):
        return step.evaluate(p, inverse)
    bp = K.locate(as_point(p))
    return K.coords(step.evaluate(bp, inverse))
