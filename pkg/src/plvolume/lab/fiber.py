"""Fiberwise rescaling of a triangle with prescribed Jacobian determinant.

The triangle ``(v, p1, p2)`` is foliated by segments parallel to
``d = b - v`` (``b`` the barycenter), each starting on one of the two edges
through ``v``.  A point ``x`` with barycentric weights ``(alpha, beta, gamma)``
sits at parameter ``t = 3 min(beta, gamma)`` above its foot
``pi(x) = x - t d``, and is sent to

    phi_F(x) = pi(x) + (integral_0^t F(pi(x) + s d) ds) d.

Along each fiber the speed is ``F`` and across fibers the foot is unchanged,
so ``det D phi_F = F`` away from the fold line through ``v`` and ``b``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..exceptions import NonPositiveF

__all__ = ["FiberRescale", "fiber_rescale"]

Density = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FiberRescale:
    F: Density
    vertices: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def v(self) -> np.ndarray:
        return self.vertices[0]

    @property
    def b(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    @property
    def direction(self) -> np.ndarray:
        return self.b - self.v

    def barycentric(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        v, p1, p2 = self.vertices
        m = np.column_stack([p1 - v, p2 - v])
        bg = np.linalg.solve(m, (pts - v).T).T
        return np.column_stack([1.0 - bg.sum(axis=1), bg])

    def fiber(self, pts) -> tuple[np.ndarray, np.ndarray]:
        """(foot pi(x), parameter t(x)) for each point."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        w = self.barycentric(pts)
        t = 3.0 * np.minimum(w[:, 1], w[:, 2])
        return pts - t[:, None] * self.direction, t

    def fiber_integral(self, foot: np.ndarray, t: np.ndarray) -> np.ndarray:
        # Gauss-Legendre on [0, t] for every point at once
        s = 0.5 * t[:, None] * (self.nodes[None, :] + 1.0)
        q = foot[:, None, :] + s[..., None] * self.direction
        vals = self.F(q[..., 0], q[..., 1])
        return 0.5 * t * (vals * self.weights[None, :]).sum(axis=1)

    def __call__(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        single = pts.ndim == 1
        foot, t = self.fiber(pts)
        out = foot + self.fiber_integral(foot, t)[:, None] * self.direction
        return out[0] if single else out

    def jacobian_det(self, pts, h: float = 1e-6) -> np.ndarray:
        """Central finite-difference determinant of D phi_F."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        ex, ey = np.array([h, 0.0]), np.array([0.0, h])
        dx = (self(pts + ex) - self(pts - ex)) / (2 * h)
        dy = (self(pts + ey) - self(pts - ey)) / (2 * h)
        return dx[:, 0] * dy[:, 1] - dx[:, 1] * dy[:, 0]

    def grid(self, spacing: float = 1e-3, margin: float = 0.0) -> np.ndarray:
        """Points of a square lattice inside the triangle, at least ``margin``
        (in barycentric weight) from every edge and from the fold line."""
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        xs = np.arange(lo[0], hi[0] + spacing / 2, spacing)
        ys = np.arange(lo[1], hi[1] + spacing / 2, spacing)
        gx, gy = np.meshgrid(xs, ys)
        pts = np.column_stack([gx.ravel(), gy.ravel()])
        w = self.barycentric(pts)
        keep = (w.min(axis=1) > margin) & (np.abs(w[:, 1] - w[:, 2]) > margin)
        return pts[keep]

    def image_boundary(self, n: int = 4000) -> np.ndarray:
        """The image of the triangle's boundary, as a closed polyline."""
        corners = np.vstack([self.vertices, self.vertices[:1]])
        s = np.linspace(0.0, 1.0, n, endpoint=False)[:, None]
        edge_pts = [a + s * (c - a) for a, c in zip(corners[:-1], corners[1:])]
        return self(np.vstack(edge_pts))

    def image_area(self, n: int = 4000) -> float:
        p = self.image_boundary(n)
        x, y = p[:, 0], p[:, 1]
        return float(0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def fiber_rescale(F: Density, vertices=((0.0, 0.0), (1.0, 0.0), (0.0, 1.0)),
                  order: int = 24, check_spacing: float = 1e-2) -> FiberRescale:
    """Build phi_F on the triangle whose first vertex is the distinguished one.

    ``F`` is a vectorized positive function of ``(x, y)``; positivity is
    spot-checked on a lattice.
    """
    verts = np.asarray(vertices, dtype=float)
    if verts.shape != (3, 2):
        raise ValueError("a triangle in the plane is required")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    fr = FiberRescale(F, verts, nodes, weights)
    sample = np.vstack([fr.grid(check_spacing), verts])
    vals = np.asarray(F(sample[:, 0], sample[:, 1]), dtype=float) * np.ones(len(sample))
    if not np.all(vals > 0):
        raise NonPositiveF("F must be positive on the triangle")
    return fr
