"""Smooth monotone interpolation from a germ phi at 0 to the identity near R.

Construction for ``phi`` on ``[0, R]``:

* ``eps`` is where the graph of phi leaves the disc of radius R/4;
* ``h`` follows phi up to ``eps``, then the segment from ``(eps, phi(eps))``
  to ``(3R/4, 3R/4)``, then the identity;
* ``phi_bar(x) = integral of h(x - chi(x) y) rho_delta(y) dy`` with
  ``delta = eps/2`` and a cutoff ``chi`` that vanishes on ``[0, eps/3]`` and
  equals 1 from ``2 eps/3`` on.  Near 0 nothing is smoothed, so phi_bar
  agrees with phi there; past ``3R/4 + delta`` h is affine and the even kernel
  reproduces it, so phi_bar is the identity.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from ..exceptions import BadEndpoint, NotMonotone
from .mollifier import Fn1D, Mollifier, make_mollifier
from .quadrature import DEFAULT_TOL, adaptive_simpson_many

__all__ = [
    "smoothstep", "Interpolant", "interpolate_to_identity", "InterpolantFamily",
    "interpolate_family",
]


def smoothstep(s) -> np.ndarray:
    """C^2 ramp 6s^5 - 15s^4 + 10s^3, clipped to [0, 1]."""
    s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)
    return s * s * s * (s * (6 * s - 15) + 10)


@dataclass(frozen=True)
class Interpolant:
    phi: Fn1D
    R: float
    eps: float
    delta: float
    r: float
    slope: float
    mollifier: Mollifier
    tol: float = DEFAULT_TOL

    def g(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.phi_eps + self.slope * (x - self.eps)

    @property
    def phi_eps(self) -> float:
        return float(self.phi(np.array([self.eps]))[0])

    def h(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        knee = 0.75 * self.R
        out = np.where(x >= knee, x, self.g(x))
        low = x <= self.eps
        if np.any(low):
            out = out.copy()
            out[low] = self.phi(x[low])
        return out

    def chi(self, x) -> np.ndarray:
        third = self.eps / 3.0
        return smoothstep((np.asarray(x, dtype=float) - third) / third)

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        flat = x.ravel()
        c = self.chi(flat)
        out = self.h(flat)
        moving = np.flatnonzero(c > 0)
        if moving.size:
            xs, cs = flat[moving], c[moving]
            d = self.delta
            out[moving] = adaptive_simpson_many(
                lambda y, k: self.h(xs[k] - cs[k] * y) * self.mollifier(y),
                np.full(moving.shape, -d), np.full(moving.shape, d), self.tol,
            )
        return out.reshape(x.shape)

    def grid(self, n: int = 1001) -> np.ndarray:
        return np.linspace(0.0, self.R, n)

    def endpoint_errors(self, n: int = 1001) -> tuple[float, float]:
        """(max |phi_bar - phi| on [0, r], max |phi_bar - id| on [R - r, R])."""
        head = np.linspace(0.0, self.r, n)
        tail = np.linspace(self.R - self.r, self.R, n)
        return (
            float(np.max(np.abs(self(head) - self.phi(head)))),
            float(np.max(np.abs(self(tail) - tail))),
        )

    def smoothing_gap(self, n: int = 401) -> float:
        """max |phi_bar - h| on (eps - delta, eps + delta); reported, not bounded."""
        xs = np.linspace(max(self.eps - self.delta, 0.0), self.eps + self.delta, n)
        return float(np.max(np.abs(self(xs) - self.h(xs))))

    def write_csv(self, out=None, n: int = 201) -> str:
        xs = self.grid(n)
        rows = zip(xs, self.phi(xs), self.h(xs), self(xs))
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "phi", "h", "phi_bar"])
        for row in rows:
            w.writerow([repr(float(v)) for v in row])
        text = buf.getvalue()
        if out is not None:
            if hasattr(out, "write"):
                out.write(text)
            else:
                with open(out, "w", newline="") as fh:
                    fh.write(text)
        return text


def _as_fn(phi, R: float) -> Fn1D:
    if isinstance(phi, Fn1D):
        return phi
    return Fn1D(phi, 0.0, R, monotone=True, extend="natural")


def interpolate_to_identity(phi: Fn1D | Callable, R: float, tol: float = DEFAULT_TOL) -> Interpolant:
    """Build phi_bar: equal to phi on [0, r], the identity on [R - r, R], nondecreasing."""
    phi = _as_fn(phi, R)
    if not R > 0:
        raise BadEndpoint(f"R must be positive, got {R}")
    at0 = float(phi(np.array([0.0]))[0])
    if abs(at0) > 1e-12:
        raise BadEndpoint(f"phi(0) must be 0, got {at0}")
    probe = Fn1D(phi.func, 0.0, R, step=min(phi.step, R / 1000), extend="natural")
    if not probe.is_nondecreasing():
        raise NotMonotone("phi is not nondecreasing on [0, R]")
    quarter = R / 4.0

    def gap(e: float) -> float:
        return float(np.hypot(e, phi(np.array([e]))[0])) - quarter

    eps = quarter if gap(quarter) <= 0 else brentq(gap, 0.0, quarter, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    phi_eps = float(phi(np.array([eps]))[0])
    slope = (0.75 * R - phi_eps) / (0.75 * R - eps)
    delta = eps / 2.0
    r = min(eps / 3.0, R / 4.0)
    return Interpolant(phi, float(R), float(eps), delta, r, slope, make_mollifier(delta), tol)


@dataclass(frozen=True)
class InterpolantFamily:
    params: np.ndarray
    members: tuple[Interpolant, ...]

    def sample(self, n: int = 201) -> np.ndarray:
        """Rows: parameter values; columns: phi_bar on a common grid of [0, min R]."""
        R = min(m.R for m in self.members)
        xs = np.linspace(0.0, R, n)
        return np.vstack([m(xs) for m in self.members])

    def continuity(self, n: int = 201) -> float:
        """Largest finite-difference derivative in the parameter, sup over the grid."""
        if len(self.members) < 2:
            return 0.0
        vals = self.sample(n)
        dl = np.diff(self.params)
        return float(np.max(np.abs(np.diff(vals, axis=0)) / dl[:, None]))


def interpolate_family(
    phis: Sequence[Fn1D | Callable],
    params: Sequence[float],
    R: float | Sequence[float],
    tol: float = DEFAULT_TOL,
) -> InterpolantFamily:
    """Interpolate each member of a parameter family.

    Members equal to the identity come back as the identity; the caller is
    responsible for the family being the identity near the parameter boundary.
    """
    params = np.asarray(params, dtype=float)
    if len(phis) != params.size:
        raise ValueError("one function per parameter value is required")
    Rs = np.broadcast_to(np.asarray(R, dtype=float), params.shape)
    members = tuple(interpolate_to_identity(p, float(r), tol) for p, r in zip(phis, Rs))
    return InterpolantFamily(params, members)
