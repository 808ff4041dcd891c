"""The exp(-1/(1-x^2)) bump, its rescalings, and 1-D convolution."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from ..exceptions import NonPositiveDelta
from .quadrature import DEFAULT_TOL, adaptive_simpson, adaptive_simpson_many

__all__ = ["Fn1D", "Mollifier", "bump", "bump_mass", "make_mollifier", "convolve"]

EDGE_CLAMP = 1e-12


def bump(x) -> np.ndarray:
    """rho_0(x) = exp(-1/(1-x^2)) on (-1, 1), zero elsewhere.

    Within ``EDGE_CLAMP`` of |x| = 1 the value is set to 0; the true value
    there is below exp(-10^11).
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0 - EDGE_CLAMP
    xi = x[inside]
    out[inside] = np.exp(-1.0 / (1.0 - xi * xi))
    return out


@lru_cache(maxsize=None)
def bump_mass() -> float:
    """The integral of rho_0 over [-1, 1] (about 0.443993816168)."""
    return adaptive_simpson(bump, -1.0, 1.0, tol=1e-14)


@dataclass(frozen=True)
class Fn1D:
    """A real function on ``[lo, hi]`` with declared metadata.

    ``extend`` says what happens outside the interval: ``"constant"`` clamps
    the argument, ``"natural"`` calls ``func`` anyway.
    """

    func: Callable[[np.ndarray], np.ndarray]
    lo: float = 0.0
    hi: float = 1.0
    monotone: bool = False
    smooth: bool = True
    step: float = 1e-3
    extend: str = "constant"

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.extend == "constant":
            x = np.clip(x, self.lo, self.hi)
        return np.asarray(self.func(x), dtype=float) * np.ones_like(x)

    def grid(self) -> np.ndarray:
        n = max(2, int(round((self.hi - self.lo) / self.step)) + 1)
        return np.linspace(self.lo, self.hi, n)

    def is_nondecreasing(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.diff(self(self.grid())) >= -atol))


@dataclass(frozen=True)
class Mollifier:
    """rho_delta(x) = rho(x / delta) / delta with rho = rho_0 / mass."""

    delta: float
    mass: float = field(default_factory=bump_mass)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return bump(x / self.delta) / (self.mass * self.delta)

    @property
    def support(self) -> tuple[float, float]:
        return -self.delta, self.delta

    def integral(self, tol: float = DEFAULT_TOL) -> float:
        return adaptive_simpson(self, -self.delta, self.delta, tol)


def make_mollifier(delta: float) -> Mollifier:
    if not delta > 0:
        raise NonPositiveDelta(f"delta must be positive, got {delta}")
    return Mollifier(float(delta))


def convolve(f: Fn1D, m: Mollifier, tol: float = DEFAULT_TOL) -> Fn1D:
    """(f * rho_delta)(x) = integral of f(x - y) rho_delta(y) over [-delta, delta]."""
    d = m.delta

    def conv(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        flat = x.ravel()
        vals = adaptive_simpson_many(
            lambda y, k: f(flat[k] - y) * m(y),
            np.full(flat.shape, -d), np.full(flat.shape, d), tol,
        )
        return vals.reshape(x.shape)

    return Fn1D(conv, f.lo, f.hi, f.monotone, True, f.step, "natural")
