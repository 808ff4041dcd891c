"""Float-based numerics: mollifier, monotone interpolation, fiber rescaling."""
from .fiber import FiberRescale, fiber_rescale
from .interpolate import (
    Interpolant,
    InterpolantFamily,
    interpolate_family,
    interpolate_to_identity,
    smoothstep,
)
from .mollifier import Fn1D, Mollifier, bump, bump_mass, convolve, make_mollifier
from .quadrature import adaptive_simpson, adaptive_simpson_many

__all__ = [
    "FiberRescale", "fiber_rescale", "Interpolant", "InterpolantFamily",
    "interpolate_family", "interpolate_to_identity", "smoothstep", "Fn1D", "Mollifier",
    "bump", "bump_mass", "convolve", "make_mollifier", "adaptive_simpson",
    "adaptive_simpson_many",
]
