"""Test complexes and cocycles with exact rational coordinates."""
from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations

from .documents import MeshDocument
from .exceptions import BadParams
from .forms import PCForm, pc_from_cocycle
from .simplicial import Complex, build_complex, orient

__all__ = [
    "circle_point", "grid_torus", "simplex_boundary", "square_disk", "moebius_strip",
    "random_cocycle", "perturb_cocycle", "uniform_cocycle", "generate", "GENERATORS",
]


def circle_point(angle: float, max_den: int = 1000) -> tuple[Fraction, Fraction]:
    """A rational point exactly on the unit circle, near ``angle``."""
    a = math.remainder(angle, 2 * math.pi)
    if abs(abs(a) - math.pi) < 1e-12:
        return Fraction(-1), Fraction(0)
    t = Fraction(math.tan(a / 2)).limit_denominator(max_den)
    d = 1 + t * t
    return (1 - t * t) / d, 2 * t / d


def _positive_int(name: str, value, least: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < least:
        raise BadParams(f"{name} must be an integer >= {least}, got {value!r}")
    return value


def grid_torus(m: int, k: int) -> Complex:
    """Polyhedral torus of revolution: an m x k vertex grid, 2mk triangles in R^3.

    Needs m, k >= 3: with a side of 2 the grid's two triangles over a square
    and its neighbour share all three vertices, which no simplicial complex allows.
    """
    m = _positive_int("m", m, 3)
    k = _positive_int("k", k, 3)
    major = [circle_point(2 * math.pi * i / m) for i in range(m)]
    minor = [circle_point(2 * math.pi * j / k) for j in range(k)]
    big, small = Fraction(3), Fraction(1)
    verts = []
    for j in range(k):
        cb, sb = minor[j]
        for i in range(m):
            ca, sa = major[i]
            rad = big + small * cb
            verts.append((ca * rad, sa * rad, small * sb))

    def vid(i: int, j: int) -> int:
        return (j % k) * m + (i % m)

    cells = []
    for j in range(k):
        for i in range(m):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)
            cells += [[a, b, c], [b, d, c]]
    return orient(build_complex(verts, cells))


def simplex_boundary(n: int) -> Complex:
    """Boundary of the standard (n+1)-simplex in R^(n+1): n+2 cells of dimension n."""
    n = _positive_int("n", n, 1)
    N = n + 1
    verts = [tuple(Fraction(0) for _ in range(N))]
    verts += [tuple(Fraction(int(i == j)) for i in range(N)) for j in range(N)]
    cells = [list(c) for c in combinations(range(N + 1), n + 1)]
    return orient(build_complex(verts, cells))


def square_disk(m: int) -> Complex:
    """The unit square cut into an m x m grid, each square split along its anti-diagonal."""
    m = _positive_int("m", m, 1)
    verts = [(Fraction(i, m), Fraction(j, m)) for j in range(m + 1) for i in range(m + 1)]

    def vid(i: int, j: int) -> int:
        return j * (m + 1) + i

    cells = []
    for j in range(m):
        for i in range(m):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)
            cells += [[a, b, c], [b, c, d]]
    return orient(build_complex(verts, cells))


MOEBIUS_VERTICES = ((8, 0, 3), (2, 8, -3), (-6, 5, 1), (-6, -5, 0), (2, -8, 0))


def moebius_strip() -> Complex:
    """The 5-vertex Moebius strip: triangles {i, i+1, i+2} mod 5, embedded in R^3.

    Returned unoriented, since it admits no coherent orientation.
    """
    cells = [[i, (i + 1) % 5, (i + 2) % 5] for i in range(5)]
    return build_complex(MOEBIUS_VERTICES, cells)


def random_cocycle(K: Complex, seed: int, total=1, spread: int = 9) -> PCForm:
    """Positive rationals with exactly the prescribed total."""
    total = Fraction(total)
    if total <= 0:
        raise BadParams("total must be positive")
    rng = random.Random(seed)
    raw = [rng.randint(1, spread) for _ in range(K.n_cells)]
    s = sum(raw)
    return pc_from_cocycle(K, [Fraction(x, s) * total for x in raw])


def uniform_cocycle(K: Complex, total=1) -> PCForm:
    total = Fraction(total)
    return pc_from_cocycle(K, [total / K.n_cells] * K.n_cells)


def perturb_cocycle(form: PCForm, seed: int, scale=Fraction(1, 2), den: int = 12) -> PCForm:
    """Add a random zero-sum rational perturbation, keeping every value positive.

    Each cell moves by at most ``scale`` times the smallest value.
    """
    rng = random.Random(seed)
    n = len(form.values)
    bump = [Fraction(rng.randint(-den, den), den) for _ in range(n)]
    mean = sum(bump, Fraction(0)) / n
    bump = [b - mean for b in bump]
    worst = max((abs(b) for b in bump), default=Fraction(0))
    if worst == 0:
        return form
    step = Fraction(scale) * min(form.values) / worst
    return pc_from_cocycle(form.complex, [v + step * b for v, b in zip(form.values, bump)])


GENERATORS = ("grid-torus", "simplex-boundary", "square-disk", "moebius", "random-cocycle")


def generate(kind: str, params: dict | None = None, base: MeshDocument | None = None) -> MeshDocument:
    """Build a mesh document by generator name.

    ``random-cocycle`` adds a cocycle named ``params["name"]`` (default
    ``"random"``) to ``base``; the other kinds build a fresh complex.
    """
    params = dict(params or {})
    try:
        if kind == "grid-torus":
            K = grid_torus(params.get("m", 3), params.get("k", params.get("m", 3)))
        elif kind == "simplex-boundary":
            K = simplex_boundary(params.get("n", 2))
        elif kind == "square-disk":
            K = square_disk(params.get("m", 1))
        elif kind == "moebius":
            K = moebius_strip()
        elif kind == "random-cocycle":
            if base is None:
                raise BadParams("random-cocycle needs a mesh to put the cocycle on")
            seed = params.get("seed", 0)
            if isinstance(seed, bool) or not isinstance(seed, int):
                raise BadParams("seed must be an integer")
            form = random_cocycle(base.complex, seed, params.get("total", 1))
            forms = dict(base.forms)
            forms[params.get("name", "random")] = form
            return MeshDocument(base.complex, forms)
        else:
            raise BadParams(f"unknown generator {kind!r}; choose from {', '.join(GENERATORS)}")
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, BadParams):
            raise
        raise BadParams(str(exc)) from exc
    forms: dict[str, PCForm] = {}
    if K.oriented:
        forms["uniform"] = uniform_cocycle(K, K.n_cells)
    return MeshDocument(K, forms)
