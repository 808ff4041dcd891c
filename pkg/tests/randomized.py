"""Random rational instances: adjacent cell pairs and cocycles."""
from __future__ import annotations

import random
from fractions import Fraction

from oracles import leibniz_det

from plvolume import build_complex, orient, pc_from_cocycle


def rand_rational(rng: random.Random, lo: int = -6, hi: int = 6, den: int = 5) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))


def _side(theta, p) -> Fraction:
    rows = [[Fraction(a) - Fraction(b) for a, b in zip(q, theta[0])] for q in theta[1:]]
    rows.append([Fraction(a) - Fraction(b) for a, b in zip(p, theta[0])])
    return leibniz_det(rows)


def random_pair(rng: random.Random, n: int):
    """Two n-simplices in R^n sharing a facet, apexes on opposite sides.

    Returns (complex, sigma_id, tau_id) with shuffled vertex orders.
    """
    while True:
        theta = [tuple(rand_rational(rng) for _ in range(n)) for _ in range(n)]
        a = tuple(rand_rational(rng) for _ in range(n))
        b = tuple(rand_rational(rng) for _ in range(n))
        sa, sb = _side(theta, a), _side(theta, b)
        if sa == 0 or sb == 0 or (sa > 0) == (sb > 0):
            continue
        verts = theta + [a, b]
        ids_theta = list(range(n))
        c0 = ids_theta + [n]
        c1 = ids_theta + [n + 1]
        rng.shuffle(c0)
        rng.shuffle(c1)
        K = orient(build_complex(verts, [c0, c1]))
        if rng.random() < 0.5:
            return K, 0, 1
        return K, 1, 0


def random_cocycle_values(rng: random.Random, k: int, den: int = 7):
    return [Fraction(rng.randint(1, 4 * den), rng.randint(1, den)) for _ in range(k)]


def random_transfer_case(rng: random.Random, n: int):
    K, sigma, tau = random_pair(rng, n)
    form = pc_from_cocycle(K, random_cocycle_values(rng, 2))
    vt = form[tau]
    A = vt * Fraction(rng.randint(1, 98), 99)
    return K, form, sigma, tau, A
