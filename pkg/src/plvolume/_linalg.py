"""Exact dense linear algebra over the rationals.

Matrices are lists of rows of ``Fraction``.  Sizes stay tiny (at most a few
dozen rows), so plain Gaussian elimination is the right tool.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence[Fraction]]


def det(m: Matrix) -> Fraction:
    a = [list(row) for row in m]
    n = len(a)
    result = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            result = -result
        piv = a[c][c]
        result *= piv
        for r in range(c + 1, n):
            f = a[r][c] / piv
            if f:
                row_r, row_c = a[r], a[c]
                for k in range(c + 1, n):
                    row_r[k] -= f * row_c[k]
    return result


def rank(m: Matrix) -> int:
    a = [list(row) for row in m]
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(r + 1, rows):
            f = a[i][c] / a[r][c]
            if f:
                for k in range(c, cols):
                    a[i][k] -= f * a[r][k]
        r += 1
        if r == rows:
            break
    return r


def inverse(m: Matrix) -> list[list[Fraction]]:
    """Gauss-Jordan inverse; raises ZeroDivisionError on a singular matrix."""
    n = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                row_c = a[c]
                a[r] = [x - f * y for x, y in zip(a[r], row_c)]
    return [row[n:] for row in a]


def solve(m: Matrix, rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve the square system ``m x = rhs`` exactly."""
    n = len(m)
    a = [list(row) + [rhs[i]] for i, row in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n] for row in a]


def vecmat(v: Sequence[Fraction], m: Matrix) -> list[Fraction]:
    """Row vector times matrix."""
    cols = len(m[0])
    out = [Fraction(0)] * cols
    for vi, row in zip(v, m):
        if vi:
            for j in range(cols):
                out[j] += vi * row[j]
    return out


def lp_max(c: Sequence[Fraction], a_eq: Matrix, b_eq: Sequence[Fraction]) -> Fraction | None:
    """Maximize ``c.x`` subject to ``a_eq x = b_eq, x >= 0``.

    Returns the optimal value, ``None`` if infeasible.  Two-phase tableau
    simplex with Bland's rule, so it terminates without cycling.  Unbounded
    problems raise ``ValueError`` (callers only pose bounded ones).
    """
    m, n = len(a_eq), len(c)
    rows = []
    for i in range(m):
        row = [Fraction(x) for x in a_eq[i]]
        rhs = Fraction(b_eq[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        rows.append(row + [Fraction(int(i == j)) for j in range(m)] + [rhs])
    basis = list(range(n, n + m))
    width = n + m

    def pivot(r: int, col: int) -> None:
        piv = rows[r][col]
        rows[r] = [x / piv for x in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        basis[r] = col

    def run(obj: list[Fraction], allowed: range) -> Fraction:
        while True:
            entering = None
            for j in allowed:
                if j in basis:
                    continue
                rc = obj[j] - sum(obj[basis[i]] * rows[i][j] for i in range(len(rows)))
                if rc > 0:
                    entering = j
                    break
            if entering is None:
                return sum(obj[basis[i]] * rows[i][-1] for i in range(len(rows)))
            best = None
            for i in range(len(rows)):
                if rows[i][entering] > 0:
                    ratio = rows[i][-1] / rows[i][entering]
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                raise ValueError("unbounded linear program")
            pivot(best[1], entering)

    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    if run(phase1, range(width)) < 0:
        return None
    # drive zero-valued artificials out of the basis; drop redundant rows
    i = 0
    while i < len(rows):
        if basis[i] >= n:
            col = next((j for j in range(n) if rows[i][j] != 0), None)
            if col is None:
                del rows[i]
                del basis[i]
                continue
            pivot(i, col)
        i += 1
    obj = [Fraction(x) for x in c] + [Fraction(0)] * m
    return run(obj, range(n))
