"""Equalizing two PC volume forms of the same total volume.

Repeatedly pick the cell with the largest excess ``D = V_2 - V_1`` and a
deficit cell, walk a path of adjacent cells between them, and push the excess
along the path one transfer step at a time.  Each step restores the giver to
its volume before the walk, so intermediate cells end unchanged and only the
endpoints move.  The start cell's excess becomes exactly zero, so each outer
iteration strictly shrinks the support of ``D``: at most ``|K^(n)|``
iterations.

The resulting chain psi_0, ..., psi_k satisfies
``(psi_0 o ... o psi_k)^* omega_2 = omega_1``; it is stored step by step and
evaluated pointwise rather than composed on a common refinement.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .exceptions import (
    AlreadyEqual,
    ComplexMismatch,
    ComponentVolumeMismatch,
    DimensionUnsupported,
    Disconnected,
    NotOriented,
    PLVolumeError,
    TotalVolumeMismatch,
)
from .forms import DiffCocycle, PCForm, diff_cocycle, pc_from_cocycle, pullback_cocycle
from .simplicial import BaryPoint, Complex, as_point
from .transfer import TransferMap, TransferSpec, solve_transfer, verify_transfer

__all__ = [
    "ChainStep", "TransferChain", "IterationRecord", "Certificate", "find_extremes",
    "adjacency_path", "shortest_path_strategy", "nearest_deficit_strategy", "STRATEGIES",
    "equalize", "evaluate_chain", "verify_chain",
]


@dataclass(frozen=True)
class ChainStep:
    iteration: int
    transfer: TransferMap
    before: tuple[Fraction, ...]
    after: tuple[Fraction, ...]


@dataclass(frozen=True)
class TransferChain:
    complex: Complex
    initial: PCForm
    final: PCForm
    steps: tuple[ChainStep, ...]

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class IterationRecord:
    source: int
    target: int
    path: tuple[int, ...]
    amount: Fraction


@dataclass
class Certificate:
    iterations: int
    records: list[IterationRecord]
    final_diff: tuple[Fraction, ...]
    exact: bool = True
    failures: list[str] = field(default_factory=list)
    bound: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures


def find_extremes(D: DiffCocycle | Sequence[Fraction]) -> tuple[int, int]:
    """(argmax D, argmin D), ties to the lowest cell id."""
    values = list(D.values if isinstance(D, DiffCocycle) else D)
    if not any(values):
        raise AlreadyEqual("difference cocycle is identically zero")
    hi = max(values)
    lo = min(values)
    return values.index(hi), values.index(lo)


def _distances(K: Complex, start: int) -> dict[int, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in K.neighbors(x):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def adjacency_path(K: Complex, start: int, end: int) -> list[int]:
    """Shortest path of adjacent cells; among those, the lexicographically smallest."""
    dist = _distances(K, end)
    if start not in dist:
        raise Disconnected(f"no path of adjacent cells from {start} to {end}")
    path = [start]
    while path[-1] != end:
        here = path[-1]
        path.append(min(y for y in K.neighbors(here) if dist.get(y) == dist[here] - 1))
    return path


PathStrategy = Callable[[Complex, DiffCocycle], list[int]]


def shortest_path_strategy(K: Complex, D: DiffCocycle) -> list[int]:
    """Max-excess cell to min-deficit cell along a shortest path."""
    hi, lo = find_extremes(D)
    return adjacency_path(K, hi, lo)


def nearest_deficit_strategy(K: Complex, D: DiffCocycle) -> list[int]:
    """Max-excess cell to the closest cell in deficit (ties to lowest id)."""
    hi, _ = find_extremes(D)
    dist = _distances(K, hi)
    deficits = [c for c in dist if D[c] < 0]
    if not deficits:
        raise Disconnected(f"no deficit cell reachable from {hi}")
    target = min(deficits, key=lambda c: (dist[c], c))
    return adjacency_path(K, hi, target)


STRATEGIES: dict[str, PathStrategy] = {
    "bfs": shortest_path_strategy,
    "nearest": nearest_deficit_strategy,
}


def _check_inputs(K: Complex, omega1: PCForm, omega2: PCForm, closed_only: bool) -> Complex:
    if omega1.complex != K or omega2.complex != K:
        raise ComplexMismatch("forms live on different complexes")
    if not K.oriented:
        raise NotOriented("equalization needs an oriented complex")
    if K.dim < 2:
        raise DimensionUnsupported("equalization needs dimension >= 2")
    if closed_only and not K.is_closed:
        raise PLVolumeError("complex has boundary and closed_only was requested")
    if omega1.total != omega2.total:
        raise TotalVolumeMismatch(f"total volumes differ: {omega1.total} vs {omega2.total}")
    for comp in K.components():
        t1 = sum(omega1[c] for c in comp)
        t2 = sum(omega2[c] for c in comp)
        if t1 != t2:
            raise ComponentVolumeMismatch(
                f"component containing cell {comp[0]} holds {t2}, needs {t1}", comp)
    return K


def equalize(
    K: Complex,
    omega1: PCForm,
    omega2: PCForm,
    strategy: str | PathStrategy = "bfs",
    closed_only: bool = False,
) -> tuple[TransferChain, Certificate]:
    """Build transfer maps pulling ``omega2`` back to ``omega1``.

    Manifolds with boundary are accepted unless ``closed_only`` is set; the
    transfers never move boundary points.
    """
    K = _check_inputs(K, omega1, omega2, closed_only)
    pick = STRATEGIES[strategy] if isinstance(strategy, str) else strategy
    current = omega2
    steps: list[ChainStep] = []
    iteration = 0
    while True:
        D = diff_cocycle(omega1, current)
        if D.is_zero:
            break
        iteration += 1
        if iteration > K.n_cells:
            raise PLVolumeError("iteration bound exceeded; strategy returned an invalid path")
        path = pick(K, D)
        if len(path) < 2 or D[path[0]] <= 0:
            raise PLVolumeError(f"strategy returned an unusable path {path}")
        restore = {c: current[c] for c in path}
        restore[path[0]] = omega1[path[0]]
        for giver, receiver in zip(path, path[1:]):
            step = solve_transfer(K, current, TransferSpec(receiver, giver, restore[giver]))
            after = pullback_cocycle(step, current)
            steps.append(ChainStep(iteration, step, current.values, after.values))
            current = after
    chain = TransferChain(K, omega2, current, tuple(steps))
    return chain, verify_chain(chain, omega1, omega2)


def verify_chain(chain: TransferChain, omega1: PCForm, omega2: PCForm) -> Certificate:
    """Re-verify a chain from scratch; failures name the offending step."""
    K = chain.complex
    failures: list[str] = []
    records: list[IterationRecord] = []
    if omega1.complex != K or omega2.complex != K:
        failures.append("forms do not live on the chain's complex")
        return Certificate(0, records, (), failures=failures, bound=K.n_cells)
    if chain.initial.values != omega2.values:
        failures.append("chain does not start at omega2")
    prev = omega2.values
    total = omega2.total
    last_iter = 0
    for i, st in enumerate(chain.steps):
        if st.before != prev:
            failures.append(f"step {i}: chain consistency broken (before != previous after)")
        if st.iteration not in (last_iter, last_iter + 1) or st.iteration < 1:
            failures.append(f"step {i}: iteration index out of order")
        try:
            before = pc_from_cocycle(K, st.before)
            after = pc_from_cocycle(K, st.after)
        except PLVolumeError as exc:
            failures.append(f"step {i}: invalid cocycle ({exc})")
            prev = st.after
            continue
        report = verify_transfer(st.transfer, before)
        if not report.passed:
            failures.append(f"step {i}: transfer verification failed ({', '.join(report.failures)})")
        else:
            expected = pullback_cocycle(st.transfer, before).values
            if expected != st.after:
                failures.append(f"step {i}: recorded cocycle does not match the pullback")
        if after.total != total:
            failures.append(f"step {i}: total volume changed")
        if st.iteration != last_iter:
            tr = st.transfer
            records.append(IterationRecord(tr.tau, tr.sigma, (tr.tau, tr.sigma),
                                           st.before[tr.tau] - tr.amount))
        else:
            r = records[-1]
            records[-1] = IterationRecord(r.source, st.transfer.sigma, r.path + (st.transfer.sigma,), r.amount)
        last_iter = st.iteration
        prev = st.after
    if chain.final.values != prev:
        failures.append("chain final form does not match the last step")
    final_diff = tuple(b - a for a, b in zip(omega1.values, prev))
    if any(final_diff):
        failures.append("final cocycle differs from omega1")
    if last_iter > K.n_cells:
        failures.append(f"{last_iter} iterations exceed the bound {K.n_cells}")
    return Certificate(last_iter, records, final_diff, True, failures, K.n_cells)


def evaluate_chain(chain: TransferChain, p, inverse: bool = False):
    """Evaluate Psi = psi_0 o ... o psi_k at a point (or Psi^-1 with ``inverse``).

    Psi carries omega_1 to omega_2: ``Psi^* omega_2 = omega_1``.
    """
    K = chain.complex
    bary = isinstance(p, BaryPoint)
    q = p if bary else K.locate(as_point(p))
    order = chain.steps if inverse else reversed(chain.steps)
    for st in order:
        q = st.transfer.evaluate(q, inverse)
    return q if bary else K.coords(q)
