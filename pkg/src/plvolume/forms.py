"""Piecewise-constant volume forms, represented by their volume cocycles.

A constant top-degree form on an oriented simplex is fixed by its integral, so
a PC volume form on an oriented complex is stored as one positive rational per
top cell.  Densities (value per unit Euclidean volume) are derived floats.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, TYPE_CHECKING

from .exceptions import ComplexMismatch, NonPositiveVolume, NotOriented, StaleStep
from .simplicial import Complex, as_scalar

if TYPE_CHECKING:
    from .transfer import TransferMap

__all__ = [
    "PCForm", "DiffCocycle", "pc_from_cocycle", "total_volume", "diff_cocycle",
    "pullback_cocycle",
]


@dataclass(frozen=True)
class PCForm:
    complex: Complex
    values: tuple[Fraction, ...]

    @property
    def cocycle(self) -> dict[int, Fraction]:
        return dict(enumerate(self.values))

    @property
    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))

    def __getitem__(self, cell_id: int) -> Fraction:
        return self.values[cell_id]

    def densities(self) -> list[float]:
        return [float(v) / self.complex.euclidean_volume(i) for i, v in enumerate(self.values)]

    def replace(self, updates: Mapping[int, Fraction]) -> "PCForm":
        vals = list(self.values)
        for k, x in updates.items():
            vals[k] = x
        return pc_from_cocycle(self.complex, vals)


@dataclass(frozen=True)
class DiffCocycle:
    """D(cell) = V_2(cell) - V_1(cell)."""

    values: tuple[Fraction, ...]

    def __getitem__(self, cell_id: int) -> Fraction:
        return self.values[cell_id]

    def __len__(self):
        return len(self.values)

    @property
    def is_zero(self) -> bool:
        return not any(self.values)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.values) if x)


def pc_from_cocycle(K: Complex, values: Sequence | Mapping[int, object]) -> PCForm:
    if not K.oriented:
        raise NotOriented("PC volume forms live on oriented complexes; call orient() first")
    if isinstance(values, Mapping):
        if set(values) != set(range(K.n_cells)):
            raise NonPositiveVolume("the cocycle must assign a value to every cell")
        vals = tuple(as_scalar(values[i]) for i in range(K.n_cells))
    else:
        vals = tuple(as_scalar(x) for x in values)
        if len(vals) != K.n_cells:
            raise NonPositiveVolume(f"expected {K.n_cells} values, got {len(vals)}")
    bad = [i for i, x in enumerate(vals) if x <= 0]
    if bad:
        raise NonPositiveVolume(f"cells {bad} have non-positive volume")
    return PCForm(K, vals)


def total_volume(form: PCForm) -> Fraction:
    return form.total


def _same_complex(a: PCForm, b: PCForm) -> None:
    if a.complex is not b.complex and a.complex != b.complex:
        raise ComplexMismatch("forms live on different complexes")


def diff_cocycle(omega1: PCForm, omega2: PCForm) -> DiffCocycle:
    _same_complex(omega1, omega2)
    return DiffCocycle(tuple(b - a for a, b in zip(omega1.values, omega2.values)))


def pullback_cocycle(step: "TransferMap", omega2: PCForm) -> PCForm:
    """Cocycle of psi^* omega2 for a solved transfer step.

    Computed piece by piece: the pulled-back volume of an original cell is the
    omega2-volume of the images of its source pieces.
    """
    if omega2.complex != step.complex:
        raise ComplexMismatch("step was solved on a different complex")
    if (omega2[step.sigma], omega2[step.tau]) != step.volumes_before:
        raise StaleStep("the form changed on sigma or tau since the step was solved")
    sums = step.pulled_back_volumes(omega2)
    return omega2.replace(sums)
