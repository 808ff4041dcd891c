"""scikit-learn style front end for the equalizer."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .equalizer import STRATEGIES, equalize, evaluate_chain
from .exceptions import ComplexMismatch, PLVolumeError
from .forms import PCForm, pc_from_cocycle
from .simplicial import Complex

__all__ = ["VolumeEqualizer", "check_form", "check_points"]


def check_form(form, K: Complex | None = None) -> PCForm:
    """Accept a PCForm, or a cocycle (list or mapping) when ``K`` is given."""
    if isinstance(form, PCForm):
        if K is not None and form.complex != K:
            raise ComplexMismatch("form lives on a different complex")
        return form
    if K is None:
        raise TypeError("a bare cocycle needs the complex; pass complex=...")
    return pc_from_cocycle(K, form)


def check_points(X, ambient_dim: int) -> list[tuple[Fraction, ...]]:
    """Rows of ``X`` as exact rational points; floats are taken at face value."""
    if isinstance(X, np.ndarray) and X.dtype != object:
        arr = np.asarray(X, dtype=float)
        if arr.ndim == 1:
            arr = arr[None, :]
        if arr.ndim != 2 or not np.all(np.isfinite(arr)):
            raise ValueError("X must be a finite 2-d array of points")
        rows = arr.tolist()
    else:
        rows = [list(r) for r in X]
        if rows and not isinstance(rows[0], list):
            rows = [rows]
    if any(len(r) != ambient_dim for r in rows):
        raise ValueError(f"points must have {ambient_dim} coordinates")
    return [tuple(Fraction(x) for x in r) for r in rows]


class VolumeEqualizer(TransformerMixin, BaseEstimator):
    """Learn a chain of transfer maps Psi with ``Psi^* omega_from = omega_to``.

    ``transform`` applies Psi, pushing ``omega_to``-distributed points to
    ``omega_from``-distributed ones; ``inverse_transform`` applies Psi^-1.

    Parameters
    ----------
    strategy : {"bfs", "nearest"}
        Path choice in each iteration.
    closed_only : bool
        Reject complexes with boundary.
    exact : bool
        Return points as tuples of Fractions instead of a float array.
    """

    def __init__(self, strategy: str = "bfs", closed_only: bool = False, exact: bool = False):
        self.strategy = strategy
        self.closed_only = closed_only
        self.exact = exact

    def fit(self, omega_from, omega_to=None, complex: Complex | None = None):
        if omega_to is None:
            raise TypeError("fit needs both omega_from and omega_to")
        if self.strategy not in STRATEGIES:
            raise PLVolumeError(f"unknown strategy {self.strategy!r}")
        src = check_form(omega_from, complex)
        dst = check_form(omega_to, src.complex)
        self.complex_ = src.complex
        self.chain_, self.certificate_ = equalize(self.complex_, dst, src, self.strategy, self.closed_only)
        self.n_steps_ = len(self.chain_)
        self.n_features_in_ = self.complex_.ambient_dim
        return self

    def _apply(self, X, inverse: bool):
        check_is_fitted(self, "chain_")
        pts = check_points(X, self.complex_.ambient_dim)
        out = [evaluate_chain(self.chain_, p, inverse) for p in pts]
        if self.exact:
            return out
        return np.array([[float(c) for c in p] for p in out], dtype=float).reshape(len(out), -1)

    def transform(self, X):
        return self._apply(X, False)

    def inverse_transform(self, X):
        return self._apply(X, True)

    def fit_transform(self, X, y=None, **fit_params):
        raise TypeError("fit takes volume forms and transform takes points; call them separately")
