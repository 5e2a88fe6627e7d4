"""The ``DensityMatrix`` container shared by the reduction and spectral code."""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .exceptions import BudgetExceededError, InvalidInputError, NumericalError

EPS_HERM = 1e-12
EPS_NORM = 1e-10
EPS_PSD = 1e-10
MAX_ENTRIES = 2**26


def check_budget(n_entries: int, what: str) -> None:
    if n_entries > MAX_ENTRIES:
        raise BudgetExceededError(
            f"{what} needs {n_entries} entries, above the budget of {MAX_ENTRIES}"
        )


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Real symmetric, unit-trace matrix with a declared tensor factorization.

    ``factor_dims`` lists the local dimensions in the same order as the
    mixed-radix index: factor 0 is the most significant digit.

    Symmetry and trace are checked on construction. Positive
    semidefiniteness needs an eigendecomposition and is checked by
    :meth:`check_psd` (and by the entropy routines) instead.
    """

    entries: np.ndarray
    factor_dims: tuple[int, ...]

    def __post_init__(self):
        m = np.array(self.entries, dtype=float, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidInputError(f"density matrix must be square, got shape {m.shape}")
        dims = tuple(int(x) for x in (self.factor_dims or (m.shape[0],)))
        if any(x <= 0 for x in dims) or prod(dims) != m.shape[0]:
            raise InvalidInputError(f"factor_dims {dims} do not multiply to dim {m.shape[0]}")
        asym = np.max(np.abs(m - m.T)) if m.size else 0.0
        if asym > EPS_HERM:
            raise InvalidInputError(f"matrix is not symmetric (max deviation {asym:.3g})")
        tr = np.trace(m)
        if abs(tr - 1.0) > EPS_NORM:
            raise InvalidInputError(f"trace is {tr:.17g}, not 1")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "factor_dims", dims)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def eigvalsh(self) -> np.ndarray:
        """Eigenvalues in descending order."""
        return np.linalg.eigvalsh(self.entries)[::-1]

    def check_psd(self, tol: float = EPS_PSD) -> np.ndarray:
        """Raise :class:`NumericalError` if an eigenvalue is below ``-tol``; return the spectrum."""
        w = self.eigvalsh()
        if w[-1] < -tol:
            raise NumericalError(f"matrix is not positive semidefinite: min eigenvalue {w[-1]:.3g}")
        return w

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


def symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)
