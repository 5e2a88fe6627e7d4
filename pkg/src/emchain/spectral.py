"""Spectra and entropies of reduced states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import EPS_NORM, EPS_PSD, DensityMatrix
from .exceptions import InvalidInputError, NumericalError
from .model import InitialDistribution, TransitionKernel, is_stationary
from .reduction import rho_N

EPS_PURE = 1e-9
RANK_TOL = 1e-12


def log_fn(base):
    """Return ``log`` in the requested base; ``base`` is 2, ``"2"``, ``"e"`` or ``math.e``."""
    if base in (2, "2", 2.0):
        return np.log2
    if base in ("e", math.e):
        return np.log
    raise InvalidInputError(f"log base must be 2 or 'e', got {base!r}")


@dataclass(frozen=True, eq=False)
class SpectralSummary:
    eigenvalues: np.ndarray  # descending
    entropy: float
    is_pure: bool

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.eigenvalues > RANK_TOL))


def entropy_from_spectrum(eigenvalues, base="e") -> float:
    """``-sum l log l`` with ``0 log 0 = 0``; eigenvalues are clamped to ``[0, 1]``."""
    lam = np.clip(np.asarray(eigenvalues, dtype=float), 0.0, 1.0)
    lam = lam[lam > 0]
    return float(max(0.0, -np.sum(lam * log_fn(base)(lam))))


def spectral_summary(eigenvalues, base="e") -> SpectralSummary:
    w = np.sort(np.asarray(eigenvalues, dtype=float))[::-1]
    if w.size and w[-1] < -EPS_PSD:
        raise NumericalError(f"negative eigenvalue {w[-1]:.3g} beyond tolerance")
    if abs(w.sum() - 1.0) > EPS_NORM:
        raise NumericalError(f"eigenvalues sum to {w.sum():.17g}, not 1")
    w.flags.writeable = False
    return SpectralSummary(w, entropy_from_spectrum(w, base), bool(w[0] >= 1.0 - EPS_PURE))


def von_neumann_entropy(rho: DensityMatrix, base="e") -> SpectralSummary:
    """Spectrum and von Neumann entropy ``-tr rho log rho`` of ``rho``.

    Raises
    ------
    NumericalError
        If ``rho`` has an eigenvalue below ``-1e-10``.
    """
    return spectral_summary(rho.eigvalsh(), base)


def binary_entropy(p: float, base="e") -> float:
    return entropy_from_spectrum([p, 1.0 - p], base)


def shannon_entropy_density(kernel: TransitionKernel, init: InitialDistribution, base="e") -> float:
    """Entropy rate ``-sum_i P(i) sum_j P(i->j) log P(i->j)`` of a stationary chain."""
    if not is_stationary(kernel, init):
        raise InvalidInputError("entropy density formula requires a stationary initial distribution")
    P = kernel.rows
    log = log_fn(base)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(P > 0, P * log(np.where(P > 0, P, 1.0)), 0.0)
    return float(max(0.0, -init.probs @ terms.sum(axis=1)))


@dataclass(frozen=True)
class EntropyBoundRow:
    N: int
    entropy: float
    bound: float
    density: float
    rank: int

    @property
    def holds(self) -> bool:
        return self.entropy <= self.bound + 1e-9


@dataclass(frozen=True)
class EntropyBoundReport:
    rows: tuple[EntropyBoundRow, ...]

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.rows)

    @property
    def entropies(self) -> np.ndarray:
        return np.array([r.entropy for r in self.rows])

    @property
    def densities(self) -> np.ndarray:
        return np.array([r.density for r in self.rows])


def check_entropy_bound(
    kernel: TransitionKernel, init: InitialDistribution, N_max: int, base="e"
) -> EntropyBoundReport:
    """Entropy of ``rho_N`` for ``N = 0..N_max`` against the ``log d`` bound.

    Each row also records the mean entropy ``S / (N + 1)``.
    """
    bound = float(log_fn(base)(kernel.alphabet_size))
    rows = []
    for N in range(int(N_max) + 1):
        s = von_neumann_entropy(rho_N(kernel, init, N), base)
        rows.append(EntropyBoundRow(N, s.entropy, bound, s.entropy / (N + 1), s.rank))
    return EntropyBoundReport(tuple(rows))
