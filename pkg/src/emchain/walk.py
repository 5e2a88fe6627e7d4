"""Entangled Markov chains on the integer lattice.

With a localized start and hopping range ``V`` only the site-``N``
marginal and the boundary matrix of site ``N+1`` are needed; both live on an
interval that grows by ``2V`` sites per step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .density import DensityMatrix, symmetrize
from .exceptions import InvalidInputError
from .model import EPS_STOCH, LatticeWalkKernel, check_probability_vector
from .spectral import log_fn, von_neumann_entropy


@dataclass(frozen=True, eq=False)
class WalkState:
    """Marginal ``Pt`` of site ``step`` on the interval ``[lo, lo + len(marginal) - 1]``."""

    step: int
    lo: int
    marginal: np.ndarray

    def __post_init__(self):
        p = np.array(self.marginal, dtype=float, copy=True)
        if p.ndim != 1 or p.size == 0 or np.any(p < 0):
            raise InvalidInputError("marginal must be a non-empty non-negative vector")
        if abs(p.sum() - 1.0) > max(1, self.step) * EPS_STOCH:
            raise InvalidInputError(f"marginal sums to {p.sum():.17g}, not 1")
        p.flags.writeable = False
        object.__setattr__(self, "marginal", p)
        object.__setattr__(self, "lo", int(self.lo))
        object.__setattr__(self, "step", int(self.step))

    @property
    def hi(self) -> int:
        return self.lo + self.marginal.size - 1

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    @classmethod
    def localized(cls, init: Mapping[int, float] | int) -> "WalkState":
        """Initial state from ``{site: prob}`` or a single site (a delta)."""
        if isinstance(init, (int, np.integer)):
            init = {int(init): 1.0}
        init = {int(k): float(v) for k, v in init.items() if v != 0}
        if not init:
            raise InvalidInputError("initial distribution has empty support")
        lo, hi = min(init), max(init)
        p = np.zeros(hi - lo + 1)
        for k, v in init.items():
            p[k - lo] = v
        return cls(0, lo, check_probability_vector(p, "initial distribution"))


def step(state: WalkState, kernel: LatticeWalkKernel) -> WalkState:
    """Exact convolution of the marginal with the hopping distribution."""
    return WalkState(state.step + 1, state.lo - kernel.V, np.convolve(state.marginal, kernel.probs))


def _hop_amplitudes(n_from: int, kernel: LatticeWalkKernel) -> np.ndarray:
    # A[i, j] = sqrt(P(lo+i -> lo-V+j)), banded with the hop profile on each row.
    w = kernel.probs.size
    A = np.zeros((n_from, n_from + w - 1))
    root = np.sqrt(kernel.probs)
    for i in range(n_from):
        A[i, i : i + w] = root
    return A


def walk_sigma(state: WalkState, kernel: LatticeWalkKernel) -> tuple[DensityMatrix, np.ndarray]:
    """Boundary matrix of site ``step + 1`` and the site labels of its rows.

    ``sigma[j, k] = sum_i Pt(i) sqrt(P(i->j)) sqrt(P(i->k))`` over the sites
    reachable at step ``step + 1``.
    """
    A = _hop_amplitudes(state.marginal.size, kernel)
    sigma = A.T @ (state.marginal[:, None] * A)
    sites = np.arange(state.lo - kernel.V, state.hi + kernel.V + 1)
    return DensityMatrix(symmetrize(sigma), (sigma.shape[0],)), sites


@dataclass(frozen=True)
class WalkProfileRow:
    N: int
    support_size: int
    entropy: float
    bound: float
    density: float


def walk_entropy_profile(
    kernel: LatticeWalkKernel, init: WalkState | Mapping[int, float] | int, N_max: int, base="e"
) -> list[WalkProfileRow]:
    """Entropy of ``rho_N`` for ``N = 0..N_max`` with the bound ``log(|Lambda| + 2V(N+1))``.

    ``|Lambda|`` is the width of the initial support interval. ``support_size``
    is the dimension of the boundary matrix.
    """
    state = init if isinstance(init, WalkState) else WalkState.localized(init)
    if state.step != 0:
        raise InvalidInputError("profile must start from an initial (step 0) state")
    width0 = state.marginal.size
    log = log_fn(base)
    rows = []
    for N in range(int(N_max) + 1):
        sigma, _ = walk_sigma(state, kernel)
        s = von_neumann_entropy(sigma, base).entropy
        bound = float(log(width0 + 2 * kernel.V * (N + 1)))
        rows.append(WalkProfileRow(N, sigma.dim, s, bound, s / (N + 1)))
        if N < N_max:
            state = step(state, kernel)
    return rows


def walk_sigma_paths(
    init: Mapping[int, float], kernel: LatticeWalkKernel, N: int, sites: np.ndarray
) -> np.ndarray:
    """Reference boundary matrix by explicit enumeration of walk histories.

    Builds every path ``i0 .. i_{N+1}`` with nonzero amplitude
    ``sqrt(P(i0) P(i0->i1) ... P(i_N->i_{N+1}))`` and contracts over the
    first ``N + 1`` sites. Exponential in ``N``; intended for checks only.
    ``sites`` fixes the row labels of the returned matrix.
    """
    paths = {(int(k),): float(v) for k, v in init.items() if v > 0}
    for _ in range(int(N) + 1):
        nxt = {}
        for path, p in paths.items():
            for c, h in kernel.hopping.items():
                nxt[path + (path[-1] + c,)] = p * h
        paths = nxt
    by_prefix: dict[tuple, dict[int, float]] = {}
    for path, p in paths.items():
        by_prefix.setdefault(path[:-1], {})[path[-1]] = np.sqrt(p)
    pos = {int(s): n for n, s in enumerate(sites)}
    out = np.zeros((len(sites), len(sites)))
    for tail in by_prefix.values():
        for j, aj in tail.items():
            for k, ak in tail.items():
                out[pos[j], pos[k]] += aj * ak
    return out
