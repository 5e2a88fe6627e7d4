"""Finite-volume entangled Markov state vectors.

The state on sites ``0..N`` has amplitude
``sqrt(P(i0) P(i0->i1) ... P(i_{N-1}->i_N))`` on the basis string
``i0 i1 ... iN``. Strings are encoded in mixed radix with site 0 as the most
significant digit, so tracing out trailing sites is a reshape.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .density import EPS_NORM, MAX_ENTRIES as MAX_AMPLITUDES, DensityMatrix, check_budget
from .exceptions import InvalidInputError
from .model import TransitionKernel, InitialDistribution, _check_pair


@dataclass(frozen=True, eq=False)
class PureStateVector:
    num_sites: int
    alphabet_size: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=float, copy=True)
        if amps.shape != (self.alphabet_size**self.num_sites,):
            raise InvalidInputError(
                f"expected {self.alphabet_size}**{self.num_sites} amplitudes, got shape {amps.shape}"
            )
        norm2 = float(amps @ amps)
        if abs(norm2 - 1.0) > EPS_NORM:
            raise InvalidInputError(f"state has squared norm {norm2:.17g}, not 1")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def index(self, config: Sequence[int]) -> int:
        """Mixed-radix index of ``(i0, ..., iN)``."""
        if len(config) != self.num_sites:
            raise InvalidInputError(f"configuration has {len(config)} sites, expected {self.num_sites}")
        idx = 0
        for s in config:
            if not 0 <= s < self.alphabet_size:
                raise InvalidInputError(f"symbol {s} outside alphabet of size {self.alphabet_size}")
            idx = idx * self.alphabet_size + int(s)
        return idx

    def amplitude(self, config: Sequence[int] | str) -> float:
        if isinstance(config, str):
            config = [int(c) for c in config]
        return float(self.amplitudes[self.index(config)])

    def as_tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((self.alphabet_size,) * self.num_sites)


def chain_amplitudes(kernel_rows: np.ndarray, start: np.ndarray, n_steps: int) -> np.ndarray:
    """Amplitude vector of ``start`` (already square-rooted) extended by ``n_steps`` hops.

    The result has length ``len(start) * d**n_steps``.
    """
    d = kernel_rows.shape[0]
    root = np.sqrt(kernel_rows)
    amps = np.asarray(start, dtype=float)
    for _ in range(n_steps):
        # amps[prefix * d + last] -> amps[(prefix * d + last) * d + next]
        amps = (amps.reshape(-1, d)[:, :, None] * root[None, :, :]).reshape(-1)
    return amps


def build_state(kernel: TransitionKernel, init: InitialDistribution, N: int) -> PureStateVector:
    """Entangled Markov state on sites ``0..N``."""
    _check_pair(kernel, init)
    N = int(N)
    if N < 0:
        raise InvalidInputError(f"N must be non-negative, got {N}")
    d = kernel.alphabet_size
    check_budget(d ** (N + 1), f"state on {N + 1} sites with d={d}")
    amps = chain_amplitudes(kernel.rows, np.sqrt(init.probs), N)
    return PureStateVector(N + 1, d, amps)


def density_from_state(psi: PureStateVector) -> DensityMatrix:
    """Rank-one projector ``|psi><psi|``."""
    dim = psi.amplitudes.size
    check_budget(dim * dim, "density matrix")
    a = psi.amplitudes
    return DensityMatrix(np.outer(a, a), (psi.alphabet_size,) * psi.num_sites)
