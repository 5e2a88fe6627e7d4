"""Shared domain types: transition kernels, initial distributions and channels.

All arrays held by these types are copied on construction and marked read-only.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .exceptions import InvalidInputError

EPS_STOCH = 1e-12


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    out.flags.writeable = False
    return out


def check_probability_vector(p, name: str = "probs", tol: float = EPS_STOCH) -> np.ndarray:
    """Validate a 1-D probability vector and return it as a float array."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InvalidInputError(f"{name} must be a non-empty 1-D vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    if np.any(p < 0):
        raise InvalidInputError(f"{name} has negative entries (min {p.min():.3g})")
    if abs(p.sum() - 1.0) > tol:
        raise InvalidInputError(f"{name} sums to {p.sum():.17g}, not 1")
    return p


def check_stochastic_matrix(P, name: str = "kernel", tol: float = EPS_STOCH) -> np.ndarray:
    """Validate a square row-stochastic matrix and return it as a float array."""
    P = np.asarray(P, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] == 0:
        raise InvalidInputError(f"{name} must be a non-empty square matrix, got shape {P.shape}")
    if not np.all(np.isfinite(P)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    if np.any(P < 0):
        raise InvalidInputError(f"{name} has negative entries")
    dev = np.abs(P.sum(axis=1) - 1.0)
    if np.any(dev > tol):
        row = int(np.argmax(dev))
        raise InvalidInputError(f"{name} row {row} sums to {P[row].sum():.17g}, not 1")
    return P


@dataclass(frozen=True, eq=False)
class TransitionKernel:
    """Row-stochastic matrix ``rows[i, j] = P(i -> j)`` on a finite alphabet."""

    rows: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rows", _frozen(check_stochastic_matrix(self.rows)))

    @property
    def alphabet_size(self) -> int:
        return self.rows.shape[0]

    def apply(self, probs) -> np.ndarray:
        """Push a distribution one step forward: ``probs @ rows``."""
        probs = np.asarray(probs, dtype=float)
        if probs.shape != (self.alphabet_size,):
            raise InvalidInputError(
                f"distribution of length {probs.shape} does not match alphabet size {self.alphabet_size}"
            )
        return probs @ self.rows

    @classmethod
    def identity(cls, d: int) -> "TransitionKernel":
        return cls(np.eye(d))


@dataclass(frozen=True, eq=False)
class InitialDistribution:
    """Probability vector ``P(i)`` for the first site."""

    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "probs", _frozen(check_probability_vector(self.probs)))

    @property
    def alphabet_size(self) -> int:
        return self.probs.shape[0]

    @classmethod
    def uniform(cls, d: int) -> "InitialDistribution":
        return cls(np.full(d, 1.0 / d))


@dataclass(frozen=True)
class SymmetricChannel:
    """Binary symmetric channel with staying probability ``q``.

    The induced chain always starts from (1/2, 1/2), also at q in {0, 1}
    where that choice is not forced by stationarity.
    """

    q: float

    def __post_init__(self):
        q = float(self.q)
        if not (0.0 <= q <= 1.0):
            raise InvalidInputError(f"q must lie in [0, 1], got {self.q!r}")
        object.__setattr__(self, "q", q)

    @property
    def kernel(self) -> TransitionKernel:
        q = self.q
        return TransitionKernel([[q, 1.0 - q], [1.0 - q, q]])

    @property
    def init(self) -> InitialDistribution:
        return InitialDistribution([0.5, 0.5])


@dataclass(frozen=True, eq=False)
class LatticeWalkKernel:
    """Translation-invariant hopping distribution on the integers.

    Parameters
    ----------
    hopping : mapping from integer offset ``c`` to ``P(i -> i + c)``.

    ``probs[k]`` holds the probability of offset ``k - V``; ``V`` is the
    largest ``|c|`` with nonzero probability, so ``probs`` has length ``2V + 1``.
    """

    hopping: Mapping[int, float]
    V: int = field(init=False)
    probs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        hop = {}
        for c, p in dict(self.hopping).items():
            if int(c) != c:
                raise InvalidInputError(f"hopping offset {c!r} is not an integer")
            hop[int(c)] = hop.get(int(c), 0.0) + float(p)
        if not hop:
            raise InvalidInputError("hopping distribution is empty")
        vals = np.array(list(hop.values()))
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise InvalidInputError("hopping probabilities must be finite and non-negative")
        if abs(vals.sum() - 1.0) > EPS_STOCH:
            raise InvalidInputError(f"hopping probabilities sum to {vals.sum():.17g}, not 1")
        V = max(abs(c) for c, p in hop.items() if p > 0)
        probs = np.zeros(2 * V + 1)
        for c, p in hop.items():
            if p > 0:
                probs[c + V] = p
        object.__setattr__(self, "hopping", {c: p for c, p in sorted(hop.items()) if p > 0})
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "probs", _frozen(probs))

    def prob(self, offset: int) -> float:
        return self.hopping.get(int(offset), 0.0)

    @classmethod
    def simple(cls) -> "LatticeWalkKernel":
        return cls({-1: 0.5, 1: 0.5})

    @classmethod
    def lazy(cls) -> "LatticeWalkKernel":
        return cls({-1: 1 / 3, 0: 1 / 3, 1: 1 / 3})

    @classmethod
    def identity(cls) -> "LatticeWalkKernel":
        return cls({0: 1.0})


def _check_pair(kernel: TransitionKernel, init: InitialDistribution) -> None:
    if kernel.alphabet_size != init.alphabet_size:
        raise InvalidInputError(
            f"kernel alphabet size {kernel.alphabet_size} != initial distribution size {init.alphabet_size}"
        )


def is_stationary(kernel: TransitionKernel, init: InitialDistribution, tol: float = EPS_STOCH) -> bool:
    """True iff ``max_j |sum_i P(i) P(i->j) - P(j)| <= tol``."""
    _check_pair(kernel, init)
    return bool(np.max(np.abs(init.probs @ kernel.rows - init.probs)) <= tol)


def kernel_from_symmetric(channel: SymmetricChannel) -> tuple[TransitionKernel, InitialDistribution]:
    return channel.kernel, channel.init


def parse_kernel_text(text: str) -> tuple[TransitionKernel, InitialDistribution]:
    """Parse the plain-text kernel format.

    Line 1 holds ``d``, the next ``d`` lines the kernel rows, the last line
    the initial distribution. ``#`` starts a comment; blank lines are ignored.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise InvalidInputError("kernel file is empty")
    try:
        d = int(lines[0])
    except ValueError:
        raise InvalidInputError(f"first line must be the alphabet size, got {lines[0]!r}") from None
    if d <= 0:
        raise InvalidInputError(f"alphabet size must be positive, got {d}")
    if len(lines) != d + 2:
        raise InvalidInputError(f"expected {d + 2} non-comment lines for d={d}, got {len(lines)}")
    try:
        rows = [[float(x) for x in line.split()] for line in lines[1 : d + 1]]
        init = [float(x) for x in lines[d + 1].split()]
    except ValueError as exc:
        raise InvalidInputError(f"malformed number in kernel file: {exc}") from None
    if any(len(r) != d for r in rows) or len(init) != d:
        raise InvalidInputError(f"every row and the initial distribution must have {d} entries")
    return TransitionKernel(rows), InitialDistribution(init)


def load_kernel_file(path: str | os.PathLike) -> tuple[TransitionKernel, InitialDistribution]:
    with open(path) as fh:
        return parse_kernel_text(fh.read())


def format_kernel_text(kernel: TransitionKernel, init: InitialDistribution) -> str:
    _check_pair(kernel, init)
    out = [str(kernel.alphabet_size)]
    out += [" ".join(f"{x:.17g}" for x in row) for row in kernel.rows]
    out.append(" ".join(f"{x:.17g}" for x in init.probs))
    return "\n".join(out) + "\n"
