"""Partial traces, the one-extra-site reduced state and the boundary matrix.

Tracing the infinite chain down to sites ``0..N`` only needs one extra site:
``rho_N = tr_{N+1} |Psi_{N+1}><Psi_{N+1}|``. Because that vector is pure,
``rho_N`` shares its nonzero spectrum with the ``d x d`` state of site
``N+1`` alone, which :func:`sigma_matrix` computes in ``O(N d^2 + d^3)``
without building any exponentially large object.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .density import DensityMatrix, check_budget, symmetrize
from .exceptions import InvalidInputError
from .model import EPS_STOCH, InitialDistribution, TransitionKernel, _check_pair
from .statevec import build_state

__all__ = ["DensityMatrix", "partial_trace", "rho_N", "marginal", "sigma_matrix"]


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduce ``rho`` to the factors listed in ``keep`` (order of ``keep`` is ignored).

    Examples
    --------
    >>> import numpy as np
    >>> a = DensityMatrix(np.diag([0.25, 0.75]), (2,))
    >>> b = DensityMatrix(np.full((2, 2), 0.5), (2,))
    >>> ab = DensityMatrix(np.kron(a.entries, b.entries), (2, 2))
    >>> partial_trace(ab, {0}).entries
    array([[0.25, 0.  ],
           [0.  , 0.75]])
    """
    dims = rho.factor_dims
    n = len(dims)
    try:
        keep = sorted({int(k) for k in keep})
    except (TypeError, ValueError):
        raise InvalidInputError(f"keep must be a set of factor indices, got {keep!r}") from None
    if not keep:
        raise InvalidInputError("keep must name at least one factor")
    if keep[0] < 0 or keep[-1] >= n:
        raise InvalidInputError(f"keep {keep} out of range for {n} factors")
    if len(keep) == n:
        return rho

    t = rho.entries.reshape(dims + dims)
    row = list(range(n))
    col = [n + k for k in range(n)]
    for k in range(n):
        if k not in keep:
            col[k] = row[k]  # repeated label -> summed diagonal
    out_labels = [row[k] for k in keep] + [col[k] for k in keep]
    red = np.einsum(t, row + col, out_labels, optimize=False)
    kd = tuple(dims[k] for k in keep)
    m = int(np.prod(kd))
    return DensityMatrix(symmetrize(red.reshape(m, m)), kd)


def rho_N(kernel: TransitionKernel, init: InitialDistribution, N: int) -> DensityMatrix:
    """Reduced state of the entangled Markov chain on sites ``0..N``.

    Built from the state on ``0..N+1`` by tracing out the last site; with
    site ``N+1`` the least significant digit that is ``M @ M.T`` for the
    amplitude vector reshaped to ``(d**(N+1), d)``.
    """
    d = kernel.alphabet_size
    dim = d ** (N + 1)
    check_budget(dim * dim, f"rho_N with d={d}, N={N}")
    psi = build_state(kernel, init, N + 1)
    m = psi.amplitudes.reshape(dim, d)
    return DensityMatrix(symmetrize(m @ m.T), (d,) * (N + 1))


def marginal(kernel: TransitionKernel, init: InitialDistribution, N: int) -> np.ndarray:
    """Distribution of site ``N``: ``init @ kernel**N`` by repeated row-vector products."""
    _check_pair(kernel, init)
    if N < 0:
        raise InvalidInputError(f"N must be non-negative, got {N}")
    p = init.probs.copy()
    for _ in range(int(N)):
        p = p @ kernel.rows
    if np.any(p < 0) or abs(p.sum() - 1.0) > max(1, N) * EPS_STOCH:
        raise InvalidInputError("marginal left the probability simplex")
    return p


def sigma_matrix(kernel: TransitionKernel, init: InitialDistribution, N: int) -> DensityMatrix:
    """``d x d`` reduced state of site ``N+1`` of ``|Psi_{N+1}>``.

    ``sigma[j, k] = sum_i Pt(i) sqrt(P(i->j)) sqrt(P(i->k))`` with ``Pt`` the
    site-``N`` marginal.
    """
    p = marginal(kernel, init, N)
    root = np.sqrt(kernel.rows)
    sigma = root.T @ (p[:, None] * root)
    return DensityMatrix(symmetrize(sigma), (kernel.alphabet_size,))
