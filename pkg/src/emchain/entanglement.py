"""Binary symmetric channel: closed-form spectra, the Phi basis and PPT tests.

For the symmetric channel with staying probability ``q`` the reduced state
``rho_N`` has rank two for every ``N`` (rank one at ``q = 1/2``), with
eigenvalues ``1/2 +- sqrt(q(1-q))``. The state ``rho_{N+1}`` on sites
``0..N+1`` lives on ``span{Phi_N(0), Phi_N(1)} (x) C^2`` and can therefore be
tested for separability across the cut ``{0..N} | {N+1}`` as a two-qubit
state, where positivity of the partial transpose is necessary and sufficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import EPS_PSD, DensityMatrix, symmetrize
from .exceptions import InvalidInputError, NumericalError
from .model import SymmetricChannel
from .statevec import PureStateVector, chain_amplitudes

DEGENERATE_TOL = 1e-12
SEPARABLE = "separable"
ENTANGLED = "entangled"
INCONCLUSIVE = "inconclusive"


def _q(q) -> float:
    return SymmetricChannel(q).q


def _n(N) -> int:
    if int(N) != N or N < 0:
        raise InvalidInputError(f"N must be a non-negative integer, got {N!r}")
    return int(N)


def _root_q1q(q: float) -> float:
    return math.sqrt(q * (1.0 - q))


@dataclass(frozen=True)
class ClosedFormSpectrum:
    lambda_plus: float
    lambda_minus: float

    @classmethod
    def from_q(cls, q: float) -> "ClosedFormSpectrum":
        r = _root_q1q(_q(q))
        return cls(0.5 + r, 0.5 - r)


def closed_form_eigensystem(q: float, N: int) -> tuple[ClosedFormSpectrum, dict[str, PureStateVector]]:
    """Nonzero eigenvalues of ``rho_N`` and their eigenvectors from the XOR-count formula.

    The eigenvector for ``lambda_pm`` has amplitude

        sqrt(1-q)**F * sqrt(q)**(N-F) * (sqrt(P(i_N->0)) +- sqrt(P(i_N->1))) / (2 sqrt(lambda_pm))

    where ``F`` is the number of flips ``i_{a-1} xor i_a`` along the string.
    Returns ``(spectrum, {"+": psi_plus, "-": psi_minus})``; at ``q = 1/2`` only
    ``"+"`` is present since ``lambda_minus`` vanishes.
    """
    q, N = _q(q), _n(N)
    spec = ClosedFormSpectrum.from_q(q)
    bits = (np.arange(2 ** (N + 1))[:, None] >> np.arange(N, -1, -1)[None, :]) & 1
    flips = np.sum(bits[:, 1:] ^ bits[:, :-1], axis=1)
    base = np.sqrt(1.0 - q) ** flips * np.sqrt(q) ** (N - flips)
    last = bits[:, -1]
    to0 = np.sqrt(np.where(last == 0, q, 1.0 - q))  # sqrt(P(i_N -> 0))
    to1 = np.sqrt(np.where(last == 1, q, 1.0 - q))  # sqrt(P(i_N -> 1))
    vectors = {}
    for sign, lam in (("+", spec.lambda_plus), ("-", spec.lambda_minus)):
        if lam <= DEGENERATE_TOL:
            continue
        s = 1.0 if sign == "+" else -1.0
        amps = base * (to0 + s * to1) / (2.0 * math.sqrt(lam))
        vectors[sign] = _signed_state(N + 1, amps)
    return spec, vectors


def _signed_state(num_sites: int, amps: np.ndarray) -> PureStateVector:
    # PureStateVector only checks the norm, so signed amplitudes are accepted.
    return PureStateVector(num_sites, 2, amps)


@dataclass(frozen=True, eq=False)
class PhiBasis:
    """Normalized, generally non-orthogonal vectors ``Phi_N(0)``, ``Phi_N(1)``."""

    phi0: PureStateVector
    phi1: PureStateVector
    overlap: float

    def matrix(self) -> np.ndarray:
        """Columns ``Phi_N(0)``, ``Phi_N(1)``."""
        return np.column_stack([self.phi0.amplitudes, self.phi1.amplitudes])


def phi_basis(q: float, N: int) -> PhiBasis:
    """``Phi_N(b)`` has amplitude ``sqrt(P(i0->i1) ... P(i_N->b))`` on ``i0..iN``."""
    q, N = _q(q), _n(N)
    P = SymmetricChannel(q).kernel.rows
    chain = chain_amplitudes(P, np.ones(2), N)  # sqrt(P(i0->i1)...P(i_{N-1}->i_N))
    last = np.arange(chain.size) & 1
    vecs = []
    for b in (0, 1):
        vecs.append(PureStateVector(N + 1, 2, chain * np.sqrt(P[last, b])))
    overlap = float(vecs[0].amplitudes @ vecs[1].amplitudes)
    return PhiBasis(vecs[0], vecs[1], overlap)


def orthonormal_frame(basis: PhiBasis) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric (Loewdin) orthonormalization of the Phi pair.

    Returns ``(E, C)`` where ``E`` has orthonormal columns spanning the Phi
    vectors and ``C[:, b]`` are the coordinates of ``Phi_N(b)`` in ``E``.
    Degenerate pairs: identical vectors give a single column (padded with
    a zero column so ``E`` stays two wide), orthogonal vectors are used as is.
    """
    F = basis.matrix()
    s = basis.overlap
    if abs(1.0 - s) < DEGENERATE_TOL:
        E = np.column_stack([F[:, 0], np.zeros(F.shape[0])])
        return E, np.array([[1.0, 1.0], [0.0, 0.0]])
    if abs(s) < DEGENERATE_TOL:
        return F, np.eye(2)
    w, U = np.linalg.eigh(np.array([[1.0, s], [s, 1.0]]))
    E = F @ (U @ np.diag(w**-0.5) @ U.T)
    C = U @ np.diag(w**0.5) @ U.T
    return E, C


def effective_two_qubit_state(q: float, N: int) -> DensityMatrix:
    """``rho_{N+1}`` written on ``span{Phi_N(0), Phi_N(1)} (x) C^2``.

    The left factor is the orthonormal frame of :func:`orthonormal_frame`,
    the right factor is site ``N+1``. Built from the closed-form
    eigenvectors of ``rho_{N+1}`` projected onto that frame.
    """
    q, N = _q(q), _n(N)
    spec, vecs = closed_form_eigensystem(q, N + 1)
    E, _ = orthonormal_frame(phi_basis(q, N))
    weights = {"+": spec.lambda_plus, "-": spec.lambda_minus}
    rho = np.zeros((4, 4))
    for sign, psi in vecs.items():
        coords = (E.T @ psi.amplitudes.reshape(-1, 2)).reshape(-1)
        rho += weights[sign] * np.outer(coords, coords)
    return DensityMatrix(symmetrize(rho), (2, 2))


def partial_transpose(entries: np.ndarray, factor_dims, transposed) -> np.ndarray:
    """Transpose the listed tensor factors of a square matrix by index swapping."""
    dims = tuple(int(x) for x in factor_dims)
    n = len(dims)
    t = np.asarray(entries).reshape(dims + dims)
    perm = list(range(2 * n))
    for k in transposed:
        perm[k], perm[n + k] = n + k, k
    D = int(np.prod(dims))
    return t.transpose(perm).reshape(D, D)


@dataclass(frozen=True)
class PptReport:
    min_eigenvalue_pt: float
    verdict: str
    witness_value: float | None = None
    near_boundary: bool = False
    conclusive: bool = True


def _verdict(min_eig: float, conclusive: bool) -> tuple[str, bool]:
    if min_eig < -EPS_PSD:
        return ENTANGLED, False
    near = min_eig < 0.0
    return (SEPARABLE if conclusive else INCONCLUSIVE), near


def witness_closed_form(q: float) -> float:
    r = _root_q1q(_q(q))
    return 2.0 * r * (r - 0.5)


def ppt_test(q: float, N: int) -> PptReport:
    """PPT test of ``rho_{N+1}`` across ``{0..N} | {N+1}`` via the effective two-qubit state.

    ``witness_value`` is ``<phi|rho^PT|phi>`` for
    ``phi = (Phi_N(1) (x) |0> - Phi_N(0) (x) |1>) / sqrt(2)``.
    """
    q, N = _q(q), _n(N)
    rho = effective_two_qubit_state(q, N)
    pt = partial_transpose(rho.entries, (2, 2), [1])
    min_eig = float(np.linalg.eigvalsh(symmetrize(pt))[0])
    _, C = orthonormal_frame(phi_basis(q, N))
    e0, e1 = np.eye(2)
    phi = (np.kron(C[:, 1], e0) - np.kron(C[:, 0], e1)) / math.sqrt(2.0)
    norm = float(phi @ phi)
    if abs(norm - 1.0) > 1e-10:
        raise NumericalError(f"witness vector has squared norm {norm:.17g}")
    witness = float(phi @ pt @ phi)
    verdict, near = _verdict(min_eig, True)
    return PptReport(min_eig, verdict, witness, near)


def generic_ppt(rho: DensityMatrix, cut: int) -> PptReport:
    """PPT test of ``rho`` across factors ``[:cut] | [cut:]``; the second group is transposed.

    A negative partial transpose always certifies entanglement. A positive
    one is only conclusive when the bipartition is at most 2 x 3 (or 3 x 2);
    otherwise the verdict is ``"inconclusive"``.
    """
    dims = rho.factor_dims
    if not 0 < cut < len(dims):
        raise InvalidInputError(f"cut {cut} must split the {len(dims)} declared factors into two groups")
    pt = partial_transpose(rho.entries, dims, range(cut, len(dims)))
    min_eig = float(np.linalg.eigvalsh(symmetrize(pt))[0])
    da, db = int(np.prod(dims[:cut])), int(np.prod(dims[cut:]))
    conclusive = da * db <= 6
    verdict, near = _verdict(min_eig, conclusive)
    return PptReport(min_eig, verdict, None, near, conclusive or verdict == ENTANGLED)
