"""Entangled Markov chain states: construction, reduced states, entropies and PPT tests."""

from .density import DensityMatrix
from .entanglement import (
    ClosedFormSpectrum,
    PhiBasis,
    PptReport,
    closed_form_eigensystem,
    effective_two_qubit_state,
    generic_ppt,
    partial_transpose,
    phi_basis,
    ppt_test,
    witness_closed_form,
)
from .exceptions import BudgetExceededError, InvalidInputError, NumericalError
from .model import (
    InitialDistribution,
    LatticeWalkKernel,
    SymmetricChannel,
    TransitionKernel,
    is_stationary,
    kernel_from_symmetric,
    load_kernel_file,
)
from .reduction import marginal, partial_trace, rho_N, sigma_matrix
from .spectral import (
    SpectralSummary,
    check_entropy_bound,
    shannon_entropy_density,
    von_neumann_entropy,
)
from .statevec import PureStateVector, build_state, density_from_state
from .walk import WalkState, step, walk_entropy_profile, walk_sigma

__version__ = "0.1.0"
