"""Numerical checks of every structural claim, used by ``emchain verify``.

Each check compares a fast path against an independent brute-force route
and records the worst residual seen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .entanglement import (
    ENTANGLED,
    closed_form_eigensystem,
    generic_ppt,
    ppt_test,
    witness_closed_form,
)
from .model import InitialDistribution, LatticeWalkKernel, SymmetricChannel, TransitionKernel
from .reduction import partial_trace, rho_N, sigma_matrix
from .spectral import RANK_TOL, von_neumann_entropy
from .statevec import build_state, density_from_state
from .walk import WalkState, step, walk_sigma, walk_sigma_paths


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: residual {self.residual:.3e} (tol {self.tolerance:.0e})"


def random_kernel(rng: np.random.Generator, d: int) -> tuple[TransitionKernel, InitialDistribution]:
    """Dirichlet rows and a Dirichlet (generally non-stationary) start."""
    P = rng.dirichlet(np.ones(d), size=d)
    return TransitionKernel(P), InitialDistribution(rng.dirichlet(np.ones(d)))


def _symmetric(q):
    ch = SymmetricChannel(q)
    return ch.kernel, ch.init


def _nonzero(w, k=None):
    w = np.sort(np.asarray(w))[::-1]
    return w[: k if k is not None else int(np.count_nonzero(w > RANK_TOL))]


def q_grid() -> np.ndarray:
    return np.round(np.arange(1, 20) * 0.05, 12)


def run_checks(
    max_n: int = 6,
    seed: int = 0,
    extra_kernels: Iterable[tuple[TransitionKernel, InitialDistribution]] = (),
    n_random: int = 12,
) -> list[CheckResult]:
    max_n = max(1, int(max_n))
    rng = np.random.default_rng(seed)
    corpus = list(extra_kernels)
    for _ in range(n_random):
        corpus.append(random_kernel(rng, int(rng.integers(2, 5))))
    n_brute = lambda d: max(1, min(max_n, {2: 8, 3: 5, 4: 4}.get(d, 3)))

    results = []

    def check(name: str, tol: float, fn: Callable[[], Iterable[float]]):
        results.append(CheckResult(name, float(max(fn(), default=0.0)), tol))

    def classical_restriction():
        for k, i in corpus:
            N = n_brute(k.alphabet_size)
            psi = build_state(k, i, N)
            for idx, config in enumerate(np.ndindex(*(k.alphabet_size,) * (N + 1))):
                p = i.probs[config[0]]
                for a, b in zip(config, config[1:]):
                    p *= k.rows[a, b]
                yield abs(psi.amplitudes[idx] ** 2 - p)

    def one_extra_site():
        for k, i in corpus:
            d = k.alphabet_size
            N = max(0, n_brute(d) - 2)
            far = density_from_state(build_state(k, i, N + 2))
            yield np.max(np.abs(partial_trace(far, range(N + 1)).entries - rho_N(k, i, N).entries))

    def log_d_bound():
        for k, i in corpus:
            for N in range(n_brute(k.alphabet_size) + 1):
                s = von_neumann_entropy(rho_N(k, i, N))
                yield max(0.0, s.entropy - math.log(k.alphabet_size))
                yield float(max(0, s.rank - k.alphabet_size))

    def schmidt():
        for k, i in corpus:
            d = k.alphabet_size
            for N in range(n_brute(d) + 1):
                a = von_neumann_entropy(rho_N(k, i, N)).eigenvalues[:d]
                b = von_neumann_entropy(sigma_matrix(k, i, N)).eigenvalues
                yield np.max(np.abs(a - b))

    def sigma_fast_vs_trace():
        for k, i in corpus:
            N = n_brute(k.alphabet_size) - 1
            full = density_from_state(build_state(k, i, N + 1))
            yield np.max(np.abs(partial_trace(full, {N + 1}).entries - sigma_matrix(k, i, N).entries))

    def closed_form():
        for q in q_grid():
            k, i = _symmetric(q)
            for N in range(1, max_n + 1):
                spec, vecs = closed_form_eigensystem(q, N)
                w = von_neumann_entropy(rho_N(k, i, N)).eigenvalues
                want = [spec.lambda_plus, spec.lambda_minus] if q != 0.5 else [1.0]
                yield np.max(np.abs(w[: len(want)] - want))
                yield float(np.count_nonzero(w > RANK_TOL) != len(want))
                rho = rho_N(k, i, N).entries
                for sign, psi in vecs.items():
                    lam = spec.lambda_plus if sign == "+" else spec.lambda_minus
                    yield np.max(np.abs(rho @ psi.amplitudes - lam * psi.amplitudes))

    def n_independence():
        for q in q_grid():
            k, i = _symmetric(q)
            s = [von_neumann_entropy(rho_N(k, i, N)).entropy for N in range(max_n + 1)]
            yield max(s) - min(s)

    def witness():
        for q in list(q_grid()) + [0.0, 1.0]:
            for N in range(1, max_n + 1):
                yield abs(ppt_test(q, N).witness_value - witness_closed_form(q))

    def verdicts():
        for q in list(q_grid()) + [0.0, 1.0]:
            expect_entangled = q not in (0.0, 0.5, 1.0)
            k, i = _symmetric(q)
            for N in range(1, min(max_n, 6) + 1):
                fast = ppt_test(q, N)
                full = generic_ppt(rho_N(k, i, N + 1), N + 1)
                yield float((fast.verdict == ENTANGLED) != expect_entangled)
                yield float((full.verdict == ENTANGLED) != expect_entangled)

    def walk_bound():
        for hop in (LatticeWalkKernel.simple(), LatticeWalkKernel.lazy(), LatticeWalkKernel({-2: 0.2, 1: 0.8})):
            state = WalkState.localized(0)
            for N in range(60):
                sigma, _ = walk_sigma(state, hop)
                s = von_neumann_entropy(sigma).entropy
                yield max(0.0, s - math.log(1 + 2 * hop.V * (N + 1)))
                state = step(state, hop)

    def walk_brute():
        for hop in (LatticeWalkKernel.simple(), LatticeWalkKernel.lazy()):
            init = {0: 0.5, 1: 0.5}
            state = WalkState.localized(init)
            for N in range(min(max_n, 6) + 1):
                fast, sites = walk_sigma(state, hop)
                slow = walk_sigma_paths(init, hop, N, sites)
                yield np.max(np.abs(fast.entries - slow))
                state = step(state, hop)

    def degenerate_forms():
        for N in range(1, max_n + 1):
            L = N + 2
            for q, strings in ((1.0, ("0" * L, "1" * L)), (0.0, (("01" * L)[:L], ("10" * L)[:L]))):
                k, i = _symmetric(q)
                want = np.zeros((2**L,) * 2)
                for s in strings:
                    idx = int(s, 2)
                    want[idx, idx] = 0.5
                yield np.max(np.abs(rho_N(k, i, N + 1).entries - want))

    check("classical restriction: diag(rho) = path probabilities", 1e-14, classical_restriction)
    check("one extra site suffices for rho_N", 1e-12, one_extra_site)
    check("entropy bound S(rho_N) <= log d and rank <= d", 1e-9, log_d_bound)
    check("schmidt: nonzero spectrum of rho_N = spectrum of sigma", 1e-9, schmidt)
    check("sigma fast path = brute-force partial trace", 1e-12, sigma_fast_vs_trace)
    check("closed-form eigensystem vs brute force", 1e-9, closed_form)
    check("entropy independent of N (symmetric channel)", 1e-9, n_independence)
    check("PPT witness = closed form", 1e-10, witness)
    check("PPT verdicts (effective and full state)", 0.0, verdicts)
    check("walk entropy bound", 1e-9, walk_bound)
    check("walk sigma = path-sum brute force", 1e-10, walk_brute)
    check("degenerate channels q=0,1 explicit forms", 1e-12, degenerate_forms)
    return results
