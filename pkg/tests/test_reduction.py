import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emchain.density import DensityMatrix
from emchain.exceptions import BudgetExceededError, InvalidInputError
from emchain.model import InitialDistribution, TransitionKernel
from emchain.reduction import marginal, partial_trace, rho_N, sigma_matrix
from emchain.statevec import build_state, density_from_state

from conftest import brute_state, naive_partial_trace, random_pair, symmetric


def random_density(rng, dims):
    D = int(np.prod(dims))
    X = rng.normal(size=(D, D))
    m = X @ X.T
    return DensityMatrix(m / np.trace(m), dims)


class TestPartialTrace:
    def test_keep_all_is_identity(self, rng):
        rho = random_density(rng, (2, 3))
        assert partial_trace(rho, {0, 1}) is rho

    def test_product_state(self, rng):
        a, b = random_density(rng, (3,)), random_density(rng, (2,))
        ab = DensityMatrix(np.kron(a.entries, b.entries), (3, 2))
        np.testing.assert_allclose(partial_trace(ab, {0}).entries, a.entries, atol=1e-15)
        np.testing.assert_allclose(partial_trace(ab, {1}).entries, b.entries, atol=1e-15)

    @pytest.mark.parametrize("dims, keep", [((2, 3, 2), {1}), ((2, 3, 2), {0, 2}), ((3, 2, 2, 2), {1, 3})])
    def test_matches_loops(self, rng, dims, keep):
        rho = random_density(rng, dims)
        want = naive_partial_trace(rho.entries, dims, keep)
        got = partial_trace(rho, keep)
        np.testing.assert_allclose(got.entries, want, atol=1e-14)
        assert got.factor_dims == tuple(dims[k] for k in sorted(keep))

    @pytest.mark.parametrize("keep", [set(), {3}, {-1}, "x"])
    def test_bad_keep(self, rng, keep):
        with pytest.raises(InvalidInputError):
            partial_trace(random_density(rng, (2, 2, 2)), keep)

    def test_trace_preserved(self, rng):
        rho = random_density(rng, (2, 2, 3))
        for keep in [{0}, {1}, {2}, {0, 2}]:
            assert np.trace(partial_trace(rho, keep).entries) == pytest.approx(1, abs=1e-10)

    def test_composes_in_any_order(self, rng):
        dims = (2, 3, 2, 2)
        rho = random_density(rng, dims)
        joint = partial_trace(rho, {1}).entries
        for order in itertools.permutations([0, 2, 3]):
            cur, labels = rho, [0, 1, 2, 3]
            for k in order:
                pos = labels.index(k)
                cur = partial_trace(cur, set(range(len(labels))) - {pos})
                labels.remove(k)
            np.testing.assert_allclose(cur.entries, joint, atol=1e-12)


class TestMarginal:
    def test_zero_steps(self, rng):
        k, i = random_pair(rng, 3)
        np.testing.assert_array_equal(marginal(k, i, 0), i.probs)

    @pytest.mark.parametrize("q", [0, 0.3, 0.5, 1])
    def test_symmetric_is_uniform(self, q):
        for N in range(6):
            np.testing.assert_allclose(marginal(*symmetric(q), N), [0.5, 0.5], atol=1e-15)

    def test_absorbing(self):
        k = TransitionKernel([[1, 0], [1, 0]])
        np.testing.assert_array_equal(marginal(k, InitialDistribution([0.5, 0.5]), 1), [1, 0])

    def test_matches_enumeration(self, rng):
        k, i = random_pair(rng, 3)
        N = 4
        amps = brute_state(k.rows, i.probs, N).reshape(-1, 3)
        np.testing.assert_allclose(marginal(k, i, N), (amps**2).sum(axis=0), atol=1e-15)


class TestSigma:
    @pytest.mark.parametrize("q", [0, 0.1, 0.3, 0.5, 0.8, 1])
    def test_symmetric_closed_form(self, q):
        r = math.sqrt(q * (1 - q))
        for N in (0, 3, 7):
            np.testing.assert_allclose(sigma_matrix(*symmetric(q), N).entries, [[0.5, r], [r, 0.5]], atol=1e-15)

    def test_q1_diagonal(self):
        np.testing.assert_array_equal(sigma_matrix(*symmetric(1.0), 5).entries, np.diag([0.5, 0.5]))

    def test_matches_brute_force_trace(self, rng):
        k, i = random_pair(rng, 3)
        N = 4
        full = density_from_state(build_state(k, i, N + 1))
        slow = partial_trace(full, {N + 1}).entries
        np.testing.assert_allclose(sigma_matrix(k, i, N).entries, slow, atol=1e-14)

    def test_psd(self, rng):
        for _ in range(20):
            k, i = random_pair(rng, int(rng.integers(2, 6)))
            w = sigma_matrix(k, i, int(rng.integers(0, 10))).eigvalsh()
            assert w[-1] >= -1e-14


class TestRhoN:
    def test_pure_at_half(self):
        for N in range(5):
            w = rho_N(*symmetric(0.5), N).eigvalsh()
            assert w[0] == pytest.approx(1, abs=1e-12)
            assert np.all(np.abs(w[1:]) < 1e-12)

    def test_q1_mixture(self):
        rho = rho_N(*symmetric(1.0), 2).entries
        want = np.zeros((8, 8))
        want[0, 0] = want[7, 7] = 0.5
        np.testing.assert_allclose(rho, want, atol=1e-15)

    def test_deterministic_chain(self):
        rho = rho_N(TransitionKernel.identity(2), InitialDistribution([1, 0]), 3).entries
        want = np.zeros((16, 16))
        want[0, 0] = 1
        np.testing.assert_array_equal(rho, want)

    def test_more_sites_change_nothing(self, rng):
        k, i = random_pair(rng, 2)
        N = 3
        for M in range(N + 1, N + 5):
            far = density_from_state(build_state(k, i, M))
            np.testing.assert_allclose(partial_trace(far, range(N + 1)).entries, rho_N(k, i, N).entries, atol=1e-14)

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            rho_N(*symmetric(0.3), 13)


@settings(max_examples=40, deadline=None)
@given(d=st.integers(2, 4), N=st.integers(0, 6), seed=st.integers(0, 2**32 - 1))
def test_schmidt_spectrum_and_rank(d, N, seed):
    N = min(N, {2: 6, 3: 4, 4: 3}[d])
    k, i = random_pair(np.random.default_rng(seed), d)
    w_rho = rho_N(k, i, N).eigvalsh()
    w_sigma = sigma_matrix(k, i, N).eigvalsh()
    assert np.count_nonzero(w_rho > 1e-12) <= d
    np.testing.assert_allclose(w_rho[:d], w_sigma, atol=1e-9)
    assert np.all(np.abs(w_rho[d:]) < 1e-12)
