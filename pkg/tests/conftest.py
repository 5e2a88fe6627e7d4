import itertools

import numpy as np
import pytest

from emchain.model import InitialDistribution, SymmetricChannel, TransitionKernel

Q_GRID = [round(0.05 * k, 12) for k in range(1, 20)]


def symmetric(q):
    ch = SymmetricChannel(q)
    return ch.kernel, ch.init


def random_pair(rng, d, stationary=False):
    P = rng.dirichlet(np.ones(d), size=d)
    if stationary:
        w, v = np.linalg.eig(P.T)
        pi = np.real(v[:, np.argmin(np.abs(w - 1))])
        pi = np.abs(pi) / np.abs(pi).sum()
        return TransitionKernel(P), InitialDistribution(pi)
    return TransitionKernel(P), InitialDistribution(rng.dirichlet(np.ones(d)))


def path_probability(P, p0, config):
    p = p0[config[0]]
    for a, b in zip(config, config[1:]):
        p *= P[a, b]
    return p


def brute_state(P, p0, N):
    """Amplitudes by explicit enumeration of every string i0..iN."""
    d = len(p0)
    return np.array(
        [np.sqrt(path_probability(P, p0, c)) for c in itertools.product(range(d), repeat=N + 1)]
    )


def naive_partial_trace(m, dims, keep):
    """Loop-based partial trace over all factors not in ``keep``."""
    keep = sorted(keep)
    drop = [k for k in range(len(dims)) if k not in keep]
    kd = [dims[k] for k in keep]
    out = np.zeros((int(np.prod(kd)),) * 2)
    configs = list(itertools.product(*[range(x) for x in dims]))
    index = {c: n for n, c in enumerate(configs)}
    for a in itertools.product(*[range(x) for x in kd]):
        for b in itertools.product(*[range(x) for x in kd]):
            for t in itertools.product(*[range(dims[k]) for k in drop]):
                ca, cb = [0] * len(dims), [0] * len(dims)
                for pos, k in enumerate(keep):
                    ca[k], cb[k] = a[pos], b[pos]
                for pos, k in enumerate(drop):
                    ca[k] = cb[k] = t[pos]
                ia = int(np.ravel_multi_index(a, kd)) if kd else 0
                ib = int(np.ravel_multi_index(b, kd)) if kd else 0
                out[ia, ib] += m[index[tuple(ca)], index[tuple(cb)]]
    return out


def naive_partial_transpose(m, da, db):
    """Swap the B indices of ``<a b|m|a' b'>`` entry by entry."""
    out = np.zeros_like(m)
    for a, b, a2, b2 in itertools.product(range(da), range(db), range(da), range(db)):
        out[a * db + b, a2 * db + b2] = m[a * db + b2, a2 * db + b]
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion for the terminal summary."""

    def record(label, ok, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
