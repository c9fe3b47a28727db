import numpy as np
import pytest

from unpol.fock import total_dimension
from unpol.states import DensityOperator


def mode_operators(cutoff):
    """Annihilators ``a`` and ``b`` on the product space, ``cutoff`` levels per mode.

    Product basis index is ``n_a * cutoff + n_b``.  Used as an independent
    route to the manifold blocks.
    """
    lower = np.diag(np.sqrt(np.arange(1, cutoff)), k=1)
    eye = np.eye(cutoff)
    return np.kron(lower, eye), np.kron(eye, lower)


def manifold_projector(n, cutoff):
    """Columns pick ``|0,n>, |1,n-1>, ..., |n,0>`` out of the product basis."""
    p = np.zeros((cutoff * cutoff, n + 1))
    for n_a in range(n + 1):
        p[n_a * cutoff + (n - n_a), n_a] = 1.0
    return p


def random_mixed_state(rng, n_max, rank=None):
    """Random block-diagonal density operator (Wishart blocks, Dirichlet populations)."""
    pops = rng.dirichlet(np.ones(n_max + 1))
    blocks = []
    for n in range(n_max + 1):
        k = rank or n + 1
        g = rng.standard_normal((n + 1, k)) + 1j * rng.standard_normal((n + 1, k))
        w = g @ g.conj().T
        blocks.append(pops[n] * w / np.trace(w).real)
    return DensityOperator(blocks)


def random_pure_vector(rng, n_max, manifolds=None):
    psi = np.zeros(total_dimension(n_max), dtype=complex)
    for n in (range(n_max + 1) if manifolds is None else manifolds):
        lo, hi = n * (n + 1) // 2, (n + 1) * (n + 2) // 2
        psi[lo:hi] = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
    return psi / np.linalg.norm(psi)


def random_unpolarized_weights(rng, n_max):
    r = rng.exponential(size=n_max + 1)
    return r / np.dot(np.arange(1, n_max + 2), r)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def record(label, ok, detail=""):
        lines.append(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else ""))
        print(lines[-1])
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
