"""Detecting unpolarized states.

A state is unpolarized when it is invariant under every geometric rotation
and differential phase shift, i.e. when it commutes with L2 and L3.  Since
each manifold carries an irreducible representation, this forces every
block to be a multiple of the identity.  The functions here check that
conclusion along independent routes:

* block-scalar residuals (distance of each block to ``tr(rho_n)/(n+1) I``),
* commutator norms ``||[rho_n, L_k]||`` for k = 1, 2, 3,
* sampled invariance ``||U rho U^+ - rho||`` under random lossless U,
* a brute-force nullspace computation of the commutant of {L2, L3}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .fock import DirectSumOperator, manifold_dimension
from .states import DensityOperator
from .su2 import GENERATORS, casimir_block, commutator, frobenius, schwinger_block
from .transforms import geometric_rotation, haar_random_su2, random_lossless

__all__ = [
    "DEFAULT_TOL",
    "MAX_MOMENT_ORDER",
    "UnpolarizationReport",
    "MomentTensor",
    "block_scalar_residuals",
    "commutator_norms",
    "is_unpolarized",
    "hermitian_basis",
    "commutant_basis",
    "commutant_dimension",
    "invariance_deviation",
    "monte_carlo_invariance",
    "stokes_moment_tensor",
    "stokes_vector",
    "classical_unpolarized_test",
    "rotation_eigenbasis",
    "casimir_expectation",
    "rotation_invariance_deviation",
]

#: Per-block tolerance is ``DEFAULT_TOL * (n + 1)`` in Frobenius norm.
DEFAULT_TOL = 1e-10
MAX_MOMENT_ORDER = 6
RANK_CUTOFF = 1e-8


@dataclass(frozen=True)
class UnpolarizationReport:
    commutator_norms: np.ndarray  # shape (3, n_max + 1), row k-1 holds L_k
    block_scalar_residuals: np.ndarray  # shape (n_max + 1,)
    tol: float
    scalar_verdict: bool
    commutator_verdict: bool

    @property
    def verdict(self) -> bool:
        return self.scalar_verdict and self.commutator_verdict

    @property
    def routes_agree(self) -> bool:
        return self.scalar_verdict == self.commutator_verdict

    def thresholds(self) -> np.ndarray:
        return self.tol * np.arange(1, self.block_scalar_residuals.size + 1)


def block_scalar_residuals(rho: DirectSumOperator) -> np.ndarray:
    out = []
    for n, block in enumerate(rho.blocks):
        scalar = np.trace(block) / (n + 1)
        out.append(frobenius(block - scalar * np.eye(n + 1)))
    return np.array(out)


def commutator_norms(rho: DirectSumOperator) -> np.ndarray:
    """``||[rho_n, L_k]||_F`` as an array indexed ``[k - 1, n]``."""
    return np.array([[frobenius(commutator(block, schwinger_block(k, n)))
                      for n, block in enumerate(rho.blocks)]
                     for k in GENERATORS])


def is_unpolarized(rho: DirectSumOperator, tol: float = DEFAULT_TOL) -> UnpolarizationReport:
    """Check that every block is scalar and commutes with L1, L2, L3.

    ``tol`` is scaled by the block dimension ``n + 1``.  Both verdicts are
    kept on the report so callers can check that they agree.
    """
    scalar = block_scalar_residuals(rho)
    norms = commutator_norms(rho)
    limits = tol * np.arange(1, rho.n_max + 2)
    return UnpolarizationReport(
        commutator_norms=norms,
        block_scalar_residuals=scalar,
        tol=tol,
        scalar_verdict=bool(np.all(scalar <= limits)),
        commutator_verdict=bool(np.all(norms <= limits)),
    )


def hermitian_basis(dim: int) -> list[np.ndarray]:
    """Orthonormal real basis of the ``dim x dim`` Hermitian matrices."""
    basis = []
    for i in range(dim):
        e = np.zeros((dim, dim), dtype=complex)
        e[i, i] = 1.0
        basis.append(e)
    for i, j in itertools.combinations(range(dim), 2):
        sym = np.zeros((dim, dim), dtype=complex)
        sym[i, j] = sym[j, i] = 1 / np.sqrt(2)
        anti = np.zeros((dim, dim), dtype=complex)
        anti[i, j] = -1j / np.sqrt(2)
        anti[j, i] = 1j / np.sqrt(2)
        basis.extend((sym, anti))
    return basis


def _constraint_matrix(n: int, generators) -> tuple[np.ndarray, list[np.ndarray]]:
    basis = hermitian_basis(manifold_dimension(n))
    columns = []
    for e in basis:
        parts = [commutator(e, schwinger_block(k, n)).ravel() for k in generators]
        stacked = np.concatenate(parts)
        columns.append(np.concatenate([stacked.real, stacked.imag]))
    return np.array(columns).T, basis


def commutant_basis(n: int, generators=(2, 3)) -> list[np.ndarray]:
    """Hermitian matrices on manifold ``n`` commuting with the given generators.

    Solves the real linear system ``[X, L_k] = 0`` over the coordinates of
    ``X`` in :func:`hermitian_basis`; singular values below
    ``1e-8 * s_max`` count as zero.
    """
    matrix, basis = _constraint_matrix(n, generators)
    _, s, vh = np.linalg.svd(matrix)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > RANK_CUTOFF * smax)) if smax > 0 else 0
    null = vh[rank:]
    return [sum(c * e for c, e in zip(row, basis)) for row in null]


def commutant_dimension(n: int, generators=(2, 3)) -> int:
    """Real dimension of the Hermitian commutant of ``{L_k}`` on manifold ``n``."""
    return len(commutant_basis(n, generators))


def invariance_deviation(rho: DirectSumOperator, unitary: DirectSumOperator) -> float:
    """``sum_n ||U_n rho_n U_n^+ - rho_n||_F``."""
    if rho.n_max != unitary.n_max:
        raise ValueError(f"truncation mismatch: {rho.n_max} vs {unitary.n_max}")
    return float(sum(frobenius(u @ r @ u.conj().T - r)
                     for r, u in zip(rho.blocks, unitary.blocks)))


_FAMILIES = {"linear": haar_random_su2, "general": random_lossless}


def monte_carlo_invariance(rho: DirectSumOperator, trials: int, seed: int,
                           family: str = "linear") -> float:
    """Largest invariance deviation over ``trials`` sampled unitaries.

    ``family="linear"`` samples Haar-random SU(2) evolutions,
    ``family="general"`` independent Haar blocks.  Trial ``i`` uses the
    seed sequence ``(seed, i)`` so results do not depend on evaluation order.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    try:
        sampler = _FAMILIES[family]
    except KeyError:
        raise ValueError(f"family must be one of {sorted(_FAMILIES)}, got {family!r}") from None
    return max(invariance_deviation(rho, sampler(np.random.SeedSequence((seed, i)), rho.n_max))
               for i in range(trials))


@dataclass(frozen=True)
class MomentTensor:
    """Expectations ``<L_k1 ... L_km>``; ``entries[k1-1, ..., km-1]``."""

    order: int
    entries: np.ndarray

    def labelled(self):
        """Iterate ``(index tuple with labels 1..3, value)`` pairs."""
        for idx in itertools.product(range(3), repeat=self.order):
            yield tuple(i + 1 for i in idx), complex(self.entries[idx])


def stokes_moment_tensor(rho: DirectSumOperator, order: int) -> MomentTensor:
    if not 1 <= order <= MAX_MOMENT_ORDER:
        raise ValueError(f"order must be in 1..{MAX_MOMENT_ORDER}, got {order!r}")
    entries = np.zeros((3,) * order, dtype=complex)
    for n, block in enumerate(rho.blocks):
        gens = [schwinger_block(k, n) for k in GENERATORS]
        for idx in itertools.product(range(3), repeat=order):
            chain = reduce(np.matmul, (gens[i] for i in idx))
            entries[idx] += np.trace(block @ chain)
    return MomentTensor(order, entries)


def stokes_vector(rho: DirectSumOperator) -> np.ndarray:
    """``(<L1>, <L2>, <L3>)``; multiply by ``STOKES_FACTOR`` for Stokes units."""
    return stokes_moment_tensor(rho, 1).entries.real


def classical_unpolarized_test(rho: DirectSumOperator, tol: float = 1e-12) -> bool:
    """True when the first-order Stokes moments all vanish.

    This is the classical notion (second-order field moments invariant) and
    is strictly weaker than :func:`is_unpolarized`.
    """
    return bool(np.all(np.abs(stokes_moment_tensor(rho, 1).entries) <= tol))


def casimir_expectation(rho: DensityOperator) -> float:
    return float(sum(np.trace(b @ casimir_block(n)).real for n, b in enumerate(rho.blocks)))


def rotation_eigenbasis(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors (columns) of L2 on manifold ``n``.

    Each eigenvector spans a state left unchanged by every
    :func:`~unpol.transforms.geometric_rotation`.
    """
    return np.linalg.eigh(schwinger_block(2, n))


def rotation_invariance_deviation(vector: np.ndarray, theta: float) -> float:
    """Deviation of ``|v><v|`` under a geometric rotation by ``theta``."""
    n = vector.size - 1
    u = geometric_rotation(theta, n).block(n)
    rho = np.outer(vector, vector.conj())
    return frobenius(u @ rho @ u.conj().T - rho)
