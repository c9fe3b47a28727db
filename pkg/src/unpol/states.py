"""Density operators on the truncated two-mode space.

All states are block-diagonal over excitation manifolds.  Coherences
between different photon numbers cannot be represented: a pure state
spread over several manifolds is dephased by :func:`pure_density`, which
flags the loss on the returned operator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .fock import DirectSumOperator, global_index, total_dimension

__all__ = [
    "DensityOperator",
    "Diagnostics",
    "InvalidStateError",
    "HERMITICITY_TOL",
    "TRACE_TOL",
    "unpolarized_state",
    "thermal_state",
    "thermal_deficit",
    "fock_vector",
    "pure_density",
    "validate",
    "renormalized",
]

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10


class InvalidStateError(ValueError):
    pass


@dataclass(frozen=True)
class Diagnostics:
    hermiticity: float
    min_eigenvalue: float
    trace_residual: float
    passed: bool
    #: manifold with the most negative eigenvalue relative to its tolerance
    worst_block: int = 0


class DensityOperator(DirectSumOperator):
    """Block-diagonal density operator.

    ``truncation_deficit`` is the probability weight that lies above
    ``n_max`` and was dropped rather than renormalized, so
    ``trace + truncation_deficit == 1``.  ``coherences_discarded`` marks
    operators obtained by dephasing a state with inter-manifold coherence.

    Construction validates by default; pass ``check=False`` to hold an
    arbitrary operator for diagnosis with :func:`validate`.
    """

    def __init__(self, blocks, truncation_deficit: float = 0.0, *,
                 coherences_discarded: bool = False, label: str | None = None,
                 check: bool = True):
        super().__init__(blocks)
        self.label = label
        self.truncation_deficit = float(truncation_deficit)
        self.coherences_discarded = bool(coherences_discarded)
        if check:
            diag = validate(self)
            if not diag.passed:
                raise InvalidStateError(
                    "not a density operator: "
                    f"hermiticity={diag.hermiticity:.3g}, "
                    f"min eigenvalue={diag.min_eigenvalue:.3g} (block {diag.worst_block}), "
                    f"trace residual={diag.trace_residual:.3g}")

    @property
    def populations(self) -> np.ndarray:
        """Probability ``tr rho_n`` of each manifold."""
        return np.array([np.trace(b).real for b in self.blocks])

    def transformed(self, unitary: DirectSumOperator) -> DensityOperator:
        """``U rho U^dagger``, keeping the truncation bookkeeping."""
        return DensityOperator(
            self.conjugate_by(unitary).blocks, self.truncation_deficit,
            coherences_discarded=self.coherences_discarded, label=self.label)

    def __repr__(self) -> str:
        return (f"DensityOperator(n_max={self.n_max}, "
                f"truncation_deficit={self.truncation_deficit:.3g})")


def validate(rho: DirectSumOperator) -> Diagnostics:
    """Hermiticity residual, smallest eigenvalue and trace residual of ``rho``."""
    herm = max(float(np.linalg.norm(b - b.conj().T)) for b in rho.blocks)
    min_eig = np.inf
    positive = True
    worst, worst_margin = 0, np.inf
    for n, b in enumerate(rho.blocks):
        w = np.linalg.eigvalsh(0.5 * (b + b.conj().T))[0]
        min_eig = min(min_eig, w)
        margin = w + POSITIVITY_TOL * (n + 1)
        if margin < worst_margin:
            worst, worst_margin = n, margin
        positive &= margin >= 0
    deficit = getattr(rho, "truncation_deficit", 0.0)
    trace_residual = abs(rho.trace().real + deficit - 1.0)
    passed = herm <= HERMITICITY_TOL and positive and trace_residual <= TRACE_TOL
    return Diagnostics(herm, float(min_eig), float(trace_residual), bool(passed), worst)


def unpolarized_state(weights: Sequence[float]) -> DensityOperator:
    """``r_n * I`` on every manifold ``n``, with ``sum (n + 1) r_n == 1``.

    ``weights[n]`` is the weight of each basis state with ``n`` photons;
    ``n_max`` is ``len(weights) - 1``.
    """
    r = np.asarray(weights, dtype=float)
    if r.ndim != 1 or r.size == 0:
        raise ValueError("weights must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(r)):
        raise ValueError("weights must be finite")
    if np.any(r < 0):
        raise ValueError(f"weights must be nonnegative, got {r.min():.3g}")
    total = float(np.dot(np.arange(1, r.size + 1), r))
    if abs(total - 1.0) > TRACE_TOL:
        raise ValueError(f"sum of (n+1) r_n must be 1, got {total!r}")
    return DensityOperator(rn * np.eye(n + 1) for n, rn in enumerate(r))


def thermal_deficit(mean_photons: float, n_max: int) -> float:
    """Weight above ``n_max`` of a two-mode thermal state.

    Uses the closed form of ``1 - (1-x)^2 sum_{n<=N} (n+1) x^n``, which is
    ``(N+2) x^(N+1) - (N+1) x^(N+2)`` with ``x = nbar / (1 + nbar)``.
    """
    x = mean_photons / (1.0 + mean_photons)
    return (n_max + 2) * x ** (n_max + 1) - (n_max + 1) * x ** (n_max + 2)


def thermal_state(mean_photons: float, n_max: int) -> DensityOperator:
    """Product of two thermal modes with equal mean photon number.

    Every basis state of manifold ``n`` carries ``(1-x)^2 x^n``.  Weight
    above ``n_max`` is recorded in ``truncation_deficit`` and not
    renormalized.
    """
    if not mean_photons > 0 or not np.isfinite(mean_photons):
        raise ValueError(f"mean photon number must be positive, got {mean_photons!r}")
    x = mean_photons / (1.0 + mean_photons)
    return DensityOperator(
        ((1.0 - x) ** 2 * x ** n * np.eye(n + 1) for n in range(n_max + 1)),
        truncation_deficit=thermal_deficit(mean_photons, n_max))


def renormalized(rho: DensityOperator) -> DensityOperator:
    """Rescale a truncated state to unit trace and clear its deficit."""
    tr = rho.trace().real
    return DensityOperator((b / tr for b in rho.blocks), 0.0,
                           coherences_discarded=rho.coherences_discarded, label=rho.label)


def fock_vector(amplitudes: Mapping[tuple[int, int], complex], n_max: int | None = None) -> np.ndarray:
    """State vector in the global basis from ``{(n_a, n_b): amplitude}``."""
    if n_max is None:
        n_max = max((a + b for a, b in amplitudes), default=0)
    psi = np.zeros(total_dimension(n_max), dtype=complex)
    for occ, amp in amplitudes.items():
        if sum(occ) > n_max:
            raise ValueError(f"{occ} lies above n_max={n_max}")
        psi[global_index(occ)] = amp
    return psi


def _n_max_for_length(size: int) -> int:
    n = int(round((np.sqrt(8 * size + 1) - 3) / 2))
    if total_dimension(n) != size:
        raise ValueError(f"vector length {size} is not a truncated two-mode dimension")
    return n


def pure_density(psi: Sequence[complex], norm_tol: float = 1e-12) -> DensityOperator:
    """Block-diagonal part of ``|psi><psi|``.

    ``psi`` is given in the global manifold-ordered basis.  If it has
    support on more than one manifold, the inter-manifold coherences are
    dropped and ``coherences_discarded`` is set on the result.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValueError("state vector must be 1-d")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > norm_tol:
        raise ValueError(f"state vector must have unit norm, got {norm!r}")
    n_max = _n_max_for_length(psi.size)
    pieces = [psi[n * (n + 1) // 2:(n + 1) * (n + 2) // 2] for n in range(n_max + 1)]
    occupied = sum(bool(np.any(p != 0)) for p in pieces)
    return DensityOperator((np.outer(p, p.conj()) for p in pieces),
                           coherences_discarded=occupied > 1)
