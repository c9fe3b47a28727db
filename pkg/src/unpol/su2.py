"""Schwinger realization of su(2) on the excitation manifolds.

On manifold ``n`` the generators are

    L1 = (a^+ b + a b^+) / 2
    L2 = (a^+ b - a b^+) / 2i
    L3 = (a^+ a - b^+ b) / 2

built directly from the ladder elements
``a^+ b |n_a, n_b> = sqrt((n_a + 1) n_b) |n_a + 1, n_b - 1>``.  The Stokes
operators are ``S_k = STOKES_FACTOR * L_k``.
"""

from __future__ import annotations

import numpy as np

from .fock import DirectSumOperator, manifold_dimension

__all__ = [
    "GENERATORS",
    "STOKES_FACTOR",
    "levi_civita",
    "raising_block",
    "schwinger_block",
    "schwinger_operator",
    "photon_number_block",
    "casimir_block",
    "commutator",
    "frobenius",
]

GENERATORS = (1, 2, 3)

#: S_k = 2 L_k (convention; the operators are only defined up to this factor).
STOKES_FACTOR = 2.0


def levi_civita(k: int, l: int, m: int) -> int:
    """Totally antisymmetric symbol on indices in {1, 2, 3}."""
    return (k - l) * (l - m) * (m - k) // 2


def raising_block(n: int) -> np.ndarray:
    """Matrix of ``a^+ b`` on manifold ``n`` (moves one photon from b to a)."""
    dim = manifold_dimension(n)
    out = np.zeros((dim, dim))
    for n_a in range(n):
        n_b = n - n_a
        out[n_a + 1, n_a] = np.sqrt((n_a + 1) * n_b)
    return out


def schwinger_block(k: int, n: int) -> np.ndarray:
    """Matrix of ``L_k`` restricted to manifold ``n``."""
    if k not in GENERATORS:
        raise ValueError(f"generator label must be 1, 2 or 3, got {k!r}")
    if k == 3:
        n_a = np.arange(manifold_dimension(n))
        return np.diag((n_a - (n - n_a)) / 2.0).astype(complex)
    up = raising_block(n)
    down = up.T
    if k == 1:
        return (0.5 * (up + down)).astype(complex)
    return (up - down) / 2j


def schwinger_operator(k: int, n_max: int) -> DirectSumOperator:
    return DirectSumOperator(schwinger_block(k, n) for n in range(n_max + 1))


def photon_number_block(n: int) -> np.ndarray:
    return n * np.eye(manifold_dimension(n), dtype=complex)


def casimir_block(n: int) -> np.ndarray:
    """``L1^2 + L2^2 + L3^2`` on manifold ``n``, in closed form ``j(j+1)`` with ``j = n/2``."""
    j = n / 2.0
    return j * (j + 1) * np.eye(manifold_dimension(n), dtype=complex)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"commutator needs equal square blocks, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def frobenius(a) -> float:
    return float(np.linalg.norm(a, "fro"))
