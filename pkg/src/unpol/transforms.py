"""Lossless (photon-number conserving) unitaries.

Linear transformations ``exp(i(phi1 L1 + phi2 L2 + phi3 L3))`` are built per
manifold from a Hermitian eigendecomposition of the generator.  Random
samplers cover the SU(2) Haar measure (linear family) and independent
Haar-random blocks (general lossless family, not induced by any mode
transformation).
"""

from __future__ import annotations

from math import factorial
from typing import NamedTuple

import numpy as np

from .fock import DirectSumOperator, manifold_dimension
from .su2 import schwinger_block

__all__ = [
    "Su2Angles",
    "LosslessUnitary",
    "evolution_block",
    "evolution",
    "differential_phase",
    "geometric_rotation",
    "sample_su2_angles",
    "haar_random_su2",
    "haar_unitary",
    "random_lossless",
    "lift_mode_unitary",
]

UNITARY_TOL = 1e-12


class Su2Angles(NamedTuple):
    phi_1: float = 0.0
    phi_2: float = 0.0
    phi_3: float = 0.0


class LosslessUnitary(DirectSumOperator):
    """Direct sum whose every block is unitary to ``1e-12 * (n + 1)``."""

    def __init__(self, blocks):
        super().__init__(blocks)
        for n, u in enumerate(self.blocks):
            err = np.linalg.norm(u.conj().T @ u - np.eye(n + 1))
            if err > UNITARY_TOL * (n + 1):
                raise ValueError(f"block {n} is not unitary (residual {err:.3g})")


def _angles(angles) -> Su2Angles:
    angles = Su2Angles(*(float(a) for a in angles))
    if not all(np.isfinite(angles)):
        raise ValueError(f"angles must be finite, got {angles}")
    return angles


def evolution_block(angles, n: int) -> np.ndarray:
    """``exp(i phi . L)`` on manifold ``n``."""
    angles = _angles(angles)
    generator = sum(phi * schwinger_block(k, n) for k, phi in enumerate(angles, start=1))
    # symmetrize so eigh sees an exactly Hermitian matrix
    generator = 0.5 * (generator + generator.conj().T)
    w, v = np.linalg.eigh(generator)
    return (v * np.exp(1j * w)) @ v.conj().T


def evolution(angles, n_max: int) -> LosslessUnitary:
    return LosslessUnitary(evolution_block(angles, n) for n in range(n_max + 1))


def differential_phase(theta: float, n_max: int) -> LosslessUnitary:
    """Relative phase shift between the modes (generated by L3)."""
    return evolution((0.0, 0.0, theta), n_max)


def geometric_rotation(theta: float, n_max: int) -> LosslessUnitary:
    """Rotation about the propagation axis (generated by L2)."""
    return evolution((0.0, theta, 0.0), n_max)


def sample_su2_angles(rng: np.random.Generator, size=None) -> np.ndarray:
    """Draw generator angles whose exponential is Haar-distributed on SU(2).

    A uniform unit quaternion ``(w, v)`` is the SU(2) element
    ``cos(t/2) + i sin(t/2) axis.sigma`` with ``t = 2 arccos(w)``; the
    returned vector is ``t * axis``, so ``|phi|`` is the rotation angle on
    ``[0, 2 pi]``.  Shape is ``(3,)`` or ``size + (3,)``.
    """
    shape = (4,) if size is None else tuple(np.atleast_1d(size)) + (4,)
    q = rng.standard_normal(shape)
    q /= np.linalg.norm(q, axis=-1, keepdims=True)
    w = np.clip(q[..., 0], -1.0, 1.0)
    v = q[..., 1:]
    vnorm = np.linalg.norm(v, axis=-1, keepdims=True)
    angle = 2.0 * np.arccos(w)[..., None]
    axis = np.divide(v, vnorm, out=np.zeros_like(v), where=vnorm > 0)
    return angle * axis


def haar_random_su2(seed, n_max: int) -> LosslessUnitary:
    """Haar-random linear lossless transformation, deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    return evolution(sample_su2_angles(rng), n_max)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random ``dim x dim`` unitary (QR of a complex Ginibre matrix)."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_lossless(seed, n_max: int) -> LosslessUnitary:
    """Independent Haar-random unitary on each manifold, deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    return LosslessUnitary(haar_unitary(n + 1, rng) for n in range(n_max + 1))


def lift_mode_unitary(single_photon: np.ndarray, n: int) -> np.ndarray:
    """Action on manifold ``n`` induced by a one-photon transformation.

    ``single_photon`` is the 2x2 block on manifold 1 in the basis
    ``(|0,1>, |1,0>)``, i.e. columns give the images of ``b^+`` and ``a^+``.
    The n-photon block follows by expanding
    ``(U a^+ U^+)^n_a (U b^+ U^+)^n_b / sqrt(n_a! n_b!)`` as a polynomial in
    the creation operators.  This is independent of the generator route
    and serves as a cross-check for :func:`evolution_block`.
    """
    u = np.asarray(single_photon, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 block, got shape {u.shape}")
    dim = manifold_dimension(n)
    # polynomials in a^+ are coefficient arrays indexed by the power of a^+;
    # the power of b^+ is implied by the manifold
    image_b = np.array([u[0, 0], u[1, 0]])
    image_a = np.array([u[0, 1], u[1, 1]])
    norms = np.sqrt([float(factorial(k) * factorial(n - k)) for k in range(dim)])
    out = np.zeros((dim, dim), dtype=complex)
    for n_a in range(dim):
        poly = np.array([1.0 + 0j])
        for _ in range(n_a):
            poly = np.convolve(poly, image_a)
        for _ in range(n - n_a):
            poly = np.convolve(poly, image_b)
        out[:, n_a] = poly * norms / norms[n_a]
    return out
