"""Two-mode Fock basis and the direct-sum (block-diagonal) operator model.

States of two bosonic modes ``a`` and ``b`` are labelled ``|n_a, n_b>``.
Every operator handled by this package conserves the total photon number
``n = n_a + n_b``, so it is stored as one dense block per excitation
manifold.  Manifolds are indexed by photon number ``n`` (dimension
``n + 1``), and inside a manifold the basis is ordered by ``n_a``
ascending: ``|0,n>, |1,n-1>, ..., |n,0>``.
"""

from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

__all__ = [
    "ModeOccupation",
    "DirectSumOperator",
    "TruncationError",
    "manifold_dimension",
    "total_dimension",
    "basis_offset",
    "occupation_from_offset",
    "global_index",
    "basis_labels",
    "embed_block",
]


class TruncationError(ValueError):
    """Raised when a manifold lies above the truncation ``n_max``."""


class ModeOccupation(NamedTuple):
    n_a: int
    n_b: int

    @property
    def total(self) -> int:
        return self.n_a + self.n_b


def _check_manifold(n: int) -> int:
    if int(n) != n or n < 0:
        raise ValueError(f"manifold index must be a nonnegative integer, got {n!r}")
    return int(n)


def manifold_dimension(n: int) -> int:
    """Number of basis states with ``n`` photons in total."""
    return _check_manifold(n) + 1


def total_dimension(n_max: int) -> int:
    """Dimension of the truncated two-mode space with at most ``n_max`` photons."""
    n_max = _check_manifold(n_max)
    return (n_max + 1) * (n_max + 2) // 2


def basis_offset(occ: tuple[int, int]) -> tuple[int, int]:
    """Map ``(n_a, n_b)`` to ``(manifold, offset within manifold)``."""
    n_a, n_b = occ
    if n_a < 0 or n_b < 0:
        raise ValueError(f"occupation numbers must be nonnegative, got {occ!r}")
    return n_a + n_b, n_a


def occupation_from_offset(n: int, offset: int) -> ModeOccupation:
    """Inverse of :func:`basis_offset`."""
    n = _check_manifold(n)
    if not 0 <= offset <= n:
        raise ValueError(f"offset {offset} out of range for manifold {n}")
    return ModeOccupation(offset, n - offset)


def global_index(occ: tuple[int, int]) -> int:
    """Position of ``|n_a, n_b>`` in the manifold-ordered global basis."""
    n, offset = basis_offset(occ)
    return n * (n + 1) // 2 + offset


def basis_labels(n_max: int) -> list[ModeOccupation]:
    """All basis labels up to ``n_max`` in global order."""
    return [occupation_from_offset(n, k)
            for n in range(_check_manifold(n_max) + 1) for k in range(n + 1)]


def _frozen(matrix) -> np.ndarray:
    arr = np.array(matrix, dtype=complex)
    arr.setflags(write=False)
    return arr


class DirectSumOperator:
    """Excitation-conserving operator stored as one block per manifold.

    ``blocks[n]`` is the ``(n+1) x (n+1)`` matrix acting on manifold ``n``.
    Matrix elements between different manifolds are zero by construction
    and are never stored.  Instances are immutable.
    """

    def __init__(self, blocks: Iterable):
        frozen = tuple(_frozen(b) for b in blocks)
        if not frozen:
            raise ValueError("at least the vacuum block is required")
        for n, block in enumerate(frozen):
            if block.shape != (n + 1, n + 1):
                raise ValueError(
                    f"block {n} has shape {block.shape}, expected {(n + 1, n + 1)}")
        self._blocks = frozen
        assert sum(b.shape[0] for b in frozen) == total_dimension(self.n_max)

    @property
    def blocks(self) -> tuple[np.ndarray, ...]:
        return self._blocks

    @property
    def n_max(self) -> int:
        return len(self._blocks) - 1

    @property
    def dim(self) -> int:
        return total_dimension(self.n_max)

    def block(self, n: int) -> np.ndarray:
        if n > self.n_max:
            raise TruncationError(f"manifold {n} exceeds n_max={self.n_max}")
        return self._blocks[_check_manifold(n)]

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self._blocks)

    def __len__(self) -> int:
        return len(self._blocks)

    def _check_compatible(self, other: DirectSumOperator) -> None:
        if not isinstance(other, DirectSumOperator):
            raise TypeError(f"expected DirectSumOperator, got {type(other).__name__}")
        if other.n_max != self.n_max:
            raise ValueError(
                f"truncation mismatch: n_max={self.n_max} vs n_max={other.n_max}")

    def __matmul__(self, other: DirectSumOperator) -> DirectSumOperator:
        self._check_compatible(other)
        return DirectSumOperator(a @ b for a, b in zip(self, other))

    def __add__(self, other: DirectSumOperator) -> DirectSumOperator:
        self._check_compatible(other)
        return DirectSumOperator(a + b for a, b in zip(self, other))

    def __sub__(self, other: DirectSumOperator) -> DirectSumOperator:
        self._check_compatible(other)
        return DirectSumOperator(a - b for a, b in zip(self, other))

    def __mul__(self, scalar) -> DirectSumOperator:
        return DirectSumOperator(scalar * b for b in self)

    __rmul__ = __mul__

    def adjoint(self) -> DirectSumOperator:
        return DirectSumOperator(b.conj().T for b in self)

    def trace(self) -> complex:
        return complex(sum(np.trace(b) for b in self))

    def conjugate_by(self, unitary: DirectSumOperator) -> DirectSumOperator:
        """Return ``U A U^dagger`` block by block."""
        self._check_compatible(unitary)
        return DirectSumOperator(u @ a @ u.conj().T for a, u in zip(self, unitary))

    def to_dense(self) -> np.ndarray:
        """Full matrix in the global manifold-ordered basis."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        start = 0
        for block in self._blocks:
            stop = start + block.shape[0]
            out[start:stop, start:stop] = block
            start = stop
        return out

    def allclose(self, other: DirectSumOperator, atol: float = 1e-12) -> bool:
        self._check_compatible(other)
        return all(np.allclose(a, b, rtol=0.0, atol=atol) for a, b in zip(self, other))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n_max={self.n_max})"

    @classmethod
    def zeros(cls, n_max: int) -> DirectSumOperator:
        return DirectSumOperator(np.zeros((n + 1, n + 1)) for n in range(_check_manifold(n_max) + 1))

    @classmethod
    def identity(cls, n_max: int) -> DirectSumOperator:
        return DirectSumOperator(np.eye(n + 1) for n in range(_check_manifold(n_max) + 1))

    @classmethod
    def from_dense(cls, matrix: np.ndarray, n_max: int, atol: float = 1e-12) -> DirectSumOperator:
        """Split a dense matrix into manifold blocks.

        Raises ``ValueError`` if any cross-manifold element exceeds ``atol``.
        """
        matrix = np.asarray(matrix)
        dim = total_dimension(n_max)
        if matrix.shape != (dim, dim):
            raise ValueError(f"expected shape {(dim, dim)}, got {matrix.shape}")
        op = DirectSumOperator(
            matrix[n * (n + 1) // 2:(n + 1) * (n + 2) // 2,
                   n * (n + 1) // 2:(n + 1) * (n + 2) // 2]
            for n in range(n_max + 1))
        leak = np.abs(matrix - op.to_dense()).max(initial=0.0)
        if leak > atol:
            raise ValueError(f"matrix couples different manifolds (max element {leak:.3g})")
        return op


def embed_block(block: Sequence, n_max: int) -> DirectSumOperator:
    """Place a single manifold block into an otherwise zero direct sum."""
    block = np.asarray(block, dtype=complex)
    if block.ndim != 2 or block.shape[0] != block.shape[1] or block.shape[0] == 0:
        raise ValueError(f"block must be a nonempty square matrix, got shape {block.shape}")
    n = block.shape[0] - 1
    if n > n_max:
        raise TruncationError(f"block lives on manifold {n} but n_max={n_max}")
    return DirectSumOperator(
        block if m == n else np.zeros((m + 1, m + 1)) for m in range(n_max + 1))
