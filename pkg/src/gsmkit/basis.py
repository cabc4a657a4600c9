"""Traceless orthonormal Hermitian operator bases and their block partitions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import BasisError, DimensionError
from .operator_algebra import as_hermitian, gram_matrix, random_orthogonal

ORTHONORMAL_TOL = 1e-10


def gell_mann_basis(d: int) -> list[np.ndarray]:
    """Generalised Gell-Mann matrices normalised to ``Tr(G_i G_j) = delta_ij``.

    Order: symmetric ``(|j><k| + |k><j|)/sqrt2`` for ``j < k``, antisymmetric
    ``(-i|j><k| + i|k><j|)/sqrt2`` for ``j < k``, then the ``d - 1`` diagonal
    operators. For ``d = 2`` this is ``sigma_x, sigma_y, sigma_z`` over ``sqrt2``.
    """
    if d < 2:
        raise DimensionError("Gell-Mann basis needs d >= 2")
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    ops = []
    for j, k in pairs:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j, k] = g[k, j] = 1 / np.sqrt(2)
        ops.append(g)
    for j, k in pairs:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j, k] = -1j / np.sqrt(2)
        g[k, j] = 1j / np.sqrt(2)
        ops.append(g)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        ops.append(np.diag(diag / np.sqrt(l * (l + 1))).astype(np.complex128))
    return ops


def orthonormality_residual(ops: Sequence[np.ndarray]) -> float:
    """Max deviation of ``Tr(G_i G_j)`` from ``delta_ij`` and of ``Tr G_i`` from 0."""
    if len(ops) == 0:
        return 0.0
    gram = gram_matrix(ops)
    traces = np.array([np.trace(g) for g in ops])
    return float(max(np.max(np.abs(gram - np.eye(len(ops)))), np.max(np.abs(traces))))


def check_orthonormal(ops, tol: float = ORTHONORMAL_TOL) -> None:
    res = orthonormality_residual(ops)
    if res > tol:
        raise BasisError(f"operators are not traceless orthonormal (residual {res:.3e} > {tol:.1e})")


@dataclass(frozen=True)
class BasisPartition:
    """Traceless orthonormal operators grouped into blocks of ``M_alpha - 1``.

    ``blocks[alpha]`` has shape ``(M_alpha - 1, d, d)``.
    """

    dim: int
    block_sizes: tuple[int, ...]
    blocks: tuple[np.ndarray, ...]

    @property
    def n_blocks(self) -> int:
        return len(self.block_sizes)

    def block(self, alpha: int) -> np.ndarray:
        return self.blocks[alpha]

    def block_sum(self, alpha: int) -> np.ndarray:
        """``G_alpha``: the sum of all operators in block ``alpha``."""
        return self.blocks[alpha].sum(axis=0)

    def operators(self) -> list[np.ndarray]:
        return [g for b in self.blocks for g in b]

    @property
    def is_complete(self) -> bool:
        return sum(m - 1 for m in self.block_sizes) == self.dim**2 - 1


def _validate_sizes(block_sizes, d: int, available: int) -> tuple[int, ...]:
    sizes = tuple(int(m) for m in block_sizes)
    if not sizes:
        raise ValueError("at least one block is required")
    if any(m < 2 for m in sizes):
        raise ValueError(f"every block needs M_alpha >= 2, got {sizes}")
    need = sum(m - 1 for m in sizes)
    if need > d * d - 1:
        raise ValueError(f"sum(M_alpha - 1) = {need} exceeds d^2 - 1 = {d * d - 1}")
    if need > available:
        raise ValueError(f"blocks need {need} operators but only {available} were given")
    return sizes


def partition_basis(ops, block_sizes, tol: float = ORTHONORMAL_TOL) -> BasisPartition:
    """Split ``ops`` in order into blocks holding ``M_alpha - 1`` operators each.

    Only the consumed prefix is validated; trailing operators are ignored.
    """
    ops = [as_hermitian(g) for g in ops]
    if not ops:
        raise ValueError("no operators given")
    d = ops[0].shape[0]
    if any(g.shape != (d, d) for g in ops):
        raise DimensionError("operators have inconsistent shapes")
    sizes = _validate_sizes(block_sizes, d, len(ops))
    used = ops[: sum(m - 1 for m in sizes)]
    check_orthonormal(used, tol)
    blocks = []
    start = 0
    for m in sizes:
        blocks.append(np.array(used[start : start + m - 1]))
        start += m - 1
    return BasisPartition(d, sizes, tuple(blocks))


def rotate_block(p: BasisPartition, alpha: int, orthogonal, tol: float = ORTHONORMAL_TOL) -> BasisPartition:
    """Replace block ``alpha`` by ``G'_k = sum_j O_kj G_j`` for a real orthogonal ``O``."""
    o = np.asarray(orthogonal, dtype=float)
    n = p.block_sizes[alpha] - 1
    if o.shape != (n, n):
        raise DimensionError(f"rotation for block {alpha} must be {n}x{n}, got {o.shape}")
    dev = np.max(np.abs(o @ o.T - np.eye(n)))
    if dev > tol:
        raise ValueError(f"rotation is not orthogonal (||O O^T - I||_max = {dev:.3e})")
    rotated = np.einsum("kj,jab->kab", o, p.blocks[alpha])
    blocks = list(p.blocks)
    blocks[alpha] = rotated
    return BasisPartition(p.dim, p.block_sizes, tuple(blocks))


def random_partition(d: int, block_sizes, seed=None) -> BasisPartition:
    """Partition of a randomly rotated Gell-Mann basis.

    A Haar-random element of ``O(d^2 - 1)`` mixes all traceless basis
    operators, so blocks are generic orthonormal subsets rather than
    axis-aligned Gell-Mann families.
    """
    gm = np.array(gell_mann_basis(d))
    o = random_orthogonal(d * d - 1, seed)
    mixed = np.einsum("kj,jab->kab", o, gm)
    mixed = 0.5 * (mixed + mixed.conj().transpose(0, 2, 1))
    return partition_basis(list(mixed), block_sizes)
