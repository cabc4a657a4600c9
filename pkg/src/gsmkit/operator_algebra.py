"""Dense complex operator utilities shared by every other module.

Operators are plain ``numpy`` arrays of dtype ``complex128``. Functions that
require Hermitian input symmetrise ``(A + A^dagger)/2`` when the residual is
below :data:`HERMITIAN_TOL` and reject the input otherwise.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import ortho_group, unitary_group

from .exceptions import DimensionError, InvalidStateError, NotHermitianError

HERMITIAN_TOL = 1e-12
STATE_TOL = 1e-10


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be two-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def hermiticity_residual(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def as_hermitian(a, tol: float = HERMITIAN_TOL, name: str = "operator") -> np.ndarray:
    """Return the Hermitian part of ``a`` after checking ``||a - a^dagger||_max <= tol``."""
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")
    res = hermiticity_residual(m)
    if res > tol:
        raise NotHermitianError(f"{name} is not Hermitian (residual {res:.3e} > {tol:.1e})")
    return 0.5 * (m + m.conj().T)


def as_density_matrix(rho, tol: float = STATE_TOL) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace and positive semidefinite."""
    m = as_hermitian(rho, name="density matrix")
    tr = np.trace(m).real
    if abs(tr - 1.0) > tol:
        raise InvalidStateError(f"density matrix has trace {tr!r}")
    lo = np.linalg.eigvalsh(m)[0]
    if lo < -tol:
        raise InvalidStateError(f"density matrix has negative eigenvalue {lo:.3e}")
    return m


def hs_inner(a, b) -> float:
    """Hilbert-Schmidt inner product ``Tr(A B)`` of two Hermitian operators."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    # Tr(AB) = sum_ij A_ij B_ji
    val = np.sum(a * b.T)
    if abs(val.imag) > HERMITIAN_TOL * max(1.0, abs(val.real)):
        raise NotHermitianError(f"Tr(AB) has imaginary part {val.imag:.3e}; inputs are not Hermitian")
    return float(val.real)


def gram_matrix(ops) -> np.ndarray:
    """Real matrix of pairwise ``Tr(A_i A_j)`` for a list of Hermitian operators."""
    stack = np.asarray(ops, dtype=np.complex128)
    flat = stack.reshape(len(stack), -1)
    # Tr(A_i A_j) = <vec(A_i^dagger), vec(A_j)> and A_i^dagger = A_i
    return (flat.conj() @ flat.T).real


def eigh(a) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors (columns) of a Hermitian operator."""
    m = as_hermitian(a)
    w, v = np.linalg.eigh(m)
    return w, v


def trace_norm(m) -> float:
    """Sum of singular values."""
    m = as_matrix(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False).sum())


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def flip_operator(d: int) -> np.ndarray:
    """Swap operator ``sum_mn |m><n| (x) |n><m|`` on ``C^d (x) C^d``."""
    if d < 2:
        raise DimensionError("flip operator needs d >= 2")
    f = np.zeros((d * d, d * d), dtype=np.complex128)
    for m in range(d):
        for n in range(d):
            f[m * d + n, n * d + m] = 1.0
    return f


def max_entangled_projector(d: int) -> np.ndarray:
    """``P_+ = |phi><phi|`` with ``|phi> = sum_m |mm> / sqrt(d)``."""
    if d < 2:
        raise DimensionError("maximally entangled state needs d >= 2")
    phi = np.eye(d, dtype=np.complex128).reshape(d * d) / np.sqrt(d)
    return np.outer(phi, phi.conj())


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_pure_state(d: int, seed=None) -> np.ndarray:
    """Haar-random ket of length ``d``."""
    rng = _rng(seed)
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_density_matrix(d: int, rank: int | None = None, seed=None) -> np.ndarray:
    """Ginibre-ensemble state ``G G^dagger / Tr`` with ``G`` of shape ``d x rank``.

    ``seed`` may be an int (deterministic) or a ``numpy.random.Generator``.
    """
    if rank is None:
        rank = d
    if not 1 <= rank <= d:
        raise ValueError(f"rank must be in [1, {d}], got {rank}")
    rng = _rng(seed)
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def haar_unitary(d: int, seed=None) -> np.ndarray:
    return unitary_group.rvs(d, random_state=_rng(seed))


def random_orthogonal(n: int, seed=None) -> np.ndarray:
    if n == 1:
        return np.array([[1.0 if _rng(seed).random() < 0.5 else -1.0]])
    return ortho_group.rvs(n, random_state=_rng(seed))


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0
