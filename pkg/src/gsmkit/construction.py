"""Measurement operators from a basis partition, and the inverse map.

Each block ``alpha`` of a :class:`~gsmkit.basis.BasisPartition` yields a POVM
``E_k = I/M + t H_k`` where the traceless ``H_k`` come in two flavours:

* unprimed: ``H_k = G - sqrt(M)(1 + sqrt(M)) G_k`` (k < M), ``H_M = (1 + sqrt(M)) G``
* primed:   ``H_k = G + sqrt(M)(1 - sqrt(M)) G_k`` (k < M), ``H_M = (1 - sqrt(M)) G``

with ``G`` the block sum. Together with the sign of ``t`` this gives four
variants per block. ``t`` is the primary parameter; ``x = Tr E_k^2`` is
derived from it and loses the sign.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product

import numpy as np

from .basis import BasisPartition, orthonormality_residual
from .exceptions import BasisError, PositivityError
from .operator_algebra import as_hermitian

POSITIVITY_TOL = 1e-10


@dataclass(frozen=True)
class Variant:
    primed: bool
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    @classmethod
    def parse(cls, text: str) -> "Variant":
        """Parse ``"unprimed:+"``, ``"primed:-"`` and the like."""
        m = re.fullmatch(r"\s*(unprimed|primed)\s*:\s*([+-])\s*", text)
        if not m:
            raise ValueError(f"cannot parse variant {text!r}; expected e.g. 'unprimed:+'")
        return cls(m.group(1) == "primed", 1 if m.group(2) == "+" else -1)

    def __str__(self) -> str:
        return f"{'primed' if self.primed else 'unprimed'}:{'+' if self.sign > 0 else '-'}"


ALL_VARIANTS = tuple(Variant(p, s) for p, s in product((False, True), (1, -1)))


@dataclass(frozen=True)
class BlockParams:
    variant: Variant
    t: float
    x: float
    t_range: tuple[float, float]


def _factor(m: int, primed: bool) -> float:
    """``1 + sqrt(M)`` (unprimed) or ``1 - sqrt(M)`` (primed)."""
    return 1 - np.sqrt(m) if primed else 1 + np.sqrt(m)


def h_operators(g_block, primed: bool) -> np.ndarray:
    """``H_{k}``, k = 1..M, from the ``M - 1`` operators of one block; shape ``(M, d, d)``."""
    g_block = np.asarray(g_block, dtype=np.complex128)
    m = len(g_block) + 1
    f = _factor(m, primed)
    g_sum = g_block.sum(axis=0)
    coeff = np.sqrt(m) * (1 + np.sqrt(m)) if not primed else -np.sqrt(m) * (1 - np.sqrt(m))
    hs = [g_sum - coeff * g for g in g_block]
    hs.append(f * g_sum)
    return np.array(hs)


def build_h_operators(p: BasisPartition, alpha: int, primed: bool) -> np.ndarray:
    return h_operators(p.block(alpha), primed)


def t_range(h_ops, m: int) -> tuple[float, float]:
    """Closed interval of ``t`` keeping every ``I/M + t H_k`` positive semidefinite.

    ``[-1/(M lambda_max), 1/(M |lambda_min|)]`` with the extrema taken over the
    spectra of all ``H_k`` in the block.
    """
    h_ops = np.asarray(h_ops)
    if len(h_ops) == 0:
        raise ValueError("empty block")
    evals = np.concatenate([np.linalg.eigvalsh(as_hermitian(h)) for h in h_ops])
    lam_max, lam_min = evals.max(), evals.min()
    scale = max(1.0, float(np.max(np.abs(h_ops))))
    if lam_max <= 1e-14 * scale or lam_min >= -1e-14 * scale:
        raise ValueError("degenerate block: H operators vanish")
    return float(-1.0 / (m * lam_max)), float(1.0 / (m * abs(lam_min)))


def block_t_range(p: BasisPartition, alpha: int, primed: bool) -> tuple[float, float]:
    return t_range(build_h_operators(p, alpha, primed), p.block_sizes[alpha])


def x_from_t(t: float, m: int, d: int, primed: bool = False) -> float:
    """``x = Tr E_k^2 = (d + t^2 M^2 (M-1) f^2) / M^2`` with ``f = 1 +/- sqrt(M)``."""
    f = _factor(m, primed)
    return (d + t * t * m * m * (m - 1) * f * f) / (m * m)


def t_from_x(x: float, m: int, d: int, variant: Variant) -> float:
    """Signed ``t`` producing a block with ``Tr E_k^2 = x`` for the given variant."""
    num = m * m * x - d
    if num <= 0:
        raise ValueError(f"x = {x!r} must exceed d/M^2 = {d / m**2!r}")
    f = _factor(m, variant.primed)
    return variant.sign * float(np.sqrt(num / (m * m * (m - 1) * f * f)))


def t_from_r(r: float, m: int, variant: Variant) -> float:
    """Signed ``t`` giving ``x - y = r``; uses ``x - y = t^2 M f^2``."""
    if r <= 0:
        raise ValueError("r must be positive")
    f = _factor(m, variant.primed)
    return variant.sign * float(np.sqrt(r / (m * f * f)))


def _check_sign(variant: Variant, t: float) -> None:
    if t == 0:
        raise ValueError("t = 0 gives the trivial POVM I/M and is excluded")
    if np.sign(t) != variant.sign:
        raise ValueError(f"t = {t!r} does not match the sign of variant {variant}")


def measurement_block(g_block, variant: Variant, t: float, tol: float = POSITIVITY_TOL,
                      alpha: int | None = None) -> np.ndarray:
    """``E_k = I/M + t H_k``; raises :class:`PositivityError` if any ``E_k`` is not PSD."""
    _check_sign(variant, t)
    hs = h_operators(g_block, variant.primed)
    m, d = len(hs), hs.shape[1]
    es = np.eye(d, dtype=np.complex128) / m + t * hs
    for k, e in enumerate(es):
        lo = np.linalg.eigvalsh(e)[0]
        if lo < -tol:
            rng = t_range(hs, m)
            where = f"block {alpha} " if alpha is not None else ""
            raise PositivityError(
                f"t = {t!r} outside admissible range [{rng[0]!r}, {rng[1]!r}] for variant {variant}: "
                f"{where}element {k} has eigenvalue {lo:.6e}",
                block=alpha, element=k, eigenvalue=float(lo), t_range=rng,
            )
    return es


def build_measurement_block(p: BasisPartition, alpha: int, variant: Variant, t: float,
                            tol: float = POSITIVITY_TOL) -> np.ndarray:
    return measurement_block(p.block(alpha), variant, t, tol, alpha=alpha)


def block_params(p: BasisPartition, alpha: int, variant: Variant, t: float) -> BlockParams:
    m = p.block_sizes[alpha]
    return BlockParams(variant, float(t), x_from_t(t, m, p.dim, variant.primed),
                       block_t_range(p, alpha, variant.primed))


def recover_basis_block(e_ops, t: float, variant: Variant, tol: float = 1e-8) -> np.ndarray:
    """Invert the construction: the ``M - 1`` basis operators behind a POVM block.

    unprimed: ``G_k = [I + sqrt(M) E_M - sqrt(M)(1+sqrt(M)) E_k] / (t M (1+sqrt(M))^2)``
    primed:   ``G_k = [I - sqrt(M) E_M + sqrt(M)(1-sqrt(M)) E_k] / (t M (1-sqrt(M))^2)``
    """
    _check_sign(variant, t)
    es = np.asarray(e_ops, dtype=np.complex128)
    m, d = len(es), es.shape[1]
    sm = np.sqrt(m)
    ident = np.eye(d)
    if variant.primed:
        gs = [(ident - sm * es[-1] + sm * (1 - sm) * e) / (t * m * (1 - sm) ** 2) for e in es[:-1]]
    else:
        gs = [(ident + sm * es[-1] - sm * (1 + sm) * e) / (t * m * (1 + sm) ** 2) for e in es[:-1]]
    gs = np.array(gs)
    res = orthonormality_residual(gs)
    if res > tol:
        raise BasisError(
            f"recovered operators are not orthonormal (residual {res:.3e}); "
            f"the POVM was not built with variant {variant} at t = {t!r}"
        )
    return gs


def match_elements(a, b, tol: float = 1e-9) -> list[int] | None:
    """Permutation ``pi`` with ``a[k] == b[pi[k]]`` entrywise within ``tol``, or None."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return None
    pairing, used = [], set()
    for x in a:
        hit = next((l for l, y in enumerate(b) if l not in used and np.max(np.abs(x - y)) <= tol), None)
        if hit is None:
            return None
        used.add(hit)
        pairing.append(hit)
    return pairing


@dataclass(frozen=True)
class CoincidenceReport:
    x: float
    t: float
    t_prime: float
    equal_sets: bool
    pairing: list[int] | None
    feasible_variants: list[str]
    distinct_family_count: int


def variant_coincidence(p: BasisPartition, alpha: int, x: float, tol: float = 1e-9) -> CoincidenceReport:
    """Compare the unprimed ``t > 0`` POVM with the primed ``t' < 0`` POVM at equal ``x``.

    They coincide as sets exactly for ``M <= 3`` (identity pairing for
    ``M = 2``, first two elements swapped for ``M = 3``).
    """
    m, d = p.block_sizes[alpha], p.dim
    v_plain, v_primed = Variant(False, 1), Variant(True, -1)
    t = t_from_x(x, m, d, v_plain)
    tp = t_from_x(x, m, d, v_primed)
    e = build_measurement_block(p, alpha, v_plain, t)
    ep = build_measurement_block(p, alpha, v_primed, tp)
    pairing = match_elements(e, ep, tol)

    families, names = [], []
    for v in ALL_VARIANTS:
        try:
            fam = build_measurement_block(p, alpha, v, t_from_x(x, m, d, v))
        except PositivityError:
            continue
        names.append(str(v))
        if not any(match_elements(fam, other, tol) is not None for other in families):
            families.append(fam)
    return CoincidenceReport(float(x), t, tp, pairing is not None, pairing, names, len(families))


def max_feasible_x(p: BasisPartition, alpha: int, variant: Variant) -> float:
    """Largest ``x`` reachable by ``variant`` in block ``alpha`` (at the t-range endpoint)."""
    lo, hi = block_t_range(p, alpha, variant.primed)
    t = hi if variant.sign > 0 else lo
    return x_from_t(t, p.block_sizes[alpha], p.dim, variant.primed)


def max_feasible_r(p: BasisPartition, variants) -> float:
    """Largest common ``r = x_alpha - y_alpha`` reachable by every block with its variant."""
    best = np.inf
    for alpha, v in enumerate(variants):
        m = p.block_sizes[alpha]
        lo, hi = block_t_range(p, alpha, v.primed)
        t = hi if v.sign > 0 else lo
        best = min(best, t * t * m * _factor(m, v.primed) ** 2)
    return float(best)
