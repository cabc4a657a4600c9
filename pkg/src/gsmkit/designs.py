"""Conical 2-design certification.

A family ``{E_i}`` is a conical 2-design when

    sum_i E_i (x) E_i = k_plus I (x) I + k_minus F,   k_plus >= k_minus > 0,

with ``F`` the flip operator. Two independent routes are computed: the
operator sum itself, and the channel sum ``sum_alpha Phi_alpha`` compared
against ``k_minus id + k_plus d Phi_0`` on a complete operator basis. The
Choi matrix of ``(sum Phi_alpha) o T`` ties them together.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError
from .gsm import ClassTag, GeneralizedSymmetricMeasurement, classify
from .operator_algebra import as_matrix, flip_operator, max_entangled_projector

RESIDUAL_TOL = 1e-8
AGREEMENT_TOL = 1e-9


class DesignKind(enum.Enum):
    CONICAL_2_DESIGN = "CONICAL_2_DESIGN"
    WEIGHTED_IDENTITY_ONLY = "WEIGHTED_IDENTITY_ONLY"
    NONE = "NONE"


@dataclass(frozen=True)
class DesignCertificate:
    kind: DesignKind
    kappa_plus: float
    kappa_minus: float
    mu: float
    residual_operator: float
    residual_map: float
    r: float | None = None
    s: float | None = None
    weighted: bool = False
    # map-route kappas and the Choi-vs-direct-sum discrepancy
    kappa_map: tuple[float, float] = (np.nan, np.nan)
    choi_discrepancy: float = np.nan
    paths_agree: bool = True


def depolarizing_channel(X) -> np.ndarray:
    """``Phi_0[X] = I Tr(X) / d``."""
    X = as_matrix(X)
    d = X.shape[0]
    return np.eye(d, dtype=np.complex128) * np.trace(X) / d


def apply_measurement_channel(g: GeneralizedSymmetricMeasurement, alpha: int, X,
                              weighted: bool = False) -> np.ndarray:
    """``Phi_alpha[X] = sum_k E_k Tr(X E_k)``, divided by ``w_alpha`` when ``weighted``."""
    X = as_matrix(X)
    if X.shape != (g.dim, g.dim):
        raise DimensionError(f"operator has shape {X.shape}, expected {(g.dim, g.dim)}")
    es = g.blocks[alpha]
    # Tr(X E_k) = sum_ij X_ij (E_k)_ji
    weights = np.einsum("ij,kji->k", X, es)
    out = np.einsum("k,kab->ab", weights, es)
    if weighted:
        out = out / (g.dim / g.block_sizes[alpha])
    return out


def channel_sum(g: GeneralizedSymmetricMeasurement, X, weighted: bool = False) -> np.ndarray:
    return sum(apply_measurement_channel(g, a, X, weighted) for a in range(g.n_povms))


def tensor_square_sum(g: GeneralizedSymmetricMeasurement, weighted: bool = False) -> np.ndarray:
    """``sum_{alpha,k} c_alpha E_{alpha,k} (x) E_{alpha,k}`` with ``c = 1`` or ``1/w_alpha``."""
    d = g.dim
    s = np.zeros((d * d, d * d), dtype=np.complex128)
    for m, block in zip(g.block_sizes, g.blocks):
        c = m / d if weighted else 1.0
        for e in block:
            s += c * np.kron(e, e)
    return s


def _project(tr_a: float, tr_b: float, d: int) -> tuple[float, float]:
    # Gram matrix of (I(x)I, F) under Tr(A^dagger B): [[d^2, d], [d, d^2]]
    gram = np.array([[d * d, d], [d, d * d]], dtype=float)
    kp, km = np.linalg.solve(gram, [tr_a, tr_b])
    return float(kp), float(km)


def fit_kappas(S, d: int) -> tuple[float, float, float]:
    """Hilbert-Schmidt projection of ``S`` onto span{I(x)I, F}.

    Returns ``(k_plus, k_minus, residual)`` with the max-norm residual of the fit.
    """
    S = as_matrix(S)
    F = flip_operator(d)
    kp, km = _project(np.trace(S).real, np.trace(S @ F).real, d)
    fit = kp * np.eye(d * d) + km * F
    return kp, km, float(np.max(np.abs(S - fit)))


def channel_superoperator(g: GeneralizedSymmetricMeasurement, weighted: bool = False) -> np.ndarray:
    """Matrix ``L`` of ``sum_alpha Phi_alpha`` acting on row-major ``vec(X)``."""
    d = g.dim
    cols = []
    for m in range(d):
        for n in range(d):
            unit = np.zeros((d, d), dtype=np.complex128)
            unit[m, n] = 1.0
            cols.append(channel_sum(g, unit, weighted).ravel())
    return np.array(cols).T


def fit_map_kappas(g: GeneralizedSymmetricMeasurement, weighted: bool = False) -> tuple[float, float, float]:
    """Fit ``sum Phi_alpha = k_minus id + k_plus d Phi_0`` on the matrix-unit basis.

    In vec form ``d Phi_0`` is ``|vec I><vec I|``; it and the identity
    superoperator have the same Gram matrix as ``(I(x)I, F)``.
    """
    d = g.dim
    L = channel_superoperator(g, weighted)
    vi = np.eye(d).ravel()
    depol = np.outer(vi, vi)
    # <id, L> = Tr L, <|I><I|, L> = <vec I| L |vec I>
    kp, km = _project(float((vi @ L @ vi).real), float(np.trace(L).real), d)
    fit = kp * depol + km * np.eye(d * d)
    return kp, km, float(np.max(np.abs(L - fit)))


def choi_of_channel_sum(g: GeneralizedSymmetricMeasurement, weighted: bool = False) -> np.ndarray:
    """``(id (x) [sum Phi_alpha] o T)[d P_+] = sum_mn |m><n| (x) Phi[|n><m|]``."""
    d = g.dim
    dp = d * max_entangled_projector(d)
    out = np.zeros((d * d, d * d), dtype=np.complex128)
    # dP_+ = sum_mn |m><n| (x) |m><n|; apply T then the channel sum on the second factor
    for m in range(d):
        for n in range(d):
            second = dp[m * d : (m + 1) * d, n * d : (n + 1) * d]
            out[m * d : (m + 1) * d, n * d : (n + 1) * d] = channel_sum(g, second.T, weighted)
    return out


def certify_design(g: GeneralizedSymmetricMeasurement, tol: float = RESIDUAL_TOL) -> DesignCertificate:
    """Decide whether the measurement is a conical 2-design and extract ``k_plus, k_minus``.

    Measurements with constant ``x - y`` certify with ``k_plus = mu - r/d`` and
    ``k_minus = r``. Otherwise the ``1/w_alpha``-weighted identity is tried;
    if it holds (constant ``(x - y)/w``) the kind is WEIGHTED_IDENTITY_ONLY,
    unless all ``w_alpha = 1`` in which case both identities coincide.
    """
    d = g.dim
    cls = classify(g)

    def route(weighted):
        S = tensor_square_sum(g, weighted)
        kp, km, res_op = fit_kappas(S, d)
        mkp, mkm, res_map = fit_map_kappas(g, weighted)
        choi = choi_of_channel_sum(g, weighted)
        disc = float(np.max(np.abs(choi - S)))
        agree = disc <= AGREEMENT_TOL and abs(kp - mkp) <= AGREEMENT_TOL and abs(km - mkm) <= AGREEMENT_TOL
        return kp, km, res_op, res_map, (mkp, mkm), disc, agree

    kp, km, res_op, res_map, kmap, disc, agree = route(False)
    if res_op <= tol and res_map <= tol and km > 0 and kp >= km - tol:
        return DesignCertificate(DesignKind.CONICAL_2_DESIGN, kp, km, g.mu, res_op, res_map,
                                 r=km, s=cls.s, kappa_map=kmap, choi_discrepancy=disc, paths_agree=agree)

    wkp, wkm, wres_op, wres_map, wkmap, wdisc, wagree = route(True)
    if wres_op <= tol and wres_map <= tol and wkm > 0:
        return DesignCertificate(DesignKind.WEIGHTED_IDENTITY_ONLY, wkp, wkm, g.mu, wres_op, wres_map,
                                 r=cls.r, s=wkm, weighted=True, kappa_map=wkmap,
                                 choi_discrepancy=wdisc, paths_agree=wagree)
    return DesignCertificate(DesignKind.NONE, kp, km, g.mu, res_op, res_map, r=cls.r, s=cls.s,
                             kappa_map=kmap, choi_discrepancy=disc, paths_agree=agree)


def is_r_class(g: GeneralizedSymmetricMeasurement) -> bool:
    return ClassTag.R_CLASS in classify(g)
