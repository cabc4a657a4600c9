"""Dual frames, outcome statistics, entropic bounds and separability tests."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionError, NotInformationallyCompleteError, NotRClassError
from .gsm import ClassTag, GeneralizedSymmetricMeasurement, classify, is_informationally_complete
from .operator_algebra import as_density_matrix, random_pure_state, trace_norm

PROB_TOL = 1e-10
CLIP_TOL = 1e-12
SEPARABILITY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DualFrame:
    """``F_{a,k} = a_a E_{a,k} - b_a I`` with ``rho = sum p_{a,k} F_{a,k}``."""

    blocks: tuple[np.ndarray, ...]
    a: np.ndarray
    b: np.ndarray

    def reconstruct(self, table: "ProbabilityTable") -> np.ndarray:
        return sum(np.einsum("k,kij->ij", p, f) for p, f in zip(table.blocks, self.blocks))


def dual_frame(g: GeneralizedSymmetricMeasurement) -> DualFrame:
    """Closed-form dual frame with ``a = 1/(x - y)`` and ``b = w/(d(x - y)) - 1/(dN)``."""
    ic = is_informationally_complete(g)
    if not ic:
        raise NotInformationallyCompleteError(
            f"measurement is not informationally complete: rank {ic.rank} of {ic.required_rank}, "
            f"{ic.total_elements} elements vs d^2 + N - 1 = {ic.required_elements}",
            rank=ic.rank, required=ic.required_rank,
        )
    p, d, n = g.params, g.dim, g.n_povms
    diff = p.x - p.y
    a = 1.0 / diff
    b = p.w / (d * diff) - 1.0 / (d * n)
    ident = np.eye(d)
    blocks = tuple(a[i] * blk - b[i] * ident for i, blk in enumerate(g.blocks))
    return DualFrame(blocks, a, b)


@dataclass(frozen=True, eq=False)
class ProbabilityTable:
    blocks: tuple[np.ndarray, ...]

    @property
    def n_povms(self) -> int:
        return len(self.blocks)

    def shannon(self) -> np.ndarray:
        """Per-POVM Shannon entropy in nats, with ``0 log 0 = 0``."""
        out = []
        for p in self.blocks:
            nz = p[p > 0]
            out.append(float(-np.sum(nz * np.log(nz))))
        return np.array(out)

    def renyi2(self) -> np.ndarray:
        """Per-POVM collision entropy ``-log sum p^2`` in nats."""
        return np.array([-np.log(np.sum(p * p)) for p in self.blocks])

    @property
    def index_of_coincidence(self) -> float:
        return index_of_coincidence(self)


def probabilities(g: GeneralizedSymmetricMeasurement, rho) -> ProbabilityTable:
    """``p_{a,k} = Tr(rho E_{a,k})``; tiny negative round-off is clipped to zero."""
    rho = as_density_matrix(rho)
    if rho.shape != (g.dim, g.dim):
        raise DimensionError(f"state has shape {rho.shape}, measurement acts on d = {g.dim}")
    blocks = []
    for a, es in enumerate(g.blocks):
        p = np.einsum("ij,kji->k", rho, es).real
        if p.min() < -CLIP_TOL:
            raise ValueError(f"negative probability {p.min():.3e} in POVM {a}")
        p = np.clip(p, 0.0, None)
        if abs(p.sum() - 1.0) > PROB_TOL:
            raise ValueError(f"POVM {a} probabilities sum to {p.sum()!r}")
        blocks.append(p)
    return ProbabilityTable(tuple(blocks))


def index_of_coincidence(table: ProbabilityTable) -> float:
    return float(sum(np.sum(p * p) for p in table.blocks))


def purity_from_probabilities(g: GeneralizedSymmetricMeasurement, table: ProbabilityTable) -> float:
    """``Tr rho^2 = 1/d + sum_a (sum_k p_{a,k}^2 - 1/M_a) / (x_a - y_a)``.

    Valid for informationally complete measurements, any symmetry class.
    """
    diff = g.params.x - g.params.y
    return float(1.0 / g.dim + sum((np.sum(p * p) - 1.0 / m) / dd
                                   for p, m, dd in zip(table.blocks, g.block_sizes, diff)))


def _require_r(g: GeneralizedSymmetricMeasurement) -> float:
    cls = classify(g)
    if ClassTag.R_CLASS not in cls:
        raise NotRClassError(
            "bound not analytically available: x_alpha - y_alpha is not constant "
            f"(values {np.round(g.params.x - g.params.y, 12).tolist()})"
        )
    return cls.r


def c_max(g: GeneralizedSymmetricMeasurement) -> float:
    """Upper bound ``(d-1) r / d + mu`` on the index of coincidence, attained on pure states."""
    r = _require_r(g)
    return (g.dim - 1) * r / g.dim + g.mu


@dataclass(frozen=True)
class EntropyBound:
    nats: float

    @property
    def bits(self) -> float:
        return self.nats / np.log(2)


def eur_bound(g: GeneralizedSymmetricMeasurement) -> EntropyBound:
    """State-independent lower bound ``log(N / C_max)`` on the mean Shannon entropy."""
    return EntropyBound(float(np.log(g.n_povms / c_max(g))))


def state_eur_bound(table: ProbabilityTable) -> EntropyBound:
    """State-dependent bound ``log(N / C(rho))``."""
    return EntropyBound(float(np.log(table.n_povms / index_of_coincidence(table))))


@dataclass(frozen=True)
class EntropyReport:
    shannon: np.ndarray
    renyi2: np.ndarray
    mean_shannon: float
    state_bound: float
    shannon_ge_renyi: bool
    mean_ge_bound: bool

    @property
    def ok(self) -> bool:
        return self.shannon_ge_renyi and self.mean_ge_bound


def shannon_renyi_check(table: ProbabilityTable, tol: float = 1e-12) -> EntropyReport:
    """Check ``H >= R_2`` per POVM and ``mean H >= log(N / C)``, all in nats."""
    h = table.shannon()
    r = table.renyi2()
    mean = float(h.mean())
    bound = state_eur_bound(table).nats
    return EntropyReport(h, r, mean, bound, bool(np.all(h >= r - tol)), mean >= bound - tol)


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    matrix: np.ndarray
    row_labels: list
    col_labels: list

    @property
    def trace(self) -> float | None:
        if self.matrix.shape[0] != self.matrix.shape[1]:
            return None
        return float(np.trace(self.matrix))

    @property
    def trace_norm(self) -> float:
        return trace_norm(self.matrix)


def correlation_matrix(gA: GeneralizedSymmetricMeasurement, gB: GeneralizedSymmetricMeasurement,
                       rho_ab) -> CorrelationMatrix:
    """``P_{(a,k),(b,l)} = Tr[rho (E^A_{a,k} (x) E^B_{b,l})]``."""
    dA, dB = gA.dim, gB.dim
    rho = as_density_matrix(rho_ab)
    if rho.shape != (dA * dB, dA * dB):
        raise DimensionError(f"state has shape {rho.shape}, expected {(dA * dB, dA * dB)}")
    ea = np.array(gA.operators())
    eb = np.array(gB.operators())
    r4 = rho.reshape(dA, dB, dA, dB)
    # Tr[rho (A (x) B)] = sum rho_{(i j),(k l)} A_{k i} B_{l j}
    mat = np.einsum("ijkl,pki,qlj->pq", r4, ea, eb).real
    return CorrelationMatrix(mat, gA.labels(), gB.labels())


class Verdict(enum.Enum):
    ENTANGLED = "ENTANGLED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class SeparabilityReport:
    verdict: Verdict
    trace_norm: float
    trace_norm_bound: float
    trace: float | None = None
    trace_bound: float | None = None
    tolerance: float = SEPARABILITY_TOL
    violations: list = field(default_factory=list)

    @property
    def trace_norm_margin(self) -> float:
        """Positive when the trace-norm criterion is violated."""
        return self.trace_norm - self.trace_norm_bound

    @property
    def trace_margin(self) -> float | None:
        return None if self.trace is None else self.trace - self.trace_bound


def separability_test(gA: GeneralizedSymmetricMeasurement, gB: GeneralizedSymmetricMeasurement,
                      rho_ab, tol: float = SEPARABILITY_TOL) -> SeparabilityReport:
    """Necessary separability conditions from the correlation matrix.

    ``||P||_Tr <= sqrt(Cmax_A Cmax_B)`` always; ``Tr P <= (Cmax_A + Cmax_B)/2``
    additionally when ``d_A = d_B`` and ``P`` is square. Violation of either
    proves entanglement; satisfying both proves nothing.
    """
    ca, cb = c_max(gA), c_max(gB)
    P = correlation_matrix(gA, gB, rho_ab)
    tn = P.trace_norm
    tn_bound = float(np.sqrt(ca * cb))
    violations = []
    if tn - tn_bound > tol:
        violations.append("trace_norm")
    tr = tr_bound = None
    if gA.dim == gB.dim and P.trace is not None:
        tr = P.trace
        tr_bound = (ca + cb) / 2
        if tr - tr_bound > tol:
            violations.append("trace")
    verdict = Verdict.ENTANGLED if violations else Verdict.INCONCLUSIVE
    return SeparabilityReport(verdict, tn, tn_bound, tr, tr_bound, tol, violations)


def random_separable_state(dA: int, dB: int, n_terms: int = 10, seed=None) -> np.ndarray:
    """Dirichlet mixture of Haar-random pure product states."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(n_terms))
    rho = np.zeros((dA * dB, dA * dB), dtype=np.complex128)
    for w in weights:
        psi = np.kron(random_pure_state(dA, rng), random_pure_state(dB, rng))
        rho += w * np.outer(psi, psi.conj())
    return 0.5 * (rho + rho.conj().T)
