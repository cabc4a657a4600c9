"""Generalised symmetric measurements: verification, informational completeness
and symmetry classes.

A generalised symmetric measurement (GSM) is a list of ``N`` POVMs, POVM
``alpha`` having ``M_alpha`` elements, such that

    Tr E_{a,k}           = w_a
    Tr E_{a,k}^2         = x_a
    Tr E_{a,k} E_{a,l}   = y_a          (l != k)
    Tr E_{a,k} E_{b,l}   = z_ab         (b != a)

with ``w_a = d/M_a``, ``y_a = (d - M_a x_a)/(M_a (M_a - 1))``,
``z_ab = d/(M_a M_b)`` and ``d/M_a^2 < x_a <= min(d^2/M_a^2, d/M_a)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .basis import BasisPartition
from .construction import BlockParams, Variant, block_params, build_measurement_block, t_from_r
from .exceptions import DimensionError, GSMError
from .operator_algebra import gram_matrix, hermiticity_residual

TRACE_TOL = 1e-9
POSITIVITY_TOL = 1e-10
IC_RANK_RTOL = 1e-8


@dataclass(frozen=True)
class SymmetryParameters:
    w: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray  # N x N; diagonal holds d/M_alpha^2

    @property
    def differences(self) -> np.ndarray:
        """``x_alpha - y_alpha`` per POVM."""
        return self.x - self.y


@dataclass(frozen=True, eq=False)
class GeneralizedSymmetricMeasurement:
    dim: int
    block_sizes: tuple[int, ...]
    blocks: tuple[np.ndarray, ...]
    params: SymmetryParameters
    construction: tuple[BlockParams, ...] | None = None

    @property
    def n_povms(self) -> int:
        return len(self.block_sizes)

    @property
    def mu(self) -> float:
        """``sum_alpha 1/M_alpha``."""
        return float(sum(1.0 / m for m in self.block_sizes))

    @property
    def total_elements(self) -> int:
        return int(sum(self.block_sizes))

    def operators(self) -> list[np.ndarray]:
        return [e for b in self.blocks for e in b]

    def labels(self) -> list[tuple[int, int]]:
        return [(a, k) for a, m in enumerate(self.block_sizes) for k in range(m)]


@dataclass(frozen=True)
class Violation:
    condition: str
    indices: tuple
    expected: float
    measured: float

    @property
    def deviation(self) -> float:
        return abs(self.measured - self.expected)


@dataclass
class VerificationResult:
    gsm: GeneralizedSymmetricMeasurement | None
    violations: list[Violation] = field(default_factory=list)
    max_deviation: float = 0.0
    tolerance: float = TRACE_TOL

    @property
    def ok(self) -> bool:
        return not self.violations


def _as_blocks(candidate, d: int) -> list[np.ndarray]:
    blocks = []
    if len(candidate) == 0:
        raise ValueError("no POVMs given")
    for a, block in enumerate(candidate):
        arr = np.asarray(block, dtype=np.complex128)
        if arr.ndim != 3 or len(arr) == 0:
            raise ValueError(f"POVM {a} must be a non-empty list of square matrices")
        if arr.shape[1:] != (d, d):
            raise DimensionError(f"POVM {a} has operators of shape {arr.shape[1:]}, expected {(d, d)}")
        blocks.append(arr)
    return blocks


def verify_gsm(candidate: Sequence, d: int, tol: float = TRACE_TOL) -> VerificationResult:
    """Check every defining condition and extract ``(w, x, y, z)``.

    Parameters are the averages of the measured traces; every individual trace
    is then compared against them. All failures are collected; nothing raises
    except malformed input.
    """
    blocks = _as_blocks(candidate, d)
    sizes = tuple(len(b) for b in blocks)
    n = len(blocks)
    viol: list[Violation] = []

    for a, b in enumerate(blocks):
        if sizes[a] < 2:
            viol.append(Violation("block_size", (a,), 2, sizes[a]))
        for k, e in enumerate(b):
            h = hermiticity_residual(e)
            if h > tol:
                viol.append(Violation("hermitian", (a, k), 0.0, h))
    blocks = [0.5 * (b + b.conj().transpose(0, 2, 1)) for b in blocks]

    for a, b in enumerate(blocks):
        for k, e in enumerate(b):
            lo = float(np.linalg.eigvalsh(e)[0])
            if lo < -POSITIVITY_TOL:
                viol.append(Violation("positivity", (a, k), 0.0, lo))
        dev = float(np.max(np.abs(b.sum(axis=0) - np.eye(d))))
        if dev > tol:
            viol.append(Violation("completeness", (a,), 0.0, dev))

    ops = [e for b in blocks for e in b]
    gram = gram_matrix(ops)
    traces = np.array([np.trace(e).real for e in ops])
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    sl = [slice(offsets[a], offsets[a + 1]) for a in range(n)]

    w = np.array([traces[s].mean() for s in sl])
    x = np.array([np.diag(gram)[s].mean() for s in sl])
    y = np.empty(n)
    z = np.empty((n, n))
    for a in range(n):
        sub = gram[sl[a], sl[a]]
        off = sub[~np.eye(sizes[a], dtype=bool)]
        y[a] = off.mean() if off.size else np.nan
        for b in range(n):
            z[a, b] = d / sizes[a] ** 2 if a == b else gram[sl[a], sl[b]].mean()

    max_dev = 0.0

    def check(cond, idx, expected, measured):
        nonlocal max_dev
        dev = abs(measured - expected)
        max_dev = max(max_dev, dev)
        if dev > tol:
            viol.append(Violation(cond, idx, float(expected), float(measured)))

    for a in range(n):
        for k in range(sizes[a]):
            i = offsets[a] + k
            check("trace", (a, k), w[a], traces[i])
            check("purity", (a, k), x[a], gram[i, i])
            for l in range(sizes[a]):
                if l != k:
                    check("overlap", (a, k, a, l), y[a], gram[i, offsets[a] + l])
            for b in range(n):
                if b == a:
                    continue
                for l in range(sizes[b]):
                    check("cross", (a, k, b, l), z[a, b], gram[i, offsets[b] + l])

    for a in range(n):
        m = sizes[a]
        check("w_relation", (a,), d / m, w[a])
        if m >= 2:
            check("y_relation", (a,), (d - m * x[a]) / (m * (m - 1)), y[a])
        for b in range(n):
            if b != a:
                check("z_relation", (a, b), d / (m * sizes[b]), z[a, b])
        lower, upper = d / m**2, min(d * d / m**2, d / m)
        if not x[a] - lower > tol:
            viol.append(Violation("x_lower_bound", (a,), lower, float(x[a])))
        if x[a] > upper + tol:
            viol.append(Violation("x_upper_bound", (a,), upper, float(x[a])))

    params = SymmetryParameters(w, x, y, z)
    gsm = None
    if not viol:
        gsm = GeneralizedSymmetricMeasurement(d, sizes, tuple(blocks), params)
    return VerificationResult(gsm, viol, float(max_dev), tol)


def construct_gsm(p: BasisPartition, variants: Sequence[Variant], ts: Sequence[float],
                  tol: float = TRACE_TOL) -> GeneralizedSymmetricMeasurement:
    """Build one POVM per block of ``p`` and verify the result."""
    if len(variants) != p.n_blocks or len(ts) != p.n_blocks:
        raise ValueError(f"need one variant and one t per block ({p.n_blocks})")
    blocks = [build_measurement_block(p, a, v, t) for a, (v, t) in enumerate(zip(variants, ts))]
    res = verify_gsm(blocks, p.dim, tol)
    if not res.ok:
        raise GSMError(f"construction failed verification: {res.violations[:3]}")
    prov = tuple(block_params(p, a, v, t) for a, (v, t) in enumerate(zip(variants, ts)))
    g = res.gsm
    return GeneralizedSymmetricMeasurement(g.dim, g.block_sizes, g.blocks, g.params, prov)


def r_class_gsm(p: BasisPartition, r: float, variants: Sequence[Variant] | None = None,
                tol: float = TRACE_TOL) -> GeneralizedSymmetricMeasurement:
    """GSM with ``x_alpha - y_alpha = r`` for every POVM (default variant unprimed, t > 0)."""
    if variants is None:
        variants = [Variant(False, 1)] * p.n_blocks
    ts = [t_from_r(r, m, v) for m, v in zip(p.block_sizes, variants)]
    return construct_gsm(p, variants, ts, tol)


@dataclass(frozen=True)
class ICReport:
    informationally_complete: bool
    count_ok: bool
    total_elements: int
    required_elements: int
    rank: int
    required_rank: int
    singular_values: np.ndarray

    def __bool__(self) -> bool:
        return self.informationally_complete


def is_informationally_complete(g: GeneralizedSymmetricMeasurement, rtol: float = IC_RANK_RTOL) -> ICReport:
    """Counting criterion ``sum M_alpha = d^2 + N - 1`` plus the numerical rank of
    ``{I, E_{alpha,k} : k < M_alpha}``; both must hold."""
    d = g.dim
    required = d * d + g.n_povms - 1
    vecs = [np.eye(d, dtype=np.complex128).ravel()]
    for b in g.blocks:
        vecs.extend(e.ravel() for e in b[:-1])
    sv = np.linalg.svd(np.array(vecs), compute_uv=False)
    rank = int(np.sum(sv > rtol * sv[0]))
    count_ok = g.total_elements == required
    return ICReport(count_ok and rank == d * d, count_ok, g.total_elements, required, rank, d * d, sv)


class ClassTag(enum.Enum):
    R_CLASS = "R_CLASS"
    S_CLASS = "S_CLASS"
    CONSTANT_X = "CONSTANT_X"
    CONSTANT_Y = "CONSTANT_Y"
    EQUINUMEROUS = "EQUINUMEROUS"
    GENERIC = "GENERIC"


@dataclass(frozen=True)
class Classification:
    tags: frozenset
    r: float | None = None
    s: float | None = None

    def __contains__(self, tag) -> bool:
        return tag in self.tags


def r_upper_bound(d: int, sizes) -> float:
    return float(min(min(d / m, d * (d - 1) / (m * (m - 1))) for m in sizes))


def s_upper_bound(d: int, sizes) -> float:
    return float(min(min(1.0, (d - 1) / (m - 1)) for m in sizes))


def classify(g: GeneralizedSymmetricMeasurement, tol: float = TRACE_TOL) -> Classification:
    """Symmetry classes recovered by the measurement.

    R_CLASS: ``x_a - y_a = r`` constant; S_CLASS: ``(x_a - y_a)/w_a = s``
    constant. Each also needs its parameter inside the admissible range.
    GENERIC is reported when none of the four parameter classes applies.
    """
    p, d, sizes = g.params, g.dim, g.block_sizes
    diff = p.x - p.y
    tags = set()
    r = s = None

    r_fit = float(diff.mean())
    if np.max(np.abs(diff - r_fit)) <= tol and 0 < r_fit <= r_upper_bound(d, sizes) + tol:
        tags.add(ClassTag.R_CLASS)
        r = r_fit
    ratio = diff / p.w
    s_fit = float(ratio.mean())
    if np.max(np.abs(ratio - s_fit)) <= tol and 0 < s_fit <= s_upper_bound(d, sizes) + tol:
        tags.add(ClassTag.S_CLASS)
        s = s_fit
    if np.ptp(p.x) <= tol:
        tags.add(ClassTag.CONSTANT_X)
    if np.ptp(p.y) <= tol:
        tags.add(ClassTag.CONSTANT_Y)
    if not tags:
        tags.add(ClassTag.GENERIC)
    if len(set(sizes)) == 1:
        tags.add(ClassTag.EQUINUMEROUS)
    return Classification(frozenset(tags), r, s)


@dataclass(frozen=True)
class Interval:
    """Half-open interval ``(lo, hi]``."""

    lo: float
    hi: float

    @property
    def empty(self) -> bool:
        return not self.hi > self.lo

    def __contains__(self, v: float) -> bool:
        return self.lo < v <= self.hi


@dataclass(frozen=True)
class ParameterRanges:
    constant_x: Interval
    constant_y: Interval
    r: Interval
    s: Interval


def feasible_parameter_ranges(d: int, block_sizes) -> ParameterRanges:
    """Admissible common values of ``x``, ``y``, ``r`` and ``s`` for the block sizes.

    These are the necessary ranges from the parameter constraints alone; the
    existence of a measurement attaining them depends on the operator basis.
    """
    sizes = [int(m) for m in block_sizes]
    if not sizes or any(m < 2 for m in sizes):
        raise ValueError("block sizes must all be >= 2")
    cx = Interval(max(d / m**2 for m in sizes), min(min(d / m, d * d / m**2) for m in sizes))
    cy = Interval(max(max(0.0, d * (m - d) / (m * m * (m - 1))) for m in sizes), min(d / m**2 for m in sizes))
    return ParameterRanges(cx, cy, Interval(0.0, r_upper_bound(d, sizes)), Interval(0.0, s_upper_bound(d, sizes)))
