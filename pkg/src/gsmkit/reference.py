"""Explicit measurement operators and bases used as golden references.

* :func:`qubit_projective_2_3` - projective GSM in d = 2 with blocks (2, 3).
* :func:`qutrit_diagonal_pair` - two diagonal traceless orthonormal qutrit operators,
  and :func:`qutrit_diagonal_povms` the three POVMs they generate.
* :func:`qubit_sic_families` - the four qubit SIC POVMs obtained from the Pauli basis
  by the four construction variants; :func:`qubit_g_basis` is the alternative
  basis producing the same four families.
"""

from __future__ import annotations

import numpy as np

S2, S3, S6 = np.sqrt(2), np.sqrt(3), np.sqrt(6)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def _m(a, b, c, d) -> np.ndarray:
    return np.array([[a, b], [c, d]], dtype=np.complex128)


def qubit_projective_2_3() -> list[np.ndarray]:
    """Two rank-1 projective POVMs on a qubit with 2 and 3 outcomes."""
    return [
        np.array([np.diag([1, 0]), np.diag([0, 1])], dtype=np.complex128),
        np.array([
            _m(1, -1j, 1j, 1) / 3,
            _m(2, 1j + S3, -1j + S3, 2) / 6,
            _m(2, 1j - S3, -1j - S3, 2) / 6,
        ]),
    ]


def qutrit_diagonal_pair() -> np.ndarray:
    c = 1 / (S3 * (S3 + 1))
    return np.array([
        c * np.diag([-2 - S3, 1, 1 + S3]),
        c * np.diag([1, -2 - S3, 1 + S3]),
    ]).astype(np.complex128)


QUTRIT_T_MAX = (S3 - 1) / (2 * S3)
QUTRIT_T_MIN = (1 - S3) / (4 * S3)


def qutrit_diagonal_povms() -> dict[str, np.ndarray]:
    """POVMs from :func:`qutrit_diagonal_pair` at ``t_max``, ``t_min`` and ``|t_min|``."""
    return {
        "t_max": np.array([np.diag(v) for v in np.eye(3)], dtype=np.complex128),
        "t_min": np.array([np.diag(v) / 2 for v in ([0, 1, 1], [1, 0, 1], [1, 1, 0])], dtype=np.complex128),
        "plus_abs_t_min": np.array([np.diag(v) / 6 for v in ([4, 1, 1], [1, 4, 1], [1, 1, 4])],
                                   dtype=np.complex128),
    }


PAULI_BASIS = np.array([PAULI_X, PAULI_Y, PAULI_Z]) / S2
SIC_T = 1 / (6 * S6)
SIC_T_PRIMED = 1 / (2 * S6)


def qubit_g_basis() -> np.ndarray:
    return np.array([
        _m(2, -1 - 2j, -1 + 2j, -2),
        _m(2, 2 + 1j, 2 - 1j, -2),
        _m(-1, 2 - 2j, 2 + 2j, 1),
    ]) / (3 * S2)


def qubit_sic_families() -> dict[str, np.ndarray]:
    """Four ordered qubit SIC POVMs keyed by the variant that builds them from
    :data:`PAULI_BASIS` at ``t = +/-SIC_T`` (unprimed) or ``+/-SIC_T_PRIMED`` (primed)."""
    a, b = S3 / 36, S3 / 12
    return {
        "unprimed:+": np.array([
            a * _m(1 + 3 * S3, -5 - 1j, -5 + 1j, -1 + 3 * S3),
            a * _m(1 + 3 * S3, 1 + 5j, 1 - 5j, -1 + 3 * S3),
            a * _m(-5 + 3 * S3, 1 - 1j, 1 + 1j, 5 + 3 * S3),
            b * _m(1 + S3, 1 - 1j, 1 + 1j, -1 + S3),
        ]),
        "unprimed:-": np.array([
            a * _m(-1 + 3 * S3, 5 + 1j, 5 - 1j, 1 + 3 * S3),
            a * _m(-1 + 3 * S3, -1 - 5j, -1 + 5j, 1 + 3 * S3),
            a * _m(5 + 3 * S3, -1 + 1j, -1 - 1j, -5 + 3 * S3),
            b * _m(-1 + S3, -1 + 1j, -1 - 1j, 1 + S3),
        ]),
        "primed:+": np.array([
            b * _m(1 + S3, -1 - 1j, -1 + 1j, -1 + S3),
            b * _m(1 + S3, 1 + 1j, 1 - 1j, -1 + S3),
            b * _m(-1 + S3, 1 - 1j, 1 + 1j, 1 + S3),
            b * _m(-1 + S3, -1 + 1j, -1 - 1j, 1 + S3),
        ]),
        "primed:-": np.array([
            b * _m(-1 + S3, 1 + 1j, 1 - 1j, 1 + S3),
            b * _m(-1 + S3, -1 - 1j, -1 + 1j, 1 + S3),
            b * _m(1 + S3, -1 + 1j, -1 - 1j, -1 + S3),
            b * _m(1 + S3, 1 - 1j, 1 + 1j, -1 + S3),
        ]),
    }


# As typeset in the source table the second element of the "unprimed:-" family
# duplicates the first; kept so tests can show that version is not a POVM.
MISPRINTED_UNPRIMED_MINUS_2 = (S3 / 36) * _m(-1 + 3 * S3, 5 + 1j, 5 - 1j, 1 + 3 * S3)
