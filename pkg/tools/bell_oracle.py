"""Brute-force oracle for the maximally entangled state's correlation-matrix trace norm.

Deliberately shares no code with gsmkit: its own Gell-Mann basis, its own
construction, explicit index loops for the correlation matrix, and the trace
norm from the eigenvalues of the (symmetric) P. The printed values are frozen in
tests/test_acceptance.py.
"""

import math

import numpy as np


def gell_mann(d):
    ops = []
    for j in range(d):
        for k in range(j + 1, d):
            g = np.zeros((d, d), complex)
            g[j, k] = g[k, j] = 2 ** -0.5
            ops.append(g)
    for j in range(d):
        for k in range(j + 1, d):
            g = np.zeros((d, d), complex)
            g[j, k], g[k, j] = -1j * 2 ** -0.5, 1j * 2 ** -0.5
            ops.append(g)
    for l in range(1, d):
        g = np.zeros((d, d), complex)
        for j in range(l):
            g[j, j] = 1
        g[l, l] = -l
        ops.append(g / math.sqrt(l * (l + 1)))
    return ops


def build(d, sizes, r):
    ops = gell_mann(d)
    out, pos = [], 0
    for m in sizes:
        block = ops[pos : pos + m - 1]
        pos += m - 1
        sm = math.sqrt(m)
        t = math.sqrt(r / (m * (1 + sm) ** 2))
        gsum = sum(block)
        hs = [gsum - sm * (1 + sm) * g for g in block] + [(1 + sm) * gsum]
        out += [np.eye(d) / m + t * h for h in hs]
    return out


def c_max(d, sizes, r):
    return (d - 1) * r / d + sum(1 / m for m in sizes)


def bell_trace_norm(d, sizes, r):
    E = build(d, sizes, r)
    n = len(E)
    rho = np.zeros((d * d, d * d), complex)
    for a in range(d):
        for b in range(d):
            rho[a * d + a, b * d + b] = 1 / d
    P = np.zeros((n, n))
    for p in range(n):
        for q in range(n):
            acc = 0j
            for i in range(d):
                for j in range(d):
                    for k in range(d):
                        for l in range(d):
                            acc += rho[i * d + j, k * d + l] * E[p][k, i] * E[q][l, j]
            P[p, q] = acc.real
    # P_pq = Tr(E_p^T E_q)/d is real symmetric, so ||P||_Tr = sum |eigenvalues|
    assert np.allclose(P, P.T, atol=1e-14)
    return float(np.sum(np.abs(np.linalg.eigvalsh(P)))), float(np.trace(P))


if __name__ == "__main__":
    for d, sizes, r in ((2, [2, 3], 1 / 3), (3, [3, 3, 3, 3], 1 / 3), (3, [5, 3, 3], 0.09)):
        tn, tr = bell_trace_norm(d, sizes, r)
        cm = c_max(d, sizes, r)
        print(f"d={d} sizes={sizes} r={r!r}: trace_norm={tn!r} bound={cm!r} margin={tn - cm!r} trace={tr!r}")
