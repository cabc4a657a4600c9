import numpy as np
import pytest
from numpy.testing import assert_allclose

from gsmkit import reference as ref
from gsmkit.exceptions import DimensionError, NotHermitianError
from gsmkit.operator_algebra import (
    as_density_matrix, as_hermitian, eigh, flip_operator, haar_unitary, hs_inner, kron,
    max_entangled_projector, random_density_matrix, trace_norm,
)


def rand_herm(d, rng):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


class TestHsInner:
    def test_identity(self):
        assert hs_inner(np.eye(2), np.eye(2)) == 2

    def test_qutrit_diagonal_pair_orthogonal(self):
        g1, g2 = ref.qutrit_diagonal_pair()
        assert abs(hs_inner(g1, g2)) < 1e-15

    def test_projector_and_complement(self):
        e_plus = np.diag([1, 0, 0])
        e_minus = np.diag([0, 1, 1]) / 2
        assert hs_inner(e_plus, e_minus) == 0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            hs_inner(np.eye(2), np.eye(3))

    def test_symmetric_bilinear_positive(self, rng):
        for _ in range(20):
            a, b, c = (rand_herm(3, rng) for _ in range(3))
            s, t = rng.normal(size=2)
            assert_allclose(hs_inner(a, b), hs_inner(b, a), atol=1e-12)
            assert_allclose(hs_inner(s * a + t * b, c), s * hs_inner(a, c) + t * hs_inner(b, c), atol=1e-12)
            assert hs_inner(a, a) > 0


class TestEigh:
    def test_diag(self):
        w, _ = eigh(np.diag([1.0, 0, 0]))
        assert_allclose(w, [0, 0, 1])

    def test_offdiag(self):
        w, _ = eigh([[0, 1], [1, 0]])
        assert_allclose(w, [-1, 1])

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            eigh([[0, 1], [0, 0]])

    @pytest.mark.parametrize("d", [2, 3])
    def test_against_characteristic_polynomial(self, d, rng):
        for _ in range(100):
            a = rand_herm(d, rng)
            # characteristic polynomial from invariants, roots via companion matrix
            if d == 2:
                coeffs = [1, -np.trace(a), np.linalg.det(a)]
            else:
                minors = sum(a[i, i] * a[j, j] - a[i, j] * a[j, i] for i in range(3) for j in range(i + 1, 3))
                coeffs = [1, -np.trace(a), minors, -np.linalg.det(a)]
            roots = np.sort(np.roots(np.real_if_close(coeffs, tol=1e6)).real)
            w, v = eigh(a)
            assert_allclose(w, roots, atol=1e-9)
            assert np.max(np.abs(a - v @ np.diag(w) @ v.conj().T)) <= 1e-9 * np.max(np.abs(a))


class TestTraceNorm:
    def test_identity(self):
        assert_allclose(trace_norm(np.eye(2)), 2)

    def test_zero(self):
        assert trace_norm(np.zeros((3, 3))) == 0

    def test_rank_one(self, rng):
        u = rng.normal(size=3) + 1j * rng.normal(size=3)
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        u, v = u / np.linalg.norm(u), v / np.linalg.norm(v)
        m = np.outer(u, v.conj())
        # oracle: singular values of the explicit instance
        assert_allclose(np.linalg.svd(m, compute_uv=False), [1, 0, 0], atol=1e-12)
        assert_allclose(trace_norm(m), 1, atol=1e-12)

    def test_unitary_invariance_and_trace_bound(self, rng):
        for _ in range(20):
            m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            u, w = haar_unitary(4, rng), haar_unitary(4, rng)
            assert_allclose(trace_norm(u @ m @ w), trace_norm(m), rtol=1e-8)
            assert trace_norm(m) >= abs(np.trace(m)) - 1e-9


class TestKronAndFlip:
    def test_kron_basic(self):
        assert_allclose(kron(np.eye(2), np.eye(2)), np.eye(4))
        assert_allclose(kron(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0]))

    def test_kron_trace(self, rng):
        a, b = rng.normal(size=(3, 3)), rng.normal(size=(3, 3))
        direct = sum(a[i, i] * b[j, j] for i in range(3) for j in range(3))
        assert_allclose(np.trace(kron(a, b)), direct)

    def test_flip_d2_is_swap(self):
        f = flip_operator(2)
        swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
        assert_allclose(f, swap)
        assert np.trace(f) == 2

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_flip_involution(self, d):
        f = flip_operator(d)
        assert_allclose(f @ f, np.eye(d * d))
        assert_allclose(np.trace(f), d)
        assert_allclose(f, f.conj().T)

    def test_flip_swap_trick(self, rng):
        d = 3
        for _ in range(10):
            a, b = rand_herm(d, rng), rand_herm(d, rng)
            ab = kron(a, b)
            f = flip_operator(d)
            # brute-force contraction: Tr[F (A(x)B)] = sum_{m,n} A_nm B_mn
            brute = sum(a[n, m] * b[m, n] for m in range(d) for n in range(d))
            assert_allclose(np.trace(f @ ab), brute, atol=1e-12)
            assert_allclose(np.trace(f @ ab).real, hs_inner(a, b), atol=1e-12)

    def test_flip_rejects_small(self):
        with pytest.raises(DimensionError):
            flip_operator(1)


class TestMaxEntangled:
    def test_d2_entries(self):
        p = max_entangled_projector(2)
        expected = np.zeros((4, 4))
        for i in (0, 3):
            for j in (0, 3):
                expected[i, j] = 0.5
        assert_allclose(p, expected)

    def test_pure_d3(self):
        p = max_entangled_projector(3)
        assert_allclose(np.trace(p @ p).real, 1)
        assert_allclose(p @ p, p, atol=1e-12)
        assert np.linalg.matrix_rank(p) == 1

    def test_choi_columns(self, rng):
        d = 2
        x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        phi = np.sqrt(d) * np.linalg.eigh(max_entangled_projector(d))[1][:, -1]
        phi = phi * np.sign(phi[0].real)
        vec = kron(np.eye(d), x.T) @ phi
        # index-level oracle: component (m, j) of (I (x) X^T) sum_m |mm> is (X^T)_jm = X_mj
        for m in range(d):
            for j in range(d):
                assert_allclose(vec[m * d + j], x[m, j], atol=1e-12)


class TestRandomStates:
    def test_pure(self):
        for seed in range(5):
            rho = random_density_matrix(3, 1, seed)
            assert_allclose(np.trace(rho @ rho).real, 1, atol=1e-10)

    def test_full_rank(self):
        rho = random_density_matrix(4, 4, 7)
        w = np.linalg.eigvalsh(rho)
        assert w.min() >= 0
        assert_allclose(w.sum(), 1)
        as_density_matrix(rho)

    def test_deterministic(self):
        assert_allclose(random_density_matrix(3, 2, 11), random_density_matrix(3, 2, 11))

    @pytest.mark.parametrize("rank", [0, 4])
    def test_invalid_rank(self, rank):
        with pytest.raises(ValueError):
            random_density_matrix(3, rank, 0)


def test_as_hermitian_symmetrises_within_tolerance():
    a = np.array([[1, 1e-14j], [0, 1]])
    h = as_hermitian(a)
    assert_allclose(h, h.conj().T, atol=0)
    with pytest.raises(NotHermitianError):
        as_hermitian([[1, 1e-6], [0, 1]])
