import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatsp import DegenerateSpectrumError, NotEtaHermitianError, stats
from quatsp import linalg as la
from quatsp import qarray as qa

import reference_values as ref
from conftest import REFERENCE_SEQ

seeds = st.integers(0, 2**32 - 1)


def random_unitary(rng, n):
    return la.qsvd(rng.normal(size=(n, n, 4))).U


def eta_hermitian_from_spectrum(rng, lam, eta):
    p = random_unitary(rng, len(lam))
    return qa.qmatmul(qa.qmatmul(p, qa.diag(np.asarray(lam, dtype=float))), qa.eta_hermitian(p, eta))


class TestComplexAdjoint:
    def test_one(self):
        np.testing.assert_array_equal(la.complex_adjoint([[[1.0, 0, 0, 0]]]), [[1, 0], [0, 1]])

    def test_j(self):
        np.testing.assert_array_equal(la.complex_adjoint([[[0, 0, 1.0, 0]]]), [[0, 1], [-1, 0]])

    @settings(max_examples=30)
    @given(seeds)
    def test_homomorphism(self, seed):
        rng = np.random.default_rng(seed)
        a, b = rng.normal(size=(2, 3, 3, 4))
        lhs = la.complex_adjoint(qa.qmatmul(a, b))
        rhs = la.complex_adjoint(a) @ la.complex_adjoint(b)
        assert np.abs(lhs - rhs).max() < 1e-12

    def test_hermitian_maps_to_conjugate_transpose(self, rng):
        a = rng.normal(size=(3, 2, 4))
        np.testing.assert_allclose(la.complex_adjoint(qa.hermitian(a)), la.complex_adjoint(a).conj().T)

    def test_inverse(self, rng):
        a = rng.normal(size=(2, 5, 4))
        np.testing.assert_array_equal(la.from_complex_adjoint(la.complex_adjoint(a)), a)


class TestQSVD:
    def test_identity(self):
        np.testing.assert_allclose(la.qsvd(qa.identity(3)).sigma, [1, 1, 1])

    def test_diagonal(self):
        d = qa.diag(np.array([[0, 2.0, 0, 0], [0, 0, 1.0, 0]]))
        np.testing.assert_allclose(la.qsvd(d).sigma, [2, 1])

    @settings(max_examples=40, deadline=None)
    @given(seeds, st.integers(1, 6), st.integers(1, 6))
    def test_reconstruction(self, seed, m, n):
        a = np.random.default_rng(seed).normal(size=(m, n, 4))
        svd = la.qsvd(a)
        assert qa.frobenius(svd.reconstruct() - a) < 1e-8 * qa.frobenius(a)
        assert qa.frobenius(qa.qmatmul(qa.hermitian(svd.U), svd.U) - qa.identity(m)) < 1e-10
        assert qa.frobenius(qa.qmatmul(qa.hermitian(svd.V), svd.V) - qa.identity(n)) < 1e-10
        assert np.all(np.diff(svd.sigma) <= 0) and np.all(svd.sigma >= 0)
        assert svd.pairing_residual < 1e-8 * max(svd.sigma[0], 1.0)

    def test_rank_deficient(self, rng):
        u = rng.normal(size=(4, 1, 4))
        v = rng.normal(size=(1, 3, 4))
        a = qa.qmatmul(u, v)
        svd = la.qsvd(a)
        assert svd.sigma[1] < 1e-12
        assert qa.frobenius(svd.reconstruct() - a) < 1e-10 * qa.frobenius(a)

    def test_zero_matrix(self):
        svd = la.qsvd(np.zeros((3, 2, 4)))
        np.testing.assert_array_equal(svd.sigma, [0, 0])
        assert qa.frobenius(qa.qmatmul(qa.hermitian(svd.U), svd.U) - qa.identity(3)) < 1e-12

    def test_repeated_singular_values(self, rng):
        p = random_unitary(rng, 4)
        a = qa.qmatmul(p, qa.diag([3.0, 3.0, 1.0, 1.0]))
        svd = la.qsvd(a)
        np.testing.assert_allclose(svd.sigma, [3, 3, 1, 1], atol=1e-12)
        assert qa.frobenius(svd.reconstruct() - a) < 1e-10


class TestEtaHermitian:
    def test_reference_table(self):
        r_j = np.array(ref.QUATERNION_MATRICES["j"], dtype=float)
        assert la.is_eta_hermitian(r_j, "j", tol=1e-3)
        assert not la.is_eta_hermitian(r_j, "k", tol=1e-3)

    def test_zero(self):
        for eta in "ijk":
            assert la.is_eta_hermitian(np.zeros((3, 3, 4)), eta)

    def test_non_square(self):
        assert not la.is_eta_hermitian(np.zeros((2, 3, 4)), "i")

    def test_estimated_matrices(self, rng):
        mats = stats.toeplitz(stats.autocorr_set(rng.normal(size=(30, 4))), 8)
        for eta in "ijk":
            assert la.is_eta_hermitian(mats.get(eta), eta, tol=1e-10)


class TestTakagi:
    @pytest.mark.parametrize("eta", ["i", "j", "k"])
    def test_reference(self, eta):
        r = stats.toeplitz(stats.autocorr_set(REFERENCE_SEQ), 2).get(eta)
        fact = la.eta_takagi(r, eta)
        assert fact.residual(r) < 1e-8
        assert fact.unitarity_defect() < 1e-10
        assert np.all(np.diff(fact.lam) <= 0)

    def test_identity(self):
        fact = la.eta_takagi(qa.identity(3), "j")
        np.testing.assert_allclose(fact.lam, 1.0)
        d = fact.diameter
        np.testing.assert_allclose(qa.qmatmul(d, qa.eta_hermitian(d, "j")), qa.identity(3), atol=1e-12)

    def test_real_symmetric(self, rng):
        x = rng.normal(size=(4, 4))
        sym = x @ x.T + 4 * np.eye(4)
        q = np.zeros((4, 4, 4))
        q[..., 0] = sym
        for eta in "ijk":
            fact = la.eta_takagi(q, eta)
            np.testing.assert_allclose(fact.lam, np.sort(np.linalg.eigvalsh(sym))[::-1], rtol=1e-12)
            assert fact.residual(q) < 1e-12

    @settings(max_examples=30, deadline=None)
    @given(seeds, st.integers(2, 8), st.sampled_from("ijk"))
    def test_random(self, seed, n, eta):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=(n, n, 4))
        r = x + qa.eta_hermitian(x, eta)
        fact = la.eta_takagi(r, eta)
        assert fact.residual(r) < 1e-8
        assert fact.unitarity_defect() < 1e-10
        again = la.eta_takagi(fact.reconstruct(), eta)
        assert again.residual(r) < 1e-8

    def test_minus_one_uses_orthogonal_axis(self):
        for eta, axis in (("i", 2), ("j", 3), ("k", 1)):
            r = np.array([[[-1.0, 0, 0, 0]]])
            fact = la.eta_takagi(r, eta)
            assert fact.diameter[0, 0, axis] == pytest.approx(1.0)
            assert fact.residual(r) < 1e-12

    def test_not_eta_hermitian(self, rng):
        with pytest.raises(NotEtaHermitianError):
            la.eta_takagi(rng.normal(size=(3, 3, 4)), "i")

    def test_unknown_axis(self):
        with pytest.raises(ValueError):
            la.eta_takagi(qa.identity(2), "x")

    def test_degenerate_spectrum_refused(self, rng):
        raised = 0
        for trial in range(20):
            eta = "ijk"[trial % 3]
            r = eta_hermitian_from_spectrum(rng, [2.0, 2.0, 1.0], eta)
            try:
                fact = la.eta_takagi(r, eta)
            except DegenerateSpectrumError:
                raised += 1
            else:
                # accepted only when the answer is right
                assert fact.residual(r) < 1e-8
        assert raised > 0
