"""Dense quaternion linear algebra through the complex adjoint.

The quaternion SVD is computed from the complex SVD of the ``2m x 2n``
adjoint.  Each quaternion singular value appears there twice; one vector
of every pair is projected back to ℍ and the set is re-orthonormalised
over ℍ, which also copes with repeated values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qarray as qa
from .core import I, J, K, Quaternion, slice_apply
from .errors import DegenerateSpectrumError, NotEtaHermitianError

ETA_AXES = ("i", "j", "k")
PAIRING_TOL = 1e-8
DIAGONAL_TOL = 1e-6
HERMITIAN_TOL = 1e-8

# pure unit axes orthogonal to each eta, used when a square root of -1 must be picked
_TIE_AXIS = {"i": J, "j": K, "k": I}


def complex_adjoint(m) -> np.ndarray:
    """Interleaved ``2x2`` complex blocks ``[[z1, z2], [-conj(z2), conj(z1)]]``.

    ``q = z1 + z2 ȷ`` with ``z1 = q_r + q_i i`` and ``z2 = q_j + q_k i``.
    """
    m = qa.as_qarray(m, ndim=3)
    z1 = m[..., 0] + 1j * m[..., 1]
    z2 = m[..., 2] + 1j * m[..., 3]
    rows, cols = z1.shape
    out = np.empty((2 * rows, 2 * cols), dtype=complex)
    out[0::2, 0::2] = z1
    out[0::2, 1::2] = z2
    out[1::2, 0::2] = -np.conj(z2)
    out[1::2, 1::2] = np.conj(z1)
    return out


def from_complex_adjoint(c: np.ndarray) -> np.ndarray:
    """Inverse of :func:`complex_adjoint`, read off the even rows."""
    c = np.asarray(c, dtype=complex)
    z1 = c[0::2, 0::2]
    z2 = c[0::2, 1::2]
    return np.stack([z1.real, z1.imag, z2.real, z2.imag], axis=-1)


def _column_to_quaternion(c: np.ndarray) -> np.ndarray:
    # c is the first column of the adjoint of v, so v = c_even - conj(c_odd) ȷ
    z1 = c[0::2]
    z2 = -np.conj(c[1::2])
    return np.stack([z1.real, z1.imag, z2.real, z2.imag], axis=-1)


def _vec_norm(v: np.ndarray) -> float:
    return float(np.sqrt(np.sum(v * v)))


def _orthonormalise(candidates, basis: list[np.ndarray], size: int) -> list[np.ndarray]:
    """Append candidates to ``basis`` by quaternion Gram-Schmidt until it has ``size`` vectors."""
    for v in candidates:
        if len(basis) == size:
            break
        v = np.array(v, dtype=float)
        start = _vec_norm(v)
        if start == 0.0:
            continue
        # two passes keep the result orthogonal to rounding level
        for _ in range(2):
            for u in basis:
                coeff = qa.qdot(qa.qconj(u), v)
                v = v - qa.qmul(u, coeff[None, :])
        if _vec_norm(v) > 0.5 * start:
            basis.append(v / _vec_norm(v))
    return basis


def _unit_candidates(n: int):
    for idx in range(n):
        e = np.zeros((n, 4))
        e[idx, 0] = 1.0
        yield e


@dataclass(frozen=True)
class QSVD:
    """``M = U diag(sigma) V^H`` with ``U``, ``V`` quaternion unitary."""

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray
    pairing_residual: float

    def reconstruct(self) -> np.ndarray:
        m, n = self.U.shape[0], self.V.shape[0]
        s = np.zeros((m, n, 4))
        r = self.sigma.size
        s[np.arange(r), np.arange(r), 0] = self.sigma
        return qa.qmatmul(qa.qmatmul(self.U, s), qa.hermitian(self.V))


def qsvd(m) -> QSVD:
    """Quaternion singular value decomposition.

    Parameters
    ----------
    m : array_like, shape (rows, cols, 4)

    Returns
    -------
    QSVD
        ``sigma`` is descending and nonnegative, of length ``min(rows, cols)``.

    Raises
    ------
    ArithmeticError
        If the adjoint's singular values do not pair up, which would mean the
        complex backend returned an inconsistent spectrum.
    """
    m = qa.as_qarray(m, ndim=3)
    rows, cols = m.shape[:2]
    uc, sc, vhc = np.linalg.svd(complex_adjoint(m))
    r = min(rows, cols)
    smax = float(sc[0]) if sc.size else 0.0
    pairing = float(np.max(np.abs(sc[0:2 * r:2] - sc[1:2 * r:2]))) if r else 0.0
    if pairing > PAIRING_TOL * max(smax, 1.0):
        raise ArithmeticError(f"adjoint singular values failed to pair (residual {pairing:.3g})")
    sigma = 0.5 * (sc[0:2 * r:2] + sc[1:2 * r:2])

    u_cols = _orthonormalise((_column_to_quaternion(uc[:, c]) for c in range(2 * rows)), [], rows)
    u_cols = _orthonormalise(_unit_candidates(rows), u_cols, rows)
    U = np.stack(u_cols, axis=1)

    mh = qa.hermitian(m)
    tol = max(rows, cols) * np.finfo(float).eps * max(smax, 1.0)
    v_cols = []
    for idx in range(r):
        if sigma[idx] <= tol:
            break
        v_cols.append(qa.qmatmul(mh, U[:, idx]) / sigma[idx])
    vc = np.conj(vhc.T)
    v_cols = _orthonormalise((_column_to_quaternion(vc[:, c]) for c in range(2 * cols)), v_cols, cols)
    v_cols = _orthonormalise(_unit_candidates(cols), v_cols, cols)
    V = np.stack(v_cols, axis=1)
    return QSVD(U, sigma, V, pairing)


def is_eta_hermitian(m, eta: str, tol: float = HERMITIAN_TOL) -> bool:
    """``||M - M^{eta H}||_F <= tol ||M||_F``."""
    m = qa.as_qarray(m, ndim=3)
    if m.shape[0] != m.shape[1]:
        return False
    return qa.frobenius(m - qa.eta_hermitian(m, eta)) <= tol * qa.frobenius(m)


def _principal_sqrt(t: Quaternion, eta: str) -> Quaternion:
    if abs(t.r + 1.0) < 1e-12:
        # every pure unit squares to -1; this one is fixed by the eta-conjugate involution
        return _TIE_AXIS[eta]
    return slice_apply(np.sqrt, t)


@dataclass(frozen=True)
class EtaFactorisation:
    """``R = diameter diag(lam) diameter^{eta H}`` with ``diameter`` unitary."""

    eta: str
    diameter: np.ndarray
    lam: np.ndarray

    def reconstruct(self) -> np.ndarray:
        d = self.diameter
        return qa.qmatmul(qa.qmatmul(d, qa.diag(self.lam)), qa.eta_hermitian(d, self.eta))

    def residual(self, r) -> float:
        r = qa.as_qarray(r, ndim=3)
        scale = qa.frobenius(r)
        diff = qa.frobenius(r - self.reconstruct())
        return diff / scale if scale > 0 else diff

    def unitarity_defect(self) -> float:
        d = self.diameter
        return qa.frobenius(qa.qmatmul(d, qa.hermitian(d)) - qa.identity(d.shape[0]))


def eta_takagi(r, eta: str) -> EtaFactorisation:
    """Factorise an eta-Hermitian matrix as ``Q diag(lam) Q^{eta H}``.

    With ``R = U Λ V^H`` and ``D = V^{eta H} U`` diagonal, ``Q = U (D^eta)^{1/2}``
    using the principal square root of every diagonal entry.

    Raises
    ------
    NotEtaHermitianError
        If ``R`` is not eta-Hermitian to within ``1e-8`` relative Frobenius.
    DegenerateSpectrumError
        If ``D`` is not diagonal, which happens when singular values repeat.
    """
    if eta not in ETA_AXES:
        raise ValueError(f"eta must be one of {ETA_AXES}, got {eta!r}")
    r = qa.as_qarray(r, ndim=3)
    if not is_eta_hermitian(r, eta):
        raise NotEtaHermitianError(f"matrix is not {eta}-Hermitian")
    n = r.shape[0]
    svd = qsvd(r)
    d = qa.qmatmul(qa.eta_hermitian(svd.V, eta), svd.U)
    off = d.copy()
    off[np.arange(n), np.arange(n)] = 0.0
    if qa.frobenius(off) > DIAGONAL_TOL * math.sqrt(n):
        raise DegenerateSpectrumError(
            f"D is not diagonal (off-diagonal mass {qa.frobenius(off):.3g}); "
            "singular values are repeated"
        )
    roots = np.empty((n, 4))
    for idx in range(n):
        t = qa.involve(d[idx, idx], eta)
        t = Quaternion.from_array(t / qa.qnorm(t))
        roots[idx] = _principal_sqrt(t, eta).to_array()
    diameter = qa.qmatmul(svd.U, qa.diag(roots))
    return EtaFactorisation(eta, diameter, svd.sigma.copy())
