"""Vectorised quaternion kernels on float arrays.

A quaternion array is any ``float64`` array whose trailing axis has length 4,
holding the components in ``(r, i, j, k)`` order.  Vectors are ``(n, 4)``,
matrices ``(m, n, 4)``.  Every function here broadcasts over leading axes.
"""

from __future__ import annotations

import numpy as np

from .errors import QuaternionDomainError, ShapeError

UNITS = ("i", "j", "k")

ONE = np.array([1.0, 0.0, 0.0, 0.0])
UNIT_ARRAYS = {
    "1": ONE,
    "i": np.array([0.0, 1.0, 0.0, 0.0]),
    "j": np.array([0.0, 0.0, 1.0, 0.0]),
    "k": np.array([0.0, 0.0, 0.0, 1.0]),
}

# sign patterns of the canonical involutions q -> eta q eta^{-1}
INVOLUTION_SIGNS = {
    "1": np.array([1.0, 1.0, 1.0, 1.0]),
    "i": np.array([1.0, 1.0, -1.0, -1.0]),
    "j": np.array([1.0, -1.0, 1.0, -1.0]),
    "k": np.array([1.0, -1.0, -1.0, 1.0]),
}
_CONJ_SIGNS = np.array([1.0, -1.0, -1.0, -1.0])


def as_qarray(x, ndim: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a float quaternion array, checking the trailing axis."""
    # Quaternion values expose __array__, so nested lists of them coerce directly
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 1 and arr.shape[0] == 0:
        arr = arr.reshape(0, 4)
    if arr.shape[-1:] != (4,):
        raise ShapeError(f"trailing axis must have length 4, got shape {arr.shape}")
    if ndim is not None and arr.ndim != ndim:
        raise ShapeError(f"expected a {ndim}-d quaternion array, got shape {arr.shape}")
    return arr


def qmul(a, b) -> np.ndarray:
    """Element-wise Hamilton product ``a * b`` (order preserved)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ar, ai, aj, ak = np.moveaxis(a, -1, 0)
    br, bi, bj, bk = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            ar * br - ai * bi - aj * bj - ak * bk,
            ar * bi + ai * br + aj * bk - ak * bj,
            ar * bj - ai * bk + aj * br + ak * bi,
            ar * bk + ai * bj - aj * bi + ak * br,
        ],
        axis=-1,
    )


def qconj(a) -> np.ndarray:
    return np.asarray(a, dtype=float) * _CONJ_SIGNS


def qnorm(a) -> np.ndarray:
    return np.sqrt(np.sum(np.square(a), axis=-1))


def qinv(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    n2 = np.sum(a * a, axis=-1, keepdims=True)
    if np.any(n2 == 0.0):
        raise QuaternionDomainError("inverse of the zero quaternion")
    return qconj(a) / n2


def involve(a, eta: str) -> np.ndarray:
    """Canonical involution about ``eta`` in {'1', 'i', 'j', 'k'}; exact sign flips."""
    try:
        signs = INVOLUTION_SIGNS[eta]
    except KeyError:
        raise ValueError(f"unknown involution axis {eta!r}") from None
    return np.asarray(a, dtype=float) * signs


def involve_conj(a, eta: str) -> np.ndarray:
    """``(a^eta)^*``."""
    return involve(a, eta) * _CONJ_SIGNS


def real_scale(a, s) -> np.ndarray:
    """Multiply quaternion array ``a`` by a real array ``s`` broadcast over components."""
    return np.asarray(a, dtype=float) * np.asarray(s, dtype=float)[..., None]


def qdot(a, b) -> np.ndarray:
    """``sum_k a[k] b[k]`` over the second-to-last axis: plain transpose contraction."""
    return qmul(a, b).sum(axis=-2)


def qmatmul(a, b) -> np.ndarray:
    """Quaternion matrix product with entries multiplied in written order."""
    a = as_qarray(a)
    b = as_qarray(b)
    if a.ndim == 2:
        a = a[None, :, :]
        squeeze = True
    else:
        squeeze = False
    b2 = b if b.ndim == 3 else b[:, None, :]
    if a.shape[1] != b2.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape[:-1]} by {b2.shape[:-1]}")
    out = qmul(a[:, :, None, :], b2[None, :, :, :]).sum(axis=1)
    if b.ndim == 2:
        out = out[:, 0, :]
    if squeeze:
        out = out[0]
    return out


def hermitian(m) -> np.ndarray:
    """Conjugate transpose of a quaternion matrix."""
    m = as_qarray(m, ndim=3)
    return qconj(np.swapaxes(m, 0, 1))


def eta_hermitian(m, eta: str) -> np.ndarray:
    """``(M^eta)^H``: element-wise involution followed by conjugate transpose."""
    m = as_qarray(m, ndim=3)
    return involve_conj(np.swapaxes(m, 0, 1), eta)


def transpose(m) -> np.ndarray:
    return np.swapaxes(as_qarray(m, ndim=3), 0, 1)


def identity(n: int) -> np.ndarray:
    out = np.zeros((n, n, 4))
    out[np.arange(n), np.arange(n), 0] = 1.0
    return out


def diag(values) -> np.ndarray:
    """Quaternion diagonal matrix from a real or quaternion vector."""
    v = np.asarray(values, dtype=float)
    if v.ndim == 1:
        v = np.stack([v, np.zeros_like(v), np.zeros_like(v), np.zeros_like(v)], axis=-1)
    n = v.shape[0]
    out = np.zeros((n, n, 4))
    out[np.arange(n), np.arange(n)] = v
    return out


def frobenius(m) -> float:
    return float(np.sqrt(np.sum(np.square(m))))
