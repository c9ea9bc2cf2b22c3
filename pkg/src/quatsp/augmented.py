"""Involutions and the augmented basis linking ℍⁿ to four real vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qarray as qa
from .core import I, J, K, ONE, Quaternion, as_quaternion, inverse, mul
from .errors import QuaternionDomainError, ShapeError

_CANONICAL = {ONE: "1", I: "i", J: "j", K: "k"}


def involution(q, zeta) -> Quaternion:
    """``zeta q zeta^{-1}``.

    ``zeta`` may be a quaternion or one of ``'i'``, ``'j'``, ``'k'``.  The
    canonical axes are applied as exact sign flips.
    """
    q = as_quaternion(q)
    if isinstance(zeta, str):
        return Quaternion.from_array(qa.involve(q.to_array(), zeta))
    zeta = as_quaternion(zeta)
    if zeta in _CANONICAL:
        return Quaternion.from_array(qa.involve(q.to_array(), _CANONICAL[zeta]))
    if zeta == Quaternion():
        raise QuaternionDomainError("involution about the zero quaternion")
    if zeta.i == zeta.j == zeta.k == 0.0:
        return q
    return mul(mul(zeta, q), inverse(zeta))


def components(q) -> tuple[float, float, float, float]:
    """Real components recovered from ``q`` and its three involutions."""
    q = as_quaternion(q)
    qi, qj, qk = (involution(q, u) for u in "ijk")
    # pairwise grouping keeps every sum exact in floating point
    r = ((q + qi) + (qj + qk)) * 0.25
    # 1/(4ı) = -ı/4, applied on the left
    x = mul(I * -0.25, (q + qi) - (qj + qk))
    y = mul(J * -0.25, (q - qi) + (qj - qk))
    z = mul(K * -0.25, (q - qi) - (qj - qk))
    return (r.r, x.r, y.r, z.r)


def conj_via_involutions(q) -> Quaternion:
    q = as_quaternion(q)
    # grouped so that each component sum is exact
    return ((involution(q, "i") - q) + (involution(q, "j") + involution(q, "k"))) * 0.5


@dataclass(frozen=True)
class Quadrivariate:
    """The four real component vectors of a quaternion vector."""

    r: np.ndarray
    i: np.ndarray
    j: np.ndarray
    k: np.ndarray

    def __post_init__(self):
        lengths = {np.shape(v) for v in (self.r, self.i, self.j, self.k)}
        if len(lengths) != 1:
            raise ShapeError(f"component vectors differ in shape: {sorted(lengths)}")

    def __getitem__(self, name: str) -> np.ndarray:
        return getattr(self, name)

    def __len__(self) -> int:
        return len(self.r)


def to_quadrivariate(v) -> Quadrivariate:
    v = qa.as_qarray(v, ndim=2)
    return Quadrivariate(v[:, 0].copy(), v[:, 1].copy(), v[:, 2].copy(), v[:, 3].copy())


def from_quadrivariate(qv: Quadrivariate) -> np.ndarray:
    parts = [np.asarray(qv[c], dtype=float) for c in "rijk"]
    if len({p.shape for p in parts}) != 1:
        raise ShapeError("component vectors differ in shape")
    return np.stack(parts, axis=-1)


@dataclass(frozen=True)
class AugmentedVector:
    """``[q; q^ı; q^ȷ; q^κ]`` together with the base vector it came from."""

    base: np.ndarray
    stack: np.ndarray

    @property
    def n(self) -> int:
        return self.base.shape[0]

    def block(self, index: int) -> np.ndarray:
        return self.stack[index * self.n:(index + 1) * self.n]


def augment(v) -> AugmentedVector:
    v = qa.as_qarray(v, ndim=2)
    stack = np.concatenate([v, qa.involve(v, "i"), qa.involve(v, "j"), qa.involve(v, "k")])
    return AugmentedVector(v.copy(), stack)


def augment_array(v: np.ndarray) -> np.ndarray:
    """Augmented stack of ``v`` along its second-to-last axis, without the wrapper."""
    return np.concatenate(
        [v, qa.involve(v, "i"), qa.involve(v, "j"), qa.involve(v, "k")], axis=-2
    )


# block pattern of A: rows give q, q^ı, q^ȷ, q^κ from (q_r, q_ı, q_ȷ, q_κ)
_BASIS_SIGNS = np.array(
    [
        [1, 1, 1, 1],
        [1, 1, -1, -1],
        [1, -1, 1, -1],
        [1, -1, -1, 1],
    ],
    dtype=float,
)


def basis_matrix(n: int) -> np.ndarray:
    """The ``4n x 4n`` quaternion matrix mapping stacked real components to ``q^a``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = np.zeros((4 * n, 4 * n, 4))
    idx = np.arange(n)
    for row in range(4):
        for col in range(4):
            out[row * n + idx, col * n + idx, col] = _BASIS_SIGNS[row, col]
    return out


def basis_inverse(n: int) -> np.ndarray:
    """``A^{-1} = A^H / 4``."""
    return qa.hermitian(basis_matrix(n)) * 0.25


def stack_components(qv: Quadrivariate) -> np.ndarray:
    """Real components stacked as a ``4n`` quaternion vector with zero imaginary parts."""
    real = np.concatenate([np.asarray(qv[c], dtype=float) for c in "rijk"])
    out = np.zeros((real.shape[0], 4))
    out[:, 0] = real
    return out
