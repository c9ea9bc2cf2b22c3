"""HR-calculus gradients of quaternion-valued functions.

For ``f(q)`` with real partials ``P_x = df/dq_x`` (each a quaternion), the
right operator is::

    df/dq*      = (P_r + ı P_i + ȷ P_j + κ P_k) / 4
    df/dq^{ı*}  = (P_r + ı P_i - ȷ P_j - κ P_k) / 4
    df/dq^{ȷ*}  = (P_r - ı P_i + ȷ P_j - κ P_k) / 4
    df/dq^{κ*}  = (P_r - ı P_i - ȷ P_j + κ P_k) / 4

The left operator writes the units to the right of the partials.  A base
``nu`` replaces each unit ``e`` by ``nu^{-1} e nu``, which is the derivative
with respect to ``(q^{nu^{-1}})*``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import qarray as qa
from .core import Quaternion
from .errors import NondifferentiablePointError, QuaternionDomainError

SIDES = ("right", "left")
FD_REL_STEP = 1e-6
QRELU_BOUNDARY_TOL = 1e-8
RADIAL_TOL = 1e-9

# rows of the augmented basis: sign of each unit in the four gradient blocks
_BLOCK_SIGNS = np.array(
    [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ]
)
_UNITS = np.array([qa.UNIT_ARRAYS[u] for u in qa.UNITS])


@dataclass(frozen=True)
class ScalarField:
    """A named function from a quaternion vector (or single quaternion) to ℍ."""

    fn: Callable[[np.ndarray], np.ndarray]
    name: str = "f"
    domain: str = ""

    def __call__(self, q) -> np.ndarray:
        return _as_value(self.fn(q))


@dataclass(frozen=True)
class HRGradient:
    """Gradient blocks with respect to ``q*`` and the three involution conjugates."""

    d_conj: np.ndarray
    d_conj_i: np.ndarray
    d_conj_j: np.ndarray
    d_conj_k: np.ndarray
    side: str = "right"
    blocks: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "blocks", (self.d_conj, self.d_conj_i, self.d_conj_j, self.d_conj_k))

    def stack(self) -> np.ndarray:
        """The four blocks concatenated in augmented order."""
        return np.concatenate([np.atleast_2d(b) for b in self.blocks])

    def map(self, fn) -> "HRGradient":
        return HRGradient(*(fn(b) for b in self.blocks), side=self.side)


def _as_value(v) -> np.ndarray:
    if isinstance(v, Quaternion):
        return v.to_array()
    arr = np.asarray(v, dtype=float)
    if arr.ndim == 0:
        return np.array([float(arr), 0.0, 0.0, 0.0])
    if arr.shape != (4,):
        raise ValueError(f"function must return a quaternion, got shape {arr.shape}")
    return arr


def _units(base) -> np.ndarray:
    if base is None:
        return _UNITS
    nu = np.asarray(base, dtype=float)
    inv = qa.qinv(nu)
    return qa.qmul(qa.qmul(inv, _UNITS), nu)


def default_step(q) -> float:
    return FD_REL_STEP * max(1.0, float(np.sqrt(np.sum(np.square(q)))))


def fd_partials(f, q, h: float | None = None) -> np.ndarray:
    """Central-difference partials ``df/dq_x``.

    Returns an array of shape ``q.shape[:-1] + (4, 4)``: for every coordinate,
    the quaternion partial along each real component ``x`` in ``r, i, j, k``.
    """
    q = np.asarray(q, dtype=float)
    h = default_step(q) if h is None else float(h)
    if not h > 0:
        raise ValueError("finite-difference step must be positive")
    out = np.empty(q.shape + (4,))
    for idx in np.ndindex(q.shape):
        qp = q.copy()
        qm = q.copy()
        qp[idx] += h
        qm[idx] -= h
        out[idx] = (_as_value(f(qp)) - _as_value(f(qm))) / (2.0 * h)
    if not np.all(np.isfinite(out)):
        raise FloatingPointError("non-finite function evaluation in finite differences")
    return out


def combine_partials(partials: np.ndarray, side: str = "right", base=None) -> HRGradient:
    """Assemble HR-gradient blocks from real partials of shape ``(..., 4, 4)``."""
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")
    units = _units(base)
    pr = partials[..., 0, :]
    pv = partials[..., 1:, :]
    if side == "right":
        terms = qa.qmul(units, pv)
    else:
        terms = qa.qmul(pv, units)
    blocks = []
    for signs in _BLOCK_SIGNS:
        blocks.append(0.25 * (pr + np.einsum("u,...uc->...c", signs, terms)))
    return HRGradient(*blocks, side=side)


def fd_gradient(f, q, h: float | None = None, side: str = "right", base=None) -> HRGradient:
    """HR gradient of ``f`` at ``q`` from central finite differences.

    Parameters
    ----------
    f : callable
        Maps an array shaped like ``q`` to a quaternion (or a real scalar).
    q : array_like, shape (4,) or (m, 4)
    h : float, optional
        Step; defaults to ``1e-6 * max(1, ||q||)``.
    side : {'right', 'left'}
        Units multiply the partials from the left (``right``) or the right.
    base : array_like, shape (4,), optional
        Differentiate with respect to ``(q^{base^{-1}})*`` instead of ``q*``.
    """
    return combine_partials(fd_partials(f, q, h), side, base)


# closed-form catalog -------------------------------------------------------

def _norm_sq(q):
    return float(np.sum(np.square(q)))


def _norm(q):
    return math.sqrt(_norm_sq(q))


def _square(q):
    return qa.qmul(q, q)


def _qrelu(q):
    return np.maximum(q, 0.0)


def _identity(q):
    return np.asarray(q, dtype=float)


def _conj(q):
    return qa.qconj(q)


def _grad_norm_sq(q):
    return 0.5 * q


def _grad_norm(q):
    n = _norm(q)
    if n == 0.0:
        raise QuaternionDomainError("norm is not differentiable at 0")
    return 0.25 * q / n


def _grad_square(q):
    return np.array([-q[0], 0.0, 0.0, 0.0])


def _grad_qrelu(q):
    if np.any(np.abs(q) < QRELU_BOUNDARY_TOL):
        raise NondifferentiablePointError(f"qrelu is not differentiable at {q} (a component is 0)")
    u = (q > 0).astype(float)
    return np.array([0.25 * (u[0] - u[1] - u[2] - u[3]), 0.0, 0.0, 0.0])


def _grad_identity(q):
    return np.array([-0.5, 0.0, 0.0, 0.0])


def _grad_conj_rotated(q):
    # derivative with respect to (q^{q^{-1}})*
    return qa.qinv(q) * q[0]


@dataclass(frozen=True)
class CatalogEntry:
    fn: Callable
    grad: Callable
    # base used by the finite-difference check; None means the ordinary q*
    base: Callable | None = None


CATALOG = {
    "norm_sq": CatalogEntry(_norm_sq, _grad_norm_sq),
    "norm": CatalogEntry(_norm, _grad_norm),
    "square": CatalogEntry(_square, _grad_square),
    "qrelu": CatalogEntry(_qrelu, _grad_qrelu),
    "identity": CatalogEntry(_identity, _grad_identity),
    "conj": CatalogEntry(_conj, _grad_conj_rotated, base=lambda q: q),
}


def catalog_gradient(name: str, q) -> np.ndarray:
    """Closed-form ``df/dq*`` for a catalog function.

    ``conj`` is differentiated in the base rotated by ``q`` itself, giving
    ``q^{-1} q_r``; the plain derivative of ``q*`` with respect to ``q*`` is 1.
    """
    try:
        entry = CATALOG[name]
    except KeyError:
        raise ValueError(f"unknown catalog function {name!r}; choose from {sorted(CATALOG)}") from None
    return entry.grad(np.asarray(q, dtype=float))


def catalog_fd_gradient(name: str, q, h: float | None = None) -> np.ndarray:
    entry = CATALOG[name]
    q = np.asarray(q, dtype=float)
    base = entry.base(q) if entry.base is not None else None
    return fd_gradient(entry.fn, q, h, base=base).d_conj


def relative_error(approx, exact) -> float:
    """``||approx - exact|| / max(||exact||, 1)``."""
    approx = np.asarray(approx, dtype=float)
    exact = np.asarray(exact, dtype=float)
    return float(np.sqrt(np.sum(np.square(approx - exact))) / max(np.sqrt(np.sum(np.square(exact))), 1.0))


def sample_point(name: str, rng: np.random.Generator) -> np.ndarray:
    """A random test point away from the catalog entry's singular set."""
    if name == "qrelu":
        return rng.choice([-1.0, 1.0], size=4) * rng.uniform(0.01, 2.0, size=4)
    while True:
        q = rng.normal(size=4)
        if _norm(q) >= 0.1:
            return q


def gradcheck(name: str, trials: int = 1000, seed: int = 0) -> float:
    """Largest relative catalog-versus-finite-difference error over random points."""
    if name not in CATALOG:
        raise ValueError(f"unknown catalog function {name!r}; choose from {sorted(CATALOG)}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        q = sample_point(name, rng)
        worst = max(worst, relative_error(catalog_gradient(name, q), catalog_fd_gradient(name, q)))
    return worst


# multiplication, product and chain rules -----------------------------------

def left_const_mul_rule(nu, grad_in_rotated_base: HRGradient) -> HRGradient:
    """``d(nu f)/dq* = nu . df/d(q^{nu^{-1}})*``.

    ``grad_in_rotated_base`` must be taken with ``base=nu``.  For real-valued
    ``f`` the result equals the ordinary gradient multiplied by ``nu`` on the
    right.
    """
    nu = np.asarray(nu, dtype=float)
    if not np.any(nu):
        raise QuaternionDomainError("left multiplier must be nonzero")
    return grad_in_rotated_base.map(lambda b: qa.qmul(nu, b))


def right_const_mul_rule(grad: HRGradient, nu) -> HRGradient:
    """``d(f nu)/dq^{a*} = (df/dq^{a*}) nu``."""
    nu = np.asarray(nu, dtype=float)
    return grad.map(lambda b: qa.qmul(b, nu))


def product_rule(f, p, q, df=None, dp_rotated=None, zero_tol: float = 1e-12) -> np.ndarray:
    """``d(f p)/dq* = f . dp/d(q^{f^{-1}})* + (df/dq*) . p``.

    Parameters
    ----------
    f, p : callable
        Quaternion-valued functions of ``q``.
    q : array_like, shape (4,) or (m, 4)
    df : callable, optional
        Closed form of ``df/dq*``; finite differences otherwise.
    dp_rotated : callable, optional
        ``dp_rotated(q, nu)`` giving ``dp/d(q^{nu^{-1}})*``; finite
        differences otherwise.

    Notes
    -----
    When ``f(q)`` vanishes the rotated base is undefined; a warning is issued
    and the gradient of the product is taken by finite differences.
    """
    q = np.asarray(q, dtype=float)
    fq = _as_value(f(q))
    pq = _as_value(p(q))
    if np.sqrt(np.sum(fq * fq)) <= zero_tol:
        warnings.warn("f(q) = 0: rotated base undefined, using finite differences", RuntimeWarning, stacklevel=2)
        return fd_gradient(lambda x: qa.qmul(_as_value(f(x)), _as_value(p(x))), q).d_conj
    grad_f = df(q) if df is not None else fd_gradient(f, q).d_conj
    grad_p = dp_rotated(q, fq) if dp_rotated is not None else fd_gradient(p, q, base=fq).d_conj
    return qa.qmul(fq, grad_p) + qa.qmul(grad_f, pq)


def chain_rule_real_inner(f_outer_prime, p_inner, q, grad_inner=None) -> np.ndarray:
    """``d f(p(q))/dq* = (dp/dq*) f'(p(q))`` for real-valued ``p`` and real ``f``.

    ``f_outer_prime`` is the ordinary derivative of the outer function.
    """
    q = np.asarray(q, dtype=float)
    pq = _as_value(p_inner(q))
    if pq[1:].any():
        raise ValueError("inner function must be real-valued")
    g = grad_inner(q) if grad_inner is not None else fd_gradient(p_inner, q).d_conj
    return np.asarray(g, dtype=float) * float(f_outer_prime(pq[0]))


# analyticity residuals ---------------------------------------------------

def crf_residual(f, q, h: float | None = None, side: str = "right") -> float:
    """``||P_r + ı P_i + ȷ P_j + κ P_k||`` (units on the chosen side)."""
    g = fd_gradient(f, q, h, side=side)
    return 4.0 * float(np.sqrt(np.sum(np.square(g.d_conj))))


def local_analyticity_residual(f, q, h: float | None = None) -> float:
    """``||df/dq_r + xi df/drho||`` with ``xi`` the unit imaginary direction and
    ``rho = ||Im q||``.
    """
    q = np.asarray(q, dtype=float)
    rho = float(np.sqrt(np.sum(np.square(q[1:]))))
    if rho < RADIAL_TOL:
        raise QuaternionDomainError("radial direction undefined: imaginary part is zero")
    h = default_step(q) if h is None else float(h)
    xi = np.concatenate([[0.0], q[1:] / rho])
    one = qa.ONE
    d_r = (_as_value(f(q + h * one)) - _as_value(f(q - h * one))) / (2.0 * h)
    d_rho = (_as_value(f(q + h * xi)) - _as_value(f(q - h * xi))) / (2.0 * h)
    return float(np.sqrt(np.sum(np.square(d_r + qa.qmul(xi, d_rho)))))
