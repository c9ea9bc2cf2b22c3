"""Widely-linear prediction and the QLMS family of adaptive filters.

Weights are stored stacked, ``w = [g; h; u; v]`` of shape ``(4n, 4)``, aligned
with the augmented regressor ``q^a = [q; q^ı; q^ȷ; q^κ]``.  Predictions use the
plain transpose ``w^T q^a = sum_k w_k q^a_k`` with the weight on the left.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import qarray as qa
from .augmented import augment_array
from .errors import DivergenceError, ShapeError

ACTIVATIONS = ("linear", "tanh")
DEFAULT_GAIN = 0.01
DIVERGENCE_FACTOR = 1e6
POLE_TOL = 1e-8


@dataclass(frozen=True)
class WidelyLinearWeights:
    """The four weight vectors of ``y = g^T z + h^T z^ı + u^T z^ȷ + v^T z^κ``."""

    g: np.ndarray
    h: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        shapes = {np.shape(x) for x in (self.g, self.h, self.u, self.v)}
        if len(shapes) != 1:
            raise ShapeError(f"weight blocks differ in shape: {sorted(shapes)}")

    @property
    def n(self) -> int:
        return np.shape(self.g)[0]

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.g, self.h, self.u, self.v])

    @classmethod
    def from_stacked(cls, w) -> "WidelyLinearWeights":
        w = qa.as_qarray(w, ndim=2)
        if w.shape[0] % 4:
            raise ShapeError(f"stacked weights must have length 4n, got {w.shape[0]}")
        return cls(*(b.copy() for b in np.split(w, 4)))

    @classmethod
    def zeros(cls, n: int) -> "WidelyLinearWeights":
        return cls(*(np.zeros((n, 4)) for _ in range(4)))


def _stacked(weights) -> np.ndarray:
    if isinstance(weights, WidelyLinearWeights):
        return weights.stacked()
    return qa.as_qarray(weights, ndim=2)


def wl_predict(weights, z) -> np.ndarray:
    """``g^T z + h^T z^ı + u^T z^ȷ + v^T z^κ``.

    Parameters
    ----------
    weights : WidelyLinearWeights or array_like, shape (4n, 4)
    z : array_like, shape (n, 4)
    """
    w = _stacked(weights)
    za = augment_array(qa.as_qarray(z, ndim=2))
    if w.shape != za.shape:
        raise ShapeError(f"weights {w.shape[:-1]} do not match regressor {za.shape[:-1]}")
    return qa.qdot(w, za)


def augmented_block_matrix(weights) -> np.ndarray:
    """``4 x 4n`` quaternion matrix whose rows predict ``y``, ``y^ı``, ``y^ȷ``, ``y^κ``."""
    if not isinstance(weights, WidelyLinearWeights):
        weights = WidelyLinearWeights.from_stacked(weights)
    g, h, u, v = weights.g, weights.h, weights.u, weights.v
    rows = [
        [g, h, u, v],
        [qa.involve(b, "i") for b in (h, g, v, u)],
        [qa.involve(b, "j") for b in (u, v, g, h)],
        [qa.involve(b, "k") for b in (v, u, h, g)],
    ]
    return np.stack([np.concatenate(r) for r in rows])


def augmented_predict(block_weights, za) -> np.ndarray:
    """Augmented estimate ``[y; y^ı; y^ȷ; y^κ]`` as a ``(4, 4)`` array."""
    block_weights = qa.as_qarray(block_weights, ndim=3)
    za = qa.as_qarray(za, ndim=2)
    if block_weights.shape[1] != za.shape[0]:
        raise ShapeError(f"block matrix {block_weights.shape[:-1]} does not match z^a {za.shape[:-1]}")
    return qa.qmatmul(block_weights, za)


# activations ---------------------------------------------------------------

def slice_map(fn, q) -> np.ndarray:
    """Apply a complex function with real Taylor coefficients to a quaternion array."""
    q = np.asarray(q, dtype=float)
    rho = np.sqrt(np.sum(np.square(q[..., 1:]), axis=-1))
    z = fn(q[..., 0] + 1j * rho)
    scale = np.divide(z.imag, rho, out=np.zeros_like(rho), where=rho > 0)
    out = np.empty_like(q)
    out[..., 0] = z.real
    out[..., 1:] = q[..., 1:] * scale[..., None]
    return out


def qtanh(q) -> np.ndarray:
    return slice_map(np.tanh, q)


def _sech2(z):
    return 1.0 / np.cosh(z) ** 2


def qsech2(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    rho = float(np.sqrt(np.sum(np.square(q[1:]))))
    if abs(np.cosh(q[0] + 1j * rho)) < POLE_TOL:
        warnings.warn("tanh evaluated near a pole", RuntimeWarning, stacklevel=3)
    return slice_map(_sech2, q)


def slice_derivative(fn, dfn, s, h) -> np.ndarray:
    """Directional derivative of the slice extension of ``fn`` at ``s`` along ``h``.

    The in-plane part of ``h`` is scaled by ``fn'``; the part orthogonal to
    the slice only turns the imaginary axis, scaled by ``Im fn / rho``.
    """
    s = np.asarray(s, dtype=float)
    h = np.asarray(h, dtype=float)
    rho = float(np.sqrt(np.sum(np.square(s[1:]))))
    z = complex(s[0], rho)
    d = complex(dfn(z))
    if rho > 0:
        xi = s[1:] / rho
        ratio = complex(fn(z)).imag / rho
    else:
        xi = np.array([1.0, 0.0, 0.0])
        # Im fn(a + i rho) / rho tends to fn'(a) on the real axis
        ratio = d.real
    along = float(h[1:] @ xi)
    perp = h[1:] - along * xi
    plane = np.concatenate([[h[0]], along * xi])
    d_quat = np.concatenate([[d.real], d.imag * xi])
    return qa.qmul(d_quat, plane) + np.concatenate([[0.0], ratio * perp])


# adaptive filters ------------------------------------------------------------

@dataclass
class FilterState:
    """Mutable state of a QLMS-type filter; steps update it in place."""

    weights: np.ndarray
    gain: float = DEFAULT_GAIN
    activation: str = "linear"
    step: int = 0
    errors: list = field(default_factory=list)
    # blocks (0..3 for g, h, u, v) held at zero after every update
    frozen: tuple = ()

    def __post_init__(self):
        self.weights = qa.as_qarray(self.weights, ndim=2).copy()
        if not self.gain >= 0:
            raise ValueError("gain must be nonnegative")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}")
        if self.weights.shape[0] % 4:
            raise ShapeError("stacked weights must have length 4n")
        self._ref = 0.0

    @classmethod
    def zeros(cls, taps: int, gain: float = DEFAULT_GAIN, activation: str = "linear",
              frozen: tuple = ()) -> "FilterState":
        return cls(np.zeros((4 * taps, 4)), gain, activation, frozen=tuple(frozen))

    @property
    def taps(self) -> int:
        return self.weights.shape[0] // 4

    @property
    def error_trace(self) -> np.ndarray:
        return np.array(self.errors).reshape(-1, 4)

    @property
    def squared_errors(self) -> np.ndarray:
        return np.sum(np.square(self.error_trace), axis=-1)

    def split(self) -> WidelyLinearWeights:
        return WidelyLinearWeights.from_stacked(self.weights)


def _guard(state: FilterState, err: np.ndarray) -> None:
    mag = float(np.sqrt(np.sum(err * err)))
    if not np.isfinite(mag):
        raise DivergenceError(f"non-finite error at step {state.step}")
    if state._ref == 0.0:
        state._ref = mag
    elif mag > DIVERGENCE_FACTOR * state._ref:
        raise DivergenceError(
            f"error norm {mag:.3g} exceeded {DIVERGENCE_FACTOR:g} times its initial value at step {state.step}"
        )


def _record(state: FilterState, err: np.ndarray) -> None:
    _guard(state, err)
    state.errors.append(err)
    state.step += 1


def _apply_freeze(state: FilterState) -> None:
    n = state.taps
    for b in state.frozen:
        state.weights[b * n:(b + 1) * n] = 0.0


def qlms_step(state: FilterState, q_n, y_n) -> FilterState:
    """One QLMS update ``w <- w + gain * e * conj(q^a)``.

    The error ``e = y - w^T q^a`` is formed before the update and multiplies
    the conjugated regressor from the left.
    """
    a = augment_array(qa.as_qarray(q_n, ndim=2))
    if a.shape != state.weights.shape:
        raise ShapeError(f"regressor {a.shape[:-1]} does not match weights {state.weights.shape[:-1]}")
    err = np.asarray(y_n, dtype=float) - qa.qdot(state.weights, a)
    _record(state, err)
    state.weights += state.gain * qa.qmul(err[None, :], qa.qconj(a))
    _apply_freeze(state)
    return state


def nlqlms_step(state: FilterState, q_n, y_n) -> FilterState:
    """One nonlinear QLMS update with ``y_hat = tanh(w^T q^a)``.

    ``w <- w + gain * e * sech^2(q^{aH} w*) * conj(q^a)``, factors in that order.
    """
    a = augment_array(qa.as_qarray(q_n, ndim=2))
    if a.shape != state.weights.shape:
        raise ShapeError(f"regressor {a.shape[:-1]} does not match weights {state.weights.shape[:-1]}")
    s = qa.qdot(state.weights, a)
    err = np.asarray(y_n, dtype=float) - qtanh(s)
    _record(state, err)
    # q^{aH} w* is the conjugate of w^T q^a
    d = qsech2(qa.qconj(s))
    state.weights += state.gain * qa.qmul(qa.qmul(err, d)[None, :], qa.qconj(a))
    _apply_freeze(state)
    return state


def tap_regressors(signal, taps: int) -> np.ndarray:
    """Tap-delay vectors ``[q(n), q(n-1), ..., q(n-L+1)]`` with zeros before the start."""
    if taps < 1:
        raise ValueError("taps must be >= 1")
    x = qa.as_qarray(signal, ndim=2)
    padded = np.concatenate([np.zeros((taps - 1, 4)), x])
    idx = np.arange(x.shape[0])[:, None] + (taps - 1) - np.arange(taps)[None, :]
    return padded[idx]


def run_filter(signal, targets, taps: int, gain: float = DEFAULT_GAIN, activation: str = "linear",
               state: FilterState | None = None, frozen: tuple = ()) -> FilterState:
    """Run QLMS (or nonlinear QLMS) over a whole signal.

    Parameters
    ----------
    signal, targets : array_like, shape (N, 4)
    taps : int
    gain : float
    activation : {'linear', 'tanh'}
    state : FilterState, optional
        Continue from this state instead of zero weights.
    frozen : tuple of int
        Weight blocks held at zero; ``(1, 2, 3)`` gives a strictly-linear filter.
    """
    x = qa.as_qarray(signal, ndim=2)
    y = qa.as_qarray(targets, ndim=2)
    if x.shape != y.shape:
        raise ShapeError(f"signal has {x.shape[0]} samples but targets have {y.shape[0]}")
    if state is None:
        state = FilterState.zeros(taps, gain, activation, frozen)
    step = nlqlms_step if state.activation == "tanh" else qlms_step
    for reg, target in zip(tap_regressors(x, taps), y):
        step(state, reg, target)
    return state


# gradients -----------------------------------------------------------------

def qlms_gradient(w, q_n, y_n) -> np.ndarray:
    """``dJ/dw* = -e conj(q^a) / 2`` for ``J = ||y - w^T q^a||^2``."""
    a = augment_array(qa.as_qarray(q_n, ndim=2))
    err = np.asarray(y_n, dtype=float) - qa.qdot(w, a)
    return -0.5 * qa.qmul(err[None, :], qa.qconj(a))


def nlqlms_direction(w, q_n, y_n) -> np.ndarray:
    """The gradient the nonlinear update descends: ``-e sech^2(s*) conj(q^a) / 2``."""
    a = augment_array(qa.as_qarray(q_n, ndim=2))
    s = qa.qdot(w, a)
    err = np.asarray(y_n, dtype=float) - qtanh(s)
    return -0.5 * qa.qmul(qa.qmul(err, qsech2(qa.qconj(s)))[None, :], qa.qconj(a))


def nlqlms_exact_gradient(w, q_n, y_n) -> np.ndarray:
    """``dJ/dw*`` for ``J = ||y - tanh(w^T q^a)||^2`` using the slice derivative of tanh."""
    w = qa.as_qarray(w, ndim=2)
    a = augment_array(qa.as_qarray(q_n, ndim=2))
    s = qa.qdot(w, a)
    err = np.asarray(y_n, dtype=float) - qtanh(s)
    out = np.zeros_like(w)
    for k in range(w.shape[0]):
        for x in range(4):
            e_x = np.zeros(4)
            e_x[x] = 1.0
            ds = qa.qmul(e_x, a[k])
            dy = slice_derivative(np.tanh, _sech2, s, ds)
            partial = -2.0 * float(dy @ err)
            out[k] += 0.25 * partial * e_x
    return out


def least_squares_weights(signal, targets, taps: int, widely: bool = True) -> np.ndarray:
    """Batch least-squares stacked weights; strictly linear when ``widely`` is false.

    The fit is solved over the real parameters of ``w``, using that
    ``w^T q^a`` is real-linear in each component of each weight.
    """
    regs = tap_regressors(signal, taps)
    y = qa.as_qarray(targets, ndim=2)
    aug = augment_array(regs)
    used = aug.shape[1] if widely else taps
    cols = []
    for k in range(used):
        for x in range(4):
            e_x = np.zeros(4)
            e_x[x] = 1.0
            cols.append(qa.qmul(e_x, aug[:, k]).reshape(-1))
    design = np.stack(cols, axis=1)
    params, *_ = np.linalg.lstsq(design, y.reshape(-1), rcond=None)
    w = np.zeros((4 * taps, 4))
    w[:used] = params.reshape(used, 4)
    return w


def prediction_mse(w, signal, targets, taps: int) -> float:
    aug = augment_array(tap_regressors(signal, taps))
    pred = qa.qmul(w[None], aug).sum(axis=1)
    diff = qa.as_qarray(targets, ndim=2) - pred
    return float(np.mean(np.sum(diff * diff, axis=-1)))
