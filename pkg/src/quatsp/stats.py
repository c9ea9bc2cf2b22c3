"""Sample estimates of augmented quaternion autocorrelations.

Five lagged correlations are estimated from a single realisation
``q(0..N-1)``::

    r_c(l) = <q(n) q*(n-l)>          r_eta(l) = <q(n) (q^eta)*(n-l)>
    r_p(l) = <q(n) q(n-l)>

where ``<.>`` is the time average.  The current sample always multiplies
from the left.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qarray as qa
from .augmented import Quadrivariate, to_quadrivariate
from .core import Quaternion
from .errors import QuaternionDomainError, ShapeError

KINDS = ("c", "i", "j", "k", "p")
COMPONENTS = ("r", "i", "j", "k")
ESTIMATORS = ("biased", "unbiased")

# the ten real matrices recoverable from the four Hermitian-type ones
REAL_PAIRS = ("rr", "ii", "jj", "kk", "ir", "jr", "kr", "ji", "ki", "kj")


def _lagged_partner(q: np.ndarray, kind: str) -> np.ndarray:
    if kind == "c":
        return qa.qconj(q)
    if kind in ("i", "j", "k"):
        return qa.involve_conj(q, kind)
    if kind == "p":
        return q
    raise ValueError(f"unknown autocorrelation kind {kind!r}; expected one of {KINDS}")


def _prepare(signal, pure_mode: bool, demean: bool) -> np.ndarray:
    q = qa.as_qarray(signal, ndim=2).copy()
    if q.shape[0] == 0:
        raise QuaternionDomainError("autocorrelation of an empty signal")
    if demean:
        q -= q.mean(axis=0)
    if pure_mode:
        q[:, 0] = 0.0
    return q


def _check_estimator(estimator: str) -> None:
    if estimator not in ESTIMATORS:
        raise ValueError(f"estimator must be one of {ESTIMATORS}, got {estimator!r}")


def _estimate(q: np.ndarray, partner: np.ndarray, estimator: str) -> tuple[np.ndarray, np.ndarray]:
    n = q.shape[0]
    lags = np.arange(-(n - 1), n)
    out = np.empty((lags.size, 4))
    for idx, lag in enumerate(lags):
        if lag >= 0:
            prod = qa.qmul(q[lag:], partner[: n - lag])
        else:
            prod = qa.qmul(q[: n + lag], partner[-lag:])
        out[idx] = prod.sum(axis=0)
    scale = np.full(lags.size, float(n)) if estimator == "biased" else (n - np.abs(lags)).astype(float)
    return lags, out / scale[:, None]


def autocorr(signal, kind: str = "c", estimator: str = "biased", pure_mode: bool = False,
             demean: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """One autocorrelation sequence over lags ``-(N-1)..N-1``.

    Parameters
    ----------
    signal : array_like, shape (N, 4)
        Quaternion samples in ``(r, i, j, k)`` order.
    kind : {'c', 'i', 'j', 'k', 'p'}
        Which partner multiplies the lagged sample: conjugate, one of the
        three involution conjugates, or the sample itself.
    estimator : {'biased', 'unbiased'}
        Divide each lag sum by ``N`` or by ``N - |l|``.
    pure_mode : bool
        Zero the real part of every sample first.
    demean : bool
        Subtract the sample mean first.

    Returns
    -------
    lags : ndarray of int, shape (2N-1,)
    values : ndarray, shape (2N-1, 4)
    """
    _check_estimator(estimator)
    q = _prepare(signal, pure_mode, demean)
    return _estimate(q, _lagged_partner(q, kind), estimator)


@dataclass(frozen=True)
class AutocorrSet:
    """All five autocorrelation sequences of one signal on a common lag grid."""

    lags: np.ndarray
    r_c: np.ndarray
    r_i: np.ndarray
    r_j: np.ndarray
    r_k: np.ndarray
    r_p: np.ndarray
    estimator: str = "biased"
    pure_mode: bool = False

    def sequence(self, kind: str) -> np.ndarray:
        if kind not in KINDS:
            raise ValueError(f"unknown autocorrelation kind {kind!r}")
        return getattr(self, f"r_{kind}")

    def at(self, kind: str, lag: int) -> Quaternion:
        pos = int(lag) - int(self.lags[0])
        if not 0 <= pos < self.lags.size:
            raise IndexError(f"lag {lag} outside {self.lags[0]}..{self.lags[-1]}")
        return Quaternion.from_array(self.sequence(kind)[pos])

    @property
    def max_lag(self) -> int:
        return int(self.lags[-1])


def autocorr_set(signal, estimator: str = "biased", pure_mode: bool = False,
                 demean: bool = False) -> AutocorrSet:
    _check_estimator(estimator)
    q = _prepare(signal, pure_mode, demean)
    seqs = {}
    lags = None
    for kind in KINDS:
        lags, seqs[kind] = _estimate(q, _lagged_partner(q, kind), estimator)
    return AutocorrSet(lags, seqs["c"], seqs["i"], seqs["j"], seqs["k"], seqs["p"],
                       estimator=estimator, pure_mode=pure_mode)


def check_dependency(s: AutocorrSet) -> float:
    """Largest ``|r_p - (r_i + r_j + r_k - r_c)/2|`` over all lags."""
    shapes = {s.r_c.shape, s.r_i.shape, s.r_j.shape, s.r_k.shape, s.r_p.shape}
    if len(shapes) != 1 or s.r_c.shape[0] != s.lags.size:
        raise ShapeError("autocorrelation sequences are not on a common lag grid")
    rhs = 0.5 * (s.r_i + s.r_j + s.r_k - s.r_c)
    return float(qa.qnorm(s.r_p - rhs).max())


@dataclass(frozen=True)
class CorrMatrices:
    """Toeplitz autocorrelation matrices of size ``(L+1, L+1)``."""

    R_c: np.ndarray
    R_i: np.ndarray
    R_j: np.ndarray
    R_k: np.ndarray
    R_p: np.ndarray

    def get(self, kind: str) -> np.ndarray:
        if kind not in KINDS:
            raise ValueError(f"unknown autocorrelation kind {kind!r}")
        return getattr(self, f"R_{kind}")

    @property
    def size(self) -> int:
        return self.R_c.shape[0]


def toeplitz_from_sequence(lags: np.ndarray, values: np.ndarray, L: int) -> np.ndarray:
    """Matrix with entry ``(m, n)`` equal to ``r(n - m)``."""
    if L < 0 or L > int(lags[-1]):
        raise ValueError(f"L={L} outside 0..{int(lags[-1])}")
    idx = np.arange(L + 1)
    offset = np.subtract.outer(idx, idx).T  # n - m
    return values[offset - int(lags[0])]


def toeplitz(s: AutocorrSet, L: int) -> CorrMatrices:
    mats = {k: toeplitz_from_sequence(s.lags, s.sequence(k), L) for k in KINDS}
    return CorrMatrices(mats["c"], mats["i"], mats["j"], mats["k"], mats["p"])


@dataclass(frozen=True)
class RealCorrSet:
    """The ten independent real correlation matrices ``R_xy``.

    Entry ``(m, n)`` of ``R_xy`` is ``r_xy(n - m)`` with
    ``r_xy(l) = <x(n) y(n-l)>``.  The remaining six follow from
    ``R_yx = R_xy^T``, which :meth:`get` applies.
    """

    rr: np.ndarray
    ii: np.ndarray
    jj: np.ndarray
    kk: np.ndarray
    ir: np.ndarray
    jr: np.ndarray
    kr: np.ndarray
    ji: np.ndarray
    ki: np.ndarray
    kj: np.ndarray

    def get(self, x: str, y: str) -> np.ndarray:
        if x not in COMPONENTS or y not in COMPONENTS:
            raise ValueError(f"components must be in {COMPONENTS}")
        if x + y in REAL_PAIRS:
            return getattr(self, x + y)
        return getattr(self, y + x).T

    def as_dict(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in REAL_PAIRS}


def duality_extract(mats: CorrMatrices) -> RealCorrSet:
    """Recover the real correlation matrices from ``R_c``, ``R_i``, ``R_j``, ``R_k``."""
    c, i, j, k = mats.R_c, mats.R_i, mats.R_j, mats.R_k
    s1 = 0.25 * (c + i + j + k)
    s2 = 0.25 * (c + i - j - k)
    s3 = 0.25 * (c - i + j - k)
    s4 = 0.25 * (c - i - j + k)
    return RealCorrSet(
        rr=s1[..., 0],
        ii=s2[..., 0],
        jj=s3[..., 0],
        kk=s4[..., 0],
        ir=s1[..., 1],
        jr=s1[..., 2],
        kr=s1[..., 3],
        ji=s2[..., 3],
        ki=-s2[..., 2],
        kj=s3[..., 1],
    )


def real_crosscorr_sequence(qv: Quadrivariate, x: str, y: str,
                            estimator: str = "biased") -> tuple[np.ndarray, np.ndarray]:
    """``r_xy(l) = <x(n) y(n-l)>`` over lags ``-(N-1)..N-1``, computed in the real domain."""
    _check_estimator(estimator)
    a = np.asarray(qv[x], dtype=float)
    b = np.asarray(qv[y], dtype=float)
    if a.shape != b.shape:
        raise ShapeError("component lengths differ")
    n = a.size
    if n == 0:
        raise QuaternionDomainError("cross-correlation of an empty signal")
    lags = np.arange(-(n - 1), n)
    # numpy's correlate gives sum_n a[n+l] b[n]
    raw = np.correlate(a, b, mode="full")
    scale = float(n) if estimator == "biased" else (n - np.abs(lags)).astype(float)
    return lags, raw / scale


def real_crosscorr(qv: Quadrivariate, x: str, y: str, L: int, estimator: str = "biased") -> np.ndarray:
    """Toeplitz matrix ``R_xy`` of size ``(L+1, L+1)`` estimated directly from real components."""
    lags, seq = real_crosscorr_sequence(qv, x, y, estimator)
    return toeplitz_from_sequence(lags, seq, L)


def real_corr_set(signal, L: int, estimator: str = "biased", pure_mode: bool = False,
                  demean: bool = False) -> RealCorrSet:
    """All ten real matrices estimated directly; the oracle for :func:`duality_extract`."""
    q = _prepare(signal, pure_mode, demean)
    qv = to_quadrivariate(q)
    return RealCorrSet(**{p: real_crosscorr(qv, p[0], p[1], L, estimator) for p in REAL_PAIRS})


def pseudo_decompose(real: RealCorrSet) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Real and three imaginary parts of ``R_p`` assembled from real correlations."""
    g = real.get
    re = g("r", "r") - g("i", "i") - g("j", "j") - g("k", "k")
    im_i = g("r", "i") + g("i", "r") + g("j", "k") - g("k", "j")
    im_j = g("r", "j") + g("j", "r") - g("i", "k") + g("k", "i")
    im_k = g("r", "k") + g("k", "r") + g("i", "j") - g("j", "i")
    return re, im_i, im_j, im_k
