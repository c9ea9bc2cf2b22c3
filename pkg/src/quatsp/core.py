"""Scalar quaternion arithmetic, polar form, elementary functions and rotation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real

import numpy as np

from .errors import QuaternionDomainError

# below this relative |Im q| the polar axis is undefined and defaults to ı
DEFAULT_AXIS_TOL = 1e-12
UNIT_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class Quaternion:
    """Immutable quaternion ``r + i*ı + j*ȷ + k*κ``.

    Supports ``+``, ``-``, unary minus, the Hamilton product ``*`` (with
    quaternions or real scalars on either side) and division by a real
    scalar.  Quaternion division is deliberately absent because left and
    right quotients differ; use :func:`inverse` explicitly.
    """

    r: float = 0.0
    i: float = 0.0
    j: float = 0.0
    k: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        r, i, j, k = (float(x) for x in a)
        return cls(r, i, j, k)

    @classmethod
    def pure(cls, x: float, y: float, z: float) -> "Quaternion":
        return cls(0.0, x, y, z)

    def to_array(self) -> np.ndarray:
        return np.array([self.r, self.i, self.j, self.k], dtype=float)

    def __array__(self, dtype=None, copy=None):
        return self.to_array() if dtype is None else self.to_array().astype(dtype)

    def __iter__(self):
        return iter((self.r, self.i, self.j, self.k))

    @property
    def real(self) -> float:
        return self.r

    @property
    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.i, self.j, self.k)

    @property
    def vector(self) -> tuple[float, float, float]:
        return (self.i, self.j, self.k)

    def is_pure(self, tol: float = 1e-12) -> bool:
        return abs(self.r) <= tol * max(1.0, norm(self))

    def __add__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.r + other.r, self.i + other.i, self.j + other.j, self.k + other.k)
        if isinstance(other, Real):
            return Quaternion(self.r + other, self.i, self.j, self.k)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.r - other.r, self.i - other.i, self.j - other.j, self.k - other.k)
        if isinstance(other, Real):
            return Quaternion(self.r - other, self.i, self.j, self.k)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Real):
            return Quaternion(other - self.r, -self.i, -self.j, -self.k)
        return NotImplemented

    def __neg__(self):
        return Quaternion(-self.r, -self.i, -self.j, -self.k)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return mul(self, other)
        if isinstance(other, Real):
            return Quaternion(self.r * other, self.i * other, self.j * other, self.k * other)
        return NotImplemented

    def __rmul__(self, other):
        # only reached for a real scalar on the left, which commutes
        if isinstance(other, Real):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Real):
            return Quaternion(self.r / other, self.i / other, self.j / other, self.k / other)
        return NotImplemented

    def __abs__(self) -> float:
        return norm(self)

    def __str__(self) -> str:
        return f"{self.r:g}{self.i:+g}ı{self.j:+g}ȷ{self.k:+g}κ"

    def isclose(self, other: "Quaternion", rtol: float = 1e-12, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.to_array(), np.asarray(other, dtype=float), rtol=rtol, atol=atol))


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)
UNIT = {"1": ONE, "i": I, "j": J, "k": K}


def as_quaternion(x) -> Quaternion:
    if isinstance(x, Quaternion):
        return x
    if isinstance(x, Real):
        return Quaternion(float(x))
    return Quaternion.from_array(x)


def mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a b``."""
    return Quaternion(
        a.r * b.r - a.i * b.i - a.j * b.j - a.k * b.k,
        a.r * b.i + a.i * b.r + a.j * b.k - a.k * b.j,
        a.r * b.j - a.i * b.k + a.j * b.r + a.k * b.i,
        a.r * b.k + a.i * b.j - a.j * b.i + a.k * b.r,
    )


def conj(q: Quaternion) -> Quaternion:
    return Quaternion(q.r, -q.i, -q.j, -q.k)


def norm(q: Quaternion) -> float:
    return math.sqrt(q.r * q.r + q.i * q.i + q.j * q.j + q.k * q.k)


def inverse(q: Quaternion) -> Quaternion:
    n2 = q.r * q.r + q.i * q.i + q.j * q.j + q.k * q.k
    if n2 == 0.0:
        raise QuaternionDomainError("inverse of the zero quaternion")
    return Quaternion(q.r / n2, -q.i / n2, -q.j / n2, -q.k / n2)


def imag_norm(q: Quaternion) -> float:
    return math.sqrt(q.i * q.i + q.j * q.j + q.k * q.k)


@dataclass(frozen=True, slots=True)
class PolarForm:
    """``magnitude * (cos(angle) + axis * sin(angle))`` with ``axis`` pure and unit."""

    magnitude: float
    axis: Quaternion
    angle: float


def to_polar(q: Quaternion) -> PolarForm:
    """Polar decomposition; never raises.

    When the imaginary part is negligible (``|Im q| < 1e-12 |q|``) the axis
    defaults to ``ı`` and the angle is 0 or pi depending on the sign of the
    real part.
    """
    mag = norm(q)
    vn = imag_norm(q)
    if mag == 0.0 or vn < DEFAULT_AXIS_TOL * mag:
        return PolarForm(mag, I, 0.0 if q.r >= 0 else math.pi)
    axis = Quaternion(0.0, q.i / vn, q.j / vn, q.k / vn)
    return PolarForm(mag, axis, math.atan2(vn, q.r))


def from_polar(p: PolarForm) -> Quaternion:
    c, s = math.cos(p.angle), math.sin(p.angle)
    a = p.axis
    return Quaternion(p.magnitude * c, p.magnitude * s * a.i, p.magnitude * s * a.j, p.magnitude * s * a.k)


def _check_unit_pure(xi: Quaternion, what: str) -> None:
    sq = mul(xi, xi)
    if norm(sq + 1.0) > UNIT_TOL:
        raise QuaternionDomainError(f"{what} must be a pure unit quaternion (xi^2 = -1), got {xi}")


def slice_apply(fn, q: Quaternion) -> Quaternion:
    """Lift a complex function with real Taylor coefficients to ℍ.

    ``q = a + xi*b`` with ``xi = Im q / |Im q|`` is evaluated as ``fn(a + 1j*b)``
    and the imaginary unit of the result mapped back onto ``xi``.
    """
    vn = imag_norm(q)
    z = complex(fn(complex(q.r, vn)))
    if vn == 0.0:
        # real input: xi is arbitrary, the imaginary part of fn(real) is 0
        return Quaternion(z.real)
    s = z.imag / vn
    return Quaternion(z.real, q.i * s, q.j * s, q.k * s)


def q_exp(q: Quaternion) -> Quaternion:
    """``e^{q_r} (cos|Im q| + xi sin|Im q|)``."""
    vn = imag_norm(q)
    ea = math.exp(q.r)
    if vn == 0.0:
        return Quaternion(ea)
    s = ea * math.sin(vn) / vn
    return Quaternion(ea * math.cos(vn), q.i * s, q.j * s, q.k * s)


def q_sin(theta: float, xi: Quaternion) -> Quaternion:
    """``(e^{xi theta} - e^{-xi theta}) / (2 xi)`` for pure unit ``xi``."""
    _check_unit_pure(xi, "xi")
    diff = q_exp(xi * theta) - q_exp(xi * -theta)
    return mul(inverse(xi * 2.0), diff)


def q_cos(theta: float, xi: Quaternion) -> Quaternion:
    """``(e^{xi theta} + e^{-xi theta}) / 2`` for pure unit ``xi``."""
    _check_unit_pure(xi, "xi")
    return (q_exp(xi * theta) + q_exp(xi * -theta)) * 0.5


@dataclass(frozen=True, slots=True)
class Rotor:
    """Unit quaternion ``e^{axis angle / 2}`` acting by ``v -> mu v mu^{-1}``."""

    half_angle_exp: Quaternion

    @classmethod
    def from_axis_angle(cls, axis: Quaternion, angle: float) -> "Rotor":
        _check_unit_pure(axis, "rotation axis")
        axis = axis / imag_norm(axis)
        return cls(q_exp(axis * (angle / 2.0)))

    def apply(self, v: Quaternion) -> Quaternion:
        mu = self.half_angle_exp
        # mu is unit so its inverse is its conjugate
        return mul(mul(mu, v), conj(mu))

    def __mul__(self, other: "Rotor") -> "Rotor":
        return Rotor(mul(self.half_angle_exp, other.half_angle_exp))


def rotate(v: Quaternion, axis: Quaternion, angle: float) -> Quaternion:
    """Right-handed rotation of the pure quaternion ``v`` about ``axis`` by ``angle``."""
    if not v.is_pure():
        raise QuaternionDomainError(f"rotate expects a pure quaternion, got {v}")
    out = Rotor.from_axis_angle(axis, angle).apply(v)
    # conjugation leaves the real part untouched; drop its rounding residue
    return Quaternion(0.0, out.i, out.j, out.k)
