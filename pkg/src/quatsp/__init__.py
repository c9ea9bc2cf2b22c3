"""Quaternion signal processing: algebra, augmented statistics, HR calculus and QLMS filters."""

from .augmented import (
    AugmentedVector,
    Quadrivariate,
    augment,
    basis_inverse,
    basis_matrix,
    components,
    conj_via_involutions,
    from_quadrivariate,
    involution,
    to_quadrivariate,
)
from .core import (
    I,
    J,
    K,
    ONE,
    PolarForm,
    Quaternion,
    Rotor,
    conj,
    from_polar,
    inverse,
    mul,
    norm,
    q_cos,
    q_exp,
    q_sin,
    rotate,
    to_polar,
)
from .errors import (
    DegenerateSpectrumError,
    DivergenceError,
    NondifferentiablePointError,
    NotEtaHermitianError,
    QuaternionDomainError,
    ShapeError,
)

__version__ = "0.1.0"

__all__ = [
    "AugmentedVector",
    "DegenerateSpectrumError",
    "DivergenceError",
    "I",
    "J",
    "K",
    "NondifferentiablePointError",
    "NotEtaHermitianError",
    "ONE",
    "PolarForm",
    "Quadrivariate",
    "Quaternion",
    "QuaternionDomainError",
    "Rotor",
    "ShapeError",
    "augment",
    "basis_inverse",
    "basis_matrix",
    "components",
    "conj",
    "conj_via_involutions",
    "from_polar",
    "from_quadrivariate",
    "involution",
    "inverse",
    "mul",
    "norm",
    "q_cos",
    "q_exp",
    "q_sin",
    "rotate",
    "to_polar",
    "to_quadrivariate",
]
