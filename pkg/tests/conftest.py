import numpy as np
import pytest
from hypothesis import strategies as st

from quatsp import Quaternion

# three-sample worked example used throughout the reference tables
REFERENCE_SEQ = np.array(
    [
        [-1.0, -10.0, 1.0, -1.0],
        [-2.0, -4.0, -6.0, 3.0],
        [-4.0, -5.0, 3.0, 1.0],
    ]
)

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
quaternions = st.builds(Quaternion, finite, finite, finite, finite)
nonzero_quaternions = quaternions.filter(lambda q: abs(q) > 1e-3)
pure_quaternions = st.builds(Quaternion.pure, finite, finite, finite)


def unit_pure(x, y, z):
    n = np.sqrt(x * x + y * y + z * z)
    return Quaternion.pure(x / n, y / n, z / n)


unit_pure_quaternions = st.tuples(finite, finite, finite).filter(
    lambda v: np.linalg.norm(v) > 1e-2
).map(lambda v: unit_pure(*v))


def assert_q(actual, expected, atol=1e-12, rtol=1e-12):
    np.testing.assert_allclose(np.asarray(actual, dtype=float), np.asarray(expected, dtype=float),
                               atol=atol, rtol=rtol)


@pytest.fixture
def reference_seq():
    return REFERENCE_SEQ.copy()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
