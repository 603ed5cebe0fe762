import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sgordon.errors import QuadratureError
from sgordon.quadrature import integrate


def test_polynomial_exact():
    assert integrate(lambda t: t ** 6, 0.0, 2.0, 1e-12) == pytest.approx(2 ** 7 / 7, rel=1e-14)


def test_reversed_limits():
    assert integrate(np.sin, math.pi, 0.0) == pytest.approx(-2.0, abs=1e-12)


def test_breakpoint_kink():
    val = integrate(np.abs, -1.0, 2.0, 1e-12, breakpoints=[0.0])
    assert val == pytest.approx(2.5, abs=1e-13)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(-2, 2))
def test_endpoint_singularity(gamma, c):
    # int_c^{c+1} (t-c)^-gamma = 1/(1-gamma)
    val = integrate(lambda t: np.abs(t - c) ** -gamma, c, c + 1.0, 1e-10, singular=[c])
    assert val == pytest.approx(1 / (1 - gamma), rel=1e-7)


def test_interior_singularity():
    val = integrate(lambda t: np.abs(t) ** -0.5, -1.0, 1.0, 1e-11, singular=[0.0])
    assert val == pytest.approx(4.0, abs=1e-9)


def test_unreachable_raises_rather_than_hangs():
    rng = np.random.default_rng(0)
    with pytest.raises(QuadratureError):
        integrate(lambda t: rng.normal(size=np.shape(t)), 0.0, 1.0, 1e-12)
