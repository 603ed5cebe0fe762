import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sgordon.sobolev import (GridFunction, albe_constant, check_dilation_bound,
                             check_shift_bound, check_two_scale_bound, reflect_extend,
                             spectral_w1_norm, ws_norm)


def band_limited(rng, K=5):
    ks = np.arange(1, K + 1)
    a = rng.normal(size=K) / ks
    b = rng.normal(size=K) / ks

    def f(t):
        t = np.asarray(t, float)[..., None]
        return (a * np.cos(2 * np.pi * ks * t) + b * np.sin(2 * np.pi * ks * t)).sum(-1)

    return f


def bump_supported(f, L, n):
    t = np.linspace(0, L, n)
    v = f(t) * np.sin(np.pi * t / L) ** 2
    v[[0, -1]] = 0.0
    return GridFunction(v, t[1] - t[0], 0.0)


def test_grid_invariants():
    with pytest.raises(ValueError):
        GridFunction(np.ones(4), 0.1)
    with pytest.raises(ValueError):
        GridFunction(np.ones(10), 0.0)


def test_ws_plancherel():
    rng = np.random.default_rng(0)
    x = rng.normal(size=64)
    f = GridFunction(x, 0.05)
    assert ws_norm(f, 0) == pytest.approx(math.sqrt(0.05 * np.sum(x ** 2)), rel=1e-12)


def test_ws_single_mode():
    f = GridFunction.periodic_from_function(lambda t: np.sin(2 * np.pi * t), 256)
    # non-periodic view of one period: the mode dominates
    g = GridFunction(f.samples, f.spacing)
    l2 = ws_norm(g, 0)
    assert ws_norm(g, 1) == pytest.approx(math.sqrt(1 + 4 * math.pi ** 2) * l2, rel=1e-2)


def test_ws_matches_spectral_w1():
    t = np.linspace(-4, 4, 513)
    f = GridFunction(np.exp(-t ** 2), t[1] - t[0], -4.0)
    assert ws_norm(f, 1) == pytest.approx(spectral_w1_norm(f), rel=1e-6)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31), st.floats(0, 1))
def test_ws_log_convex(seed, s):
    f = bump_supported(band_limited(np.random.default_rng(seed)), 2.0, 257)
    lhs = ws_norm(f, s)
    assert lhs <= ws_norm(f, 0) ** (1 - s) * ws_norm(f, 1) ** s * (1 + 1e-6)


def test_reflect_examples():
    f = GridFunction(np.ones(21), 0.1, 0.0)
    psi = reflect_extend(f)
    assert psi(-1.0) == pytest.approx(0.5)
    assert psi(psi.origin) == pytest.approx(0.0, abs=1e-15)
    assert psi(psi.end) == pytest.approx(0.0, abs=1e-15)
    assert np.array_equal(psi(f.grid), f.samples)
    with pytest.raises(ValueError):
        reflect_extend(GridFunction(np.ones(9), 0.1))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31), st.floats(1, 4))
def test_reflect_seven(seed, L):
    f = GridFunction.from_function(band_limited(np.random.default_rng(seed)), 0.0, L, 401)
    psi = reflect_extend(f)
    a, b = psi.w1_norm_sq()
    c, d = f.w1_norm_sq()
    assert a + b <= 7 * (c + d)


def test_shift_examples():
    const = GridFunction(np.full(31, 2.0), 0.1)
    assert check_shift_bound(const, 1.0, 0.3).lhs == 0.0
    f = GridFunction.from_function(lambda t: np.sin(2 * np.pi * t), 0.0, 3.0, 601)
    assert check_shift_bound(f, 2.0, 0.1).passed
    ratios = [check_shift_bound(f, 2.0, e).lhs / e ** 2 for e in (0.04, 0.02, 0.01)]
    bound = 7 * sum(f.w1_norm_sq())
    assert all(r <= bound for r in ratios)
    with pytest.raises(ValueError):
        check_shift_bound(f, 2.0, 1.5)


def test_dilation_examples():
    f = bump_supported(lambda t: np.ones_like(t), 4.0, 801)
    small = check_dilation_bound(f, 1.0001, 3.0)
    assert small.lhs < 1e-6 and small.passed
    assert check_dilation_bound(f, 1.05, 3.0).passed
    # support beyond b: only the dilated copy overlaps [1, b]
    t = np.linspace(0, 8, 801)
    v = np.where(t > 3.2, np.sin(np.pi * (t - 3.2) / 4.8) ** 2, 0.0)
    v[-1] = 0.0
    assert check_dilation_bound(GridFunction(v, t[1] - t[0]), 1.5, 3.0).passed
    with pytest.raises(ValueError):
        check_dilation_bound(f, 1.0, 3.0)
    with pytest.raises(ValueError):
        check_dilation_bound(GridFunction(np.ones(10), 0.1), 1.2, 3.0)


def test_two_scale_examples():
    f = GridFunction.periodic_from_function(lambda t: np.sin(2 * np.pi * t), 256)
    same = check_two_scale_bound(f, 0.5, 0.5, 0.0, 4.0, 1.0)
    assert same.lhs == pytest.approx(0.0, abs=1e-20) and same.passed
    assert check_two_scale_bound(f, 0.5, 0.55, 0.0, 4.0, 1.0).passed
    r0 = check_two_scale_bound(f, 0.5, 0.55, 0.0, 4.0, 0.0)
    assert r0.passed and r0.details["C_s"] == 4.0
    with pytest.raises(ValueError):
        check_two_scale_bound(f, 0.5, 1.2, 0.0, 4.0, 1.0)
    with pytest.raises(ValueError):
        check_two_scale_bound(f, 0.5, 0.6, 0.0, 1.0, 1.0)


def test_albe_constant():
    assert albe_constant(0) == 4 and albe_constant(1) == 504
    assert albe_constant(0.5) == pytest.approx(math.sqrt(4 * 504))


def test_lhs_matches_dense_oracle():
    f = GridFunction.periodic_from_function(lambda t: np.sin(2 * np.pi * t), 512)
    r = check_two_scale_bound(f, 0.4, 0.5, 0.3, 3.0, 0.5)
    t = np.linspace(-3, 6, 400001)
    g = (np.sin(2 * np.pi * (0.4 * t + 0.3)) - np.sin(2 * np.pi * (0.5 * t + 0.3))) ** 2
    dense = np.trapezoid(g, t)
    assert r.lhs == pytest.approx(dense, rel=1e-3)
