import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import random_periodic
from sgordon.floquet import (band_scan, cayley_hamilton_residual, discriminant, monodromy,
                             three_periods_check)
from sgordon.potential import SigmaTau, delta_comb

FREE1 = SigmaTau((), (), 1.0)


def kp(g, k):
    return 2 * math.cos(k) + g / k * math.sin(k)


def test_free_discriminant():
    assert discriminant(FREE1, 1.0) == pytest.approx(2 * math.cos(1.0), abs=1e-14)
    assert discriminant(FREE1, math.pi ** 2) == pytest.approx(-2.0, abs=1e-12)


def test_kronig_penney():
    rng = np.random.default_rng(11)
    for _ in range(20):
        g, k = rng.uniform(-5, 5), rng.uniform(0.1, 10)
        assert discriminant(delta_comb(g, 1.0), k * k) == pytest.approx(kp(g, k), abs=1e-8)


def test_band_scan_examples():
    pts = band_scan(FREE1, [1.0, math.pi ** 2 / 4, math.pi ** 2])
    assert [p.in_band for p in pts] == [True, True, True]
    assert pts[1].discriminant == pytest.approx(0.0, abs=1e-12)
    assert pts[2].discriminant == pytest.approx(-2.0, abs=1e-12)
    d = band_scan(delta_comb(1.0, 1.0), [math.pi ** 2 / 4])[0]
    assert d.discriminant == pytest.approx(2 / math.pi, abs=1e-9) and d.in_band
    assert band_scan(FREE1, []) == []


def test_band_scan_order_and_executor():
    from concurrent.futures import ThreadPoolExecutor

    grid = list(np.linspace(-3, 40, 23))
    q = delta_comb(2.0, 1.0)
    serial = band_scan(q, grid)
    with ThreadPoolExecutor(4) as ex:
        par = band_scan(q, grid, executor=ex)
    assert [p.lam for p in serial] == grid
    assert serial == par


def test_missing_period():
    with pytest.raises(ValueError, match="period"):
        monodromy(SigmaTau(), 1.0)


def test_three_periods_rotation():
    r = three_periods_check(SigmaTau((), (), 2 * math.pi), 1.0, (1.0, 0.0))
    for v in (r.norm_minus, r.norm_plus, r.norm_double):
        assert v == pytest.approx(1.0, abs=1e-10)
    assert r.passed and r.ratio == pytest.approx(1.0, abs=1e-10)


def test_three_periods_zero_vector():
    with pytest.raises(ValueError):
        three_periods_check(FREE1, 1.0, (0.0, 0.0))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_three_periods_property(seed):
    rng = np.random.default_rng(seed)
    q = random_periodic(rng)
    th = rng.uniform(0, 2 * np.pi)
    r = three_periods_check(q, float(rng.uniform(-10, 60)), (math.cos(th), math.sin(th)))
    assert r.ratio >= 0.5 - 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_cayley_hamilton(seed):
    rng = np.random.default_rng(seed)
    M = monodromy(random_periodic(rng), float(rng.uniform(-10, 60)))
    assert cayley_hamilton_residual(M) <= 1e-7
    assert abs(M.det - 1) <= 1e-9


def test_discriminant_continuity():
    q = delta_comb(1.5, 1.0)
    coarse = np.linspace(0.5, 20, 40)
    fine = np.linspace(0.5, 20, 79)
    dc = np.array([discriminant(q, x) for x in coarse])
    df = np.array([discriminant(q, x) for x in fine])
    assert np.allclose(df[::2], dc, atol=1e-9)
    # refinement halves the adjacent jumps roughly; they shrink, never grow
    assert np.max(np.abs(np.diff(df))) <= np.max(np.abs(np.diff(dc)))
