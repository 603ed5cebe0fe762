import math
from fractions import Fraction

import numpy as np
import pytest

from corpus import random_periodic
from sgordon.errors import DeskScaleError
from sgordon.floquet import monodromy
from sgordon.gordon import liouville_truncation
from sgordon.potential import FourierMode, QuasiperiodicPotential, Sawtooth, SigmaTau, delta_comb
from sgordon.spectrum import (approximant_proximity, decay_profile, default_gamma,
                              eigen_scan, trends_to_zero)

SIN = FourierMode(1, 0.0, 1.0, 1.0)


def test_profile_rotation():
    prof = decay_profile(SigmaTau(), 1.0, (0.0, 1.0), 5.0, 10)
    assert np.allclose([v for _, v in prof], 1.0, atol=1e-12)
    assert not trends_to_zero(prof)


def test_profile_hyperbolic():
    prof = decay_profile(SigmaTau(), -1.0, (1 / math.sqrt(2), 1 / math.sqrt(2)), 2.0, 8)
    for t, v in prof:
        assert v == pytest.approx(math.exp(2 * t), rel=1e-10)


def test_profile_gap_growth_rate():
    q = delta_comb(1.0, 1.0)
    lam = 0.0        # below the first band: |tr M| = 3
    mu = max(abs(np.linalg.eigvals(monodromy(q, lam).matrix)))
    prof = dict(decay_profile(q, lam, (0.3, 0.9), 8.0, 8))
    rate = (math.log(prof[8.0]) - math.log(prof[4.0])) / 4
    assert rate == pytest.approx(2 * math.log(mu), rel=1e-3)


def test_scan_examples():
    rep = eigen_scan(SigmaTau((), (), 2 * math.pi), [1.0])
    assert rep.rows[0].min_max == pytest.approx(1.0, abs=1e-9)
    assert eigen_scan(delta_comb(1.0), []).rows == []
    rep = eigen_scan(delta_comb(1.0), np.linspace(-1, 25, 27), angles=90)
    assert rep.passed
    assert min(r.min_max for r in rep.rows) >= 0.5 - 1e-9


def test_scan_missing_period():
    with pytest.raises(ValueError):
        eigen_scan(SigmaTau(), [1.0])


@pytest.mark.parametrize("seed", range(6))
def test_three_period_samples(seed):
    rng = np.random.default_rng(seed)
    q = random_periodic(rng)
    T = q.period
    th = rng.uniform(0, 2 * np.pi)
    prof = dict(decay_profile(q, float(rng.uniform(-5, 40)), (math.cos(th), math.sin(th)),
                              2 * T, 2))
    assert max(prof[-T], prof[T], prof[2 * T]) >= (0.25 - 1e-9) * prof[0.0]


def test_proximity_trivial():
    q = QuasiperiodicPotential(sigma1=(Sawtooth(1.0),), alpha=liouville_truncation(10, 3))
    rec = approximant_proximity(q, 2, 2.0, 0.0, (1.0, 0.0))
    assert rec.gaps == (0.0, 0.0, 0.0) and rec.passed
    half = QuasiperiodicPotential(sigma2=(SIN,), alpha=Fraction(1, 2))
    rec = approximant_proximity(half, 1, 2.0, 0.0, (0.0, 1.0))
    assert rec.gaps == (0.0, 0.0, 0.0)


def test_proximity_liouville():
    q = QuasiperiodicPotential(sigma2=(SIN,), alpha=liouville_truncation(10, 3))
    rec = approximant_proximity(q, 1, 2.0, -1.0, (1.0, 0.0))
    assert rec.passed and all(g > 0 for g in rec.gaps)


def test_proximity_budget():
    q = QuasiperiodicPotential(sigma2=(SIN,), alpha=liouville_truncation(10, 4))
    with pytest.raises(DeskScaleError, match="budget"):
        approximant_proximity(q, 3, 2.0, 0.0, (1.0, 0.0))
    with pytest.raises(ValueError):
        approximant_proximity(q, 1, 0.0, 1.0, (1.0, 0.0))


def test_default_gamma_below_spectrum():
    q = delta_comb(1.0, 1.0)
    g = default_gamma(q)
    # the bottom band edge of the comb lies near 0.87
    assert g < 0.87 - 0.5
