import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import random_periodic
from sgordon.bounds import (BoundCertificate, GrowthParams, c_q, gronwall_bound,
                            gronwall_constants, group_norm_sup, growth_bound_generic,
                            growth_bound_lambda, growth_constants, offdiag_norm,
                            unif_growth_bound)
from sgordon.potential import (Constant, FourierMode, NormKind, SigmaTau, StepTrain,
                               unif_norm)
from sgordon.propagator import propagate, transfer_matrix


def ab_system(rng):
    """(a, b, SigmaTau) with G = [[a, 1], [b, -a]] at lam = 0."""
    n = int(rng.integers(1, 5))
    bp = tuple(np.concatenate([[0.0], np.sort(rng.uniform(0, 1, n - 1))]))
    av = rng.uniform(-2, 2, n)
    bv = rng.uniform(-6, 6, n)
    a = StepTrain(bp, tuple(av), 1.0)
    b = StepTrain(bp, tuple(bv), 1.0)
    tau = StepTrain(bp, tuple(bv + av ** 2), 1.0)
    return a, b, SigmaTau((a,), (tau,), 1.0)


def test_offdiag_examples():
    assert offdiag_norm(0, 2) == 2
    assert offdiag_norm(3, 4) == pytest.approx(2 + math.sqrt(13), abs=1e-15)
    assert offdiag_norm(-1.5, 0) == 1.5
    svd = np.linalg.norm(np.array([[3.0, 0.0], [4.0, -3.0]]), 2)
    assert offdiag_norm(3, 4) == pytest.approx(svd, abs=1e-13)


@settings(max_examples=200)
@given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))
def test_offdiag_equals_svd(a, b):
    svd = np.linalg.norm(np.array([[a, 0.0], [b, -a]]), 2)
    assert offdiag_norm(a, b) == pytest.approx(svd, rel=1e-12, abs=1e-300)


def test_generic_rotation_attains_bound():
    t = 1.7
    bound = growth_bound_generic(0.0, -1.0, 1.0, t)
    assert bound == pytest.approx(1.0)
    U = propagate(SigmaTau(), 1.0, 0.0, t, (0.6, 0.8))
    assert U.norm == pytest.approx(bound, abs=1e-12)


def test_generic_shear():
    bound = growth_bound_generic(0.0, 0.0, 1.0, 2.0)
    assert bound == pytest.approx(math.e, rel=1e-12)
    shear = np.linalg.norm(np.array([[1.0, 2.0], [0.0, 1.0]]), 2)
    assert shear == pytest.approx(1 + math.sqrt(2)) and shear <= bound


def test_generic_bad_c():
    with pytest.raises(ValueError):
        growth_bound_generic(0.0, 0.0, 0.5, 1.0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_generic_dominates(seed):
    rng = np.random.default_rng(seed)
    a, b, q = ab_system(rng)
    c = float(rng.uniform(1, 5))
    t = float(rng.uniform(-3, 3))
    x0 = rng.normal(size=2)
    U = propagate(q, 0.0, 0.0, t, x0)
    bound = growth_bound_generic(a, b, c, t, float(np.hypot(*x0)),
                                 breakpoints=q.breakpoints(min(0, t), max(0, t)))
    assert U.norm <= bound * (1 + 1e-9)


def test_growth_case_constants():
    assert growth_constants(0.0)[0] == 1.0
    assert growth_constants(-4.0)[0] == 2.0
    assert growth_constants(-0.5)[0] == 1.0
    assert growth_constants(2.0)[0] == pytest.approx(math.sqrt(2.25) + 0.5)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_lambda_bound_dominates(seed):
    rng = np.random.default_rng(seed)
    q = random_periodic(rng)
    lam = float(rng.choice([rng.uniform(-8, -1), rng.uniform(-1, 0), rng.uniform(0, 40)]))
    t = float(rng.uniform(-3, 3))
    x0 = rng.normal(size=2)
    U = propagate(q, lam, 0.0, t, x0)
    assert U.norm <= growth_bound_lambda(q, lam, t, float(np.hypot(*x0))) * (1 + 1e-9)


def test_unif_examples():
    assert unif_growth_bound(0, 0, 0, 0) == pytest.approx(math.e)
    assert unif_growth_bound(0, 0, -4, 1) == pytest.approx(2 * math.exp(6))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_unif_dominates_lambda_bound(seed):
    rng = np.random.default_rng(seed)
    q = random_periodic(rng, str(rng.choice(["steps", "sawtooth"])))
    s = unif_norm(q.sigma, NormKind.L2SQ)
    tn = unif_norm(q.tau, NormKind.L1)
    lam = float(rng.uniform(-6, 30))
    t = float(rng.uniform(-4, 4))
    assert growth_bound_lambda(q, lam, t) <= unif_growth_bound(s, tn, lam, t) * (1 + 1e-9)


def test_gronwall_constants():
    omega, C3, C2 = gronwall_constants(1.5, 0.5)
    assert (omega, C3) == (1.0, 1.0) and C2 == pytest.approx(math.e)
    with pytest.raises(ValueError):
        gronwall_constants(1.0, 1.0)


@pytest.mark.parametrize("lam,gamma", [(2.0, 0.0), (0.3, 0.2), (10.0, -5.0)])
def test_group_sup_matches_c3(lam, gamma):
    _, C3, _ = gronwall_constants(lam, gamma)
    assert group_norm_sup(lam, gamma) == pytest.approx(C3, rel=1e-5)
    assert group_norm_sup(lam, gamma) <= C3 * (1 + 1e-12)


def test_gronwall_identical_is_zero():
    q = random_periodic(np.random.default_rng(5), "sawtooth")
    assert gronwall_bound(q, q, 2.0, 0.0, 1.5) == 0.0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_gronwall_dominates_twin_gap(seed):
    rng = np.random.default_rng(seed)
    q = random_periodic(rng, str(rng.choice(["steps", "sawtooth"])))
    qm = SigmaTau(q.sigma + (FourierMode(1, float(rng.normal(0, 0.3)), 0.0, q.period),),
                  q.tau + (Constant(float(rng.normal(0, 0.3))),), q.period)
    gamma = float(rng.uniform(-3, 0))
    lam = gamma + float(rng.uniform(0.1, 10))
    t = float(rng.uniform(-2, 2))
    x0 = rng.normal(size=2)
    gap = np.hypot(*(transfer_matrix(q, lam, 0, t).matrix @ x0
                     - transfer_matrix(qm, lam, 0, t).matrix @ x0))
    assert gap <= gronwall_bound(q, qm, lam, gamma, t, U0_norm=float(np.hypot(*x0)))


def test_c_q_examples():
    assert c_q(-1, 0, 0) == 8
    assert c_q(0, 0, 0) == 4
    assert c_q(-4, 1, 1) == 24


@given(st.floats(-100, 100), st.floats(0, 100), st.floats(0, 100), st.floats(0, 10))
def test_c_q_monotone(g, s, t, d):
    base = c_q(g, s, t)
    assert c_q(math.copysign(abs(g) + d, g), s, t) >= base
    assert c_q(g, s + d, t) >= base and c_q(g, s, t + d) >= base


def test_certificate_and_params():
    c = BoundCertificate.make(1.0, 2.0, "x")
    assert c.passed and c.margin == 1.0
    assert not BoundCertificate.make(2.0, 1.0).passed
    assert BoundCertificate.make(1.0 + 1e-12, 1.0).passed
    with pytest.raises(ValueError):
        GrowthParams(1.0, 2.0, 1.0, 1.0, 1.0)
