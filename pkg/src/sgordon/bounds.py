"""A priori estimates for solutions of the quasi-derivative system.

All bounds are returned as plain floats; ``BoundCertificate`` pairs a
measured quantity with its bound.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .potential import (NormKind, PieceFunction, SigmaTau, as_pieces, breakpoints_of,
                        difference_norm, evaluate, norm_on_interval, singular_points_of)
from .quadrature import integrate


@dataclass(frozen=True)
class BoundCertificate:
    lhs: float
    rhs: float
    margin: float
    passed: bool
    context: str = ""
    tolerance: float = 0.0

    @classmethod
    def make(cls, lhs: float, rhs: float, context: str = "",
             rel_tol: float = 1e-9) -> "BoundCertificate":
        lhs, rhs = float(lhs), float(rhs)
        tol = rel_tol * abs(rhs)
        margin = rhs - lhs
        return cls(lhs, rhs, margin, bool(margin >= -tol), context, tol)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GrowthParams:
    lam: float
    gamma: float
    C1: float
    C3: float
    C2: float

    def __post_init__(self):
        if not self.lam > self.gamma:
            raise ValueError("need lambda > gamma")
        if self.C1 < 1.0:
            raise ValueError("C1 must be at least 1")


def _exp(x: float) -> float:
    """exp that returns inf instead of raising on overflow."""
    return math.exp(x) if x < 709.0 else math.inf


def offdiag_norm(a: float, b: float) -> float:
    """Spectral norm of [[a, 0], [b, -a]]."""
    a, b = abs(a), abs(b)
    return 0.5 * b + math.hypot(0.5 * b, a)


def _as_integrand(f, a: float, b: float):
    """(vectorized callable, breakpoints, singular points) for a number, a
    callable or a sum of pieces."""
    if isinstance(f, (int, float)):
        v = float(f)
        return (lambda t: np.full(np.shape(t), v)), (), ()
    if isinstance(f, PieceFunction) or (isinstance(f, (tuple, list)) and
                                         all(isinstance(p, PieceFunction) for p in f)):
        pieces = as_pieces(f)
        return ((lambda t: evaluate(pieces, t)), breakpoints_of(pieces, a, b),
                singular_points_of(pieces, a, b))
    if callable(f):
        return (lambda t: np.asarray(f(t), dtype=float) * np.ones(np.shape(t))), (), ()
    raise TypeError(f"cannot integrate object of type {type(f).__name__}")


def growth_bound_generic(a, b, c: float, t: float, X0_norm: float = 1.0,
                         tol: float = 1e-10, breakpoints=()) -> float:
    """c exp(1/2 int sqrt(4a^2 + (c + b/c)^2)) |X(0)| for X' = [[a, 1], [b, -a]] X.

    ``a`` and ``b`` may be numbers, vectorized callables or sums of pieces.
    """
    if c < 1.0:
        raise ValueError("c must be at least 1")
    lo, hi = min(0.0, t), max(0.0, t)
    if lo == hi:
        return c * X0_norm
    fa, ba, sa = _as_integrand(a, lo, hi)
    fb, bb, sb = _as_integrand(b, lo, hi)
    bps = list(ba) + list(bb) + list(breakpoints)
    integral = integrate(lambda s: np.sqrt(4.0 * fa(s) ** 2 + (c + fb(s) / c) ** 2),
                         lo, hi, tol, bps, list(sa) + list(sb))
    return c * _exp(0.5 * integral) * X0_norm


def growth_constants(lam: float) -> tuple[float, str]:
    """C1 for the three lambda ranges of the solution bound."""
    if lam >= 0:
        return math.sqrt(lam + 0.25) + 0.5, "nonnegative"
    if lam > -1:
        return 1.0, "between"
    return math.sqrt(-lam), "below"


def _growth_rate(lam: float) -> tuple[float, float]:
    """(C1, constant part of the integrand)."""
    C1, case = growth_constants(lam)
    if case == "nonnegative":
        return C1, 2.0 - 1.0 / C1
    if case == "between":
        return C1, 1.0 - lam
    return C1, 2.0 * math.sqrt(-lam)


def growth_bound_lambda(st: SigmaTau, lam: float, t: float, X0_norm: float = 1.0,
                        tol: float = 1e-10) -> float:
    """C1 exp(1/2 int (k + sigma^2 + |tau|)) |X(0)| with the case-wise C1, k."""
    C1, k = _growth_rate(lam)
    lo, hi = min(0.0, t), max(0.0, t)
    if lo == hi:
        return C1 * X0_norm
    s2 = norm_on_interval(st.sigma, lo, hi, NormKind.L2SQ, tol)
    ta = norm_on_interval(st.tau, lo, hi, NormKind.L1, tol)
    return C1 * _exp(0.5 * (k * (hi - lo) + s2 + ta)) * X0_norm


def unif_growth_bound(sigma_unif_sq: float, tau_unif: float, lam: float, t: float,
                      X0_norm: float = 1.0) -> float:
    """C1 exp((|t|+1)(1 + sqrt((-lam)_+) + |sigma|^2/2 + |tau|/2)) |X(0)|."""
    if sigma_unif_sq < 0 or tau_unif < 0:
        raise ValueError("norms must be nonnegative")
    C1, _ = growth_constants(lam)
    rate = 1.0 + math.sqrt(max(-lam, 0.0)) + 0.5 * sigma_unif_sq + 0.5 * tau_unif
    return C1 * _exp((abs(t) + 1.0) * rate) * X0_norm


def gronwall_constants(lam: float, gamma: float) -> tuple[float, float, float]:
    """(omega, C3, C2): C3 = sup_t |exp(tA)| for A = [[0, 1], [gamma - lam, 0]]
    and C2 = C3 e^{C3}."""
    if not lam > gamma:
        raise ValueError("need lambda > gamma (the group exp(tA) is unbounded otherwise)")
    omega = math.sqrt(lam - gamma)
    C3 = max(omega, 1.0 / omega)
    return omega, C3, C3 * math.exp(C3)


def growth_params(lam: float, gamma: float) -> GrowthParams:
    C1, _ = growth_constants(lam)
    _, C3, C2 = gronwall_constants(lam, gamma)
    return GrowthParams(lam, gamma, C1, C3, C2)


def group_norm_sup(lam: float, gamma: float, samples: int = 2048) -> float:
    """max over one period of the sampled spectral norm of exp(tA)."""
    omega = math.sqrt(lam - gamma)
    t = np.linspace(0.0, 2 * math.pi / omega, samples)
    c, s = np.cos(omega * t), np.sin(omega * t)
    mats = np.stack([np.stack([c, s / omega], -1), np.stack([-omega * s, c], -1)], -2)
    return float(np.max(np.linalg.norm(mats, ord=2, axis=(1, 2))))


@dataclass(frozen=True)
class GronwallTerms:
    bdiff: float       # bound on int |B - B_m|
    bnorm: float       # bound on int |B|
    utilde: float      # bound on sup |U_m| over the interval
    C3: float
    bound: float


def gronwall_terms(st: SigmaTau, st_m: SigmaTau, lam: float, gamma: float, t: float,
                   Utilde_norm_bound: float | None = None, U0_norm: float = 1.0,
                   tol: float = 1e-10) -> GronwallTerms:
    _, C3, _ = gronwall_constants(lam, gamma)
    lo, hi = min(0.0, t), max(0.0, t)
    if lo == hi:
        return GronwallTerms(0.0, 0.0, U0_norm, C3, 0.0)
    w = hi - lo
    d_tau = difference_norm(st.tau, st_m.tau, lo, hi, NormKind.L1, tol)
    d_sig = difference_norm(st.sigma, st_m.sigma, lo, hi, NormKind.L2SQ, tol)
    s2 = norm_on_interval(st.sigma, lo, hi, NormKind.L2SQ, tol)
    s2m = norm_on_interval(st_m.sigma, lo, hi, NormKind.L2SQ, tol)
    bdiff = d_tau + math.sqrt(3.0 * (s2 + s2m + w) * d_sig)
    bnorm = (1.0 + abs(gamma)) * w + s2 + norm_on_interval(st.tau, lo, hi, NormKind.L1, tol)
    if Utilde_norm_bound is None:
        Utilde_norm_bound = growth_bound_lambda(st_m, lam, t, U0_norm, tol)
    bound = C3 * Utilde_norm_bound * bdiff * _exp(C3 * bnorm)
    return GronwallTerms(bdiff, bnorm, Utilde_norm_bound, C3, bound)


def gronwall_bound(st: SigmaTau, st_m: SigmaTau, lam: float, gamma: float, t: float,
                   Utilde_norm_bound: float | None = None, U0_norm: float = 1.0,
                   tol: float = 1e-10) -> float:
    """Bound on |U(t) - U_m(t)| for solutions of the two systems sharing U(0).

    Uses C3 * sup|U_m| * int|B - B_m| * exp(C3 int|B|), the Gronwall form of
    the variation-of-constants inequality |V| <= C3 int |B||V| + C3 int
    |B - B_m||U_m|. ``Utilde_norm_bound`` bounds |U_m| on the interval; by
    default it is the solution bound for st_m.
    """
    return gronwall_terms(st, st_m, lam, gamma, t, Utilde_norm_bound, U0_norm, tol).bound


def c_q(gamma: float, sigma_unif_sq: float, tau_unif: float) -> float:
    """4 + 2|gamma|^(1/2) + 2|gamma| + 4|sigma|^2_{2,unif} + 4|tau|_{1,unif}."""
    if sigma_unif_sq < 0 or tau_unif < 0:
        raise ValueError("norms must be nonnegative")
    g = abs(gamma)
    return 4.0 + 2.0 * math.sqrt(g) + 2.0 * g + 4.0 * sigma_unif_sq + 4.0 * tau_unif
