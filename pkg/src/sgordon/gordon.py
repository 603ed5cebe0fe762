"""Continued-fraction convergents, periodic approximants of quasiperiodic
potentials and the desk-scale Gordon criterion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .bounds import c_q
from .errors import DeskScaleError, PrecisionError
from .potential import (Constant, NormKind, QuasiperiodicPotential, SigmaTau, as_pieces,
                        breakpoints_of, difference_norm, shift, singular_points_of,
                        unif_norm)
from .quadrature import integrate

# largest approximant period the propagator and quadrature are asked to handle
MAX_PERIOD = 10 ** 7
_BLOCK = 1 << 14


@dataclass(frozen=True)
class Convergent:
    m: int
    R: int
    T: int

    def __post_init__(self):
        if self.T < 1:
            raise ValueError("denominator must be positive")
        if math.gcd(self.R, self.T) != 1:
            raise ValueError("convergent must be in lowest terms")

    @property
    def value(self) -> Fraction:
        return Fraction(self.R, self.T)

    def __float__(self) -> float:
        return self.R / self.T


def _to_fraction(x) -> Fraction:
    if isinstance(x, mpmath.mpf):
        man, exp = x.man_exp
        return Fraction(int(man)) * (Fraction(2) ** int(exp))
    return Fraction(x)


def _exact_quotients(x: Fraction, n: int) -> list[int]:
    """Partial quotients a_1, a_2, ... of x in (0, 1) (a_0 = 0 omitted)."""
    out = []
    x = x - math.floor(x)
    while x != 0 and len(out) < n:
        x = 1 / x
        a = math.floor(x)
        out.append(int(a))
        x -= a
    return out


def _bounds(alpha) -> tuple[Fraction, Fraction] | None:
    """Exact rational bracket of an inexact alpha, or None when exact."""
    if isinstance(alpha, (Fraction, int)):
        return None
    if isinstance(alpha, mpmath.mpf):
        prec = mpmath.mp.prec
    elif isinstance(alpha, float):
        prec = 53
    else:
        raise TypeError(f"unsupported alpha type {type(alpha).__name__}")
    x = _to_fraction(alpha)
    rad = abs(x) * Fraction(1, 2 ** (prec - 2))
    return x - rad, x + rad


def _safe_count(alpha, n: int) -> int:
    """Number of leading quotients shared by every number in the rounding
    interval of alpha (at most n)."""
    lo, hi = (_exact_quotients(b, n + 1) for b in _bounds(alpha))
    k = 0
    for a, b in zip(lo, hi):
        if a != b:
            break
        k += 1
    if k == min(len(lo), len(hi)) and k <= n:
        k = max(k - 1, 0)     # a terminating endpoint leaves the last quotient ambiguous
    return min(k, n)


def partial_quotients(alpha, n: int) -> list[int]:
    """Partial quotients a_1..a_n of alpha in (0, 1).

    Exact for Fraction input; for floats and mpmath numbers only quotients
    shared by the whole rounding interval are accepted, and PrecisionError is
    raised (naming the largest safe n) if fewer than n are determined.
    """
    if _bounds(alpha) is None:
        return _exact_quotients(Fraction(alpha), n)
    k = _safe_count(alpha, n)
    if k < n:
        raise PrecisionError(
            f"working precision determines only {k} partial quotients of alpha; "
            f"use m <= {k} or raise the precision")
    return _exact_quotients(_to_fraction(alpha), n)


def alpha_from_quotients(terms) -> Fraction:
    """[0; a_1, ..., a_n] as an exact fraction."""
    x = Fraction(0)
    for a in reversed([int(t) for t in terms]):
        if a < 1:
            raise ValueError("partial quotients must be positive integers")
        x = 1 / (a + x)
    return x


def continued_fraction(alpha, m_max: int) -> list[Convergent]:
    """The first m_max convergents R/T of alpha in (0, 1), skipping 0/1.

    Rational input terminates with alpha itself.
    """
    if not 0 < float(alpha) < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    quotients = partial_quotients(alpha, m_max)
    out = []
    p0, q0, p1, q1 = 1, 0, 0, 1     # p_{-1}/q_{-1}, p_0/q_0 with a_0 = 0
    for k, a in enumerate(quotients, start=1):
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append(Convergent(k, p1, q1))
    return out


def liouville_truncation(base: int, n: int) -> Fraction:
    """sum_{k=1}^{n} base^(-k!) as an exact fraction."""
    if int(base) != base or base < 2:
        raise ValueError("base must be an integer >= 2")
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    return sum((Fraction(1, int(base) ** math.factorial(k)) for k in range(1, n + 1)),
               Fraction(0))


def render(x, digits: int = 40) -> str:
    """Decimal rendering of an exact or high-precision number."""
    if isinstance(x, Fraction):
        with mpmath.workdps(digits + 5):
            return mpmath.nstr(mpmath.mpf(x.numerator) / x.denominator, digits)
    with mpmath.workdps(digits + 5):
        return mpmath.nstr(mpmath.mpf(x), digits)


@dataclass(frozen=True)
class PeriodicApproximant(SigmaTau):
    convergent: Convergent | None = None


def periodic_approximant(qp: QuasiperiodicPotential, conv: Convergent,
                         max_period: int = MAX_PERIOD) -> PeriodicApproximant:
    """sigma_m = sigma1 + sigma2~(alpha_m t + theta), tau_m = tau1 + c with
    alpha_m = R/T; the result is T-periodic."""
    if conv.T > max_period:
        raise DeskScaleError(
            f"approximant period T_m = {conv.T} exceeds the desk-scale limit {max_period}")
    s2, c = qp.folded()
    am = conv.R / conv.T
    sigma = qp.sigma1 + tuple(p.rescaled(am, qp.theta) for p in s2)
    tau = qp.tau1 + ((Constant(c),) if c != 0.0 else ())
    return PeriodicApproximant(sigma, tau, float(conv.T), conv)


def _dalpha(alpha, conv: Convergent) -> float:
    """alpha - R/T without cancellation."""
    if isinstance(alpha, (Fraction, int)):
        return float(Fraction(alpha) - conv.value)
    with mpmath.workprec(max(mpmath.mp.prec, 2 * conv.T.bit_length() + 64)):
        return float(mpmath.mpf(alpha) - mpmath.mpf(conv.R) / conv.T)


def approximation_error(qp: QuasiperiodicPotential, approximant: PeriodicApproximant,
                        T_m: float | None = None, tol: float = 1e-10) -> tuple[float, float]:
    """(|sigma - sigma_m|_{L2[-T, 2T]}, |tau - tau_m|_{L1[-T, 2T]}).

    ``tol`` is relative for err_sigma (the dilation difference is evaluated
    in closed form where the piece allows it, so tiny errors keep their
    relative accuracy) and absolute for err_tau. Over long windows the
    relative accuracy is capped near 1e3 * eps * T by phase rounding.
    """
    conv = approximant.convergent
    if conv is None:
        raise ValueError("approximant carries no convergent")
    T = float(conv.T if T_m is None else T_m)
    lo, hi = -T, 2.0 * T
    qst = qp.to_sigma_tau()
    err_tau = difference_norm(qst.tau, approximant.tau, lo, hi, NormKind.L1, tol) \
        if (qst.tau or approximant.tau) else 0.0
    s2, _ = qp.folded()
    if not s2:
        return 0.0, err_tau
    a = qp.alpha_float
    am = conv.R / conv.T
    da = _dalpha(qp.alpha, conv)
    th = qp.theta
    rescaled = tuple(p.rescaled(a, th) for p in s2) + tuple(p.rescaled(am, th) for p in s2)
    sing = singular_points_of(rescaled, lo, hi)

    def diff(t):
        out = np.zeros(np.shape(t))
        for p in s2:
            out = out + p.dilation_difference(t, a, am, th, da)
        return out ** 2

    # unit cells resolve the oscillation; blocks bound the memory footprint
    cuts = np.unique(np.concatenate([np.arange(math.ceil(lo), hi, 1.0),
                                     breakpoints_of(rescaled, lo, hi)]))
    edges = np.concatenate([[lo], cuts[::_BLOCK][1:], [hi]])

    def blocks(target):
        total = 0.0
        for x0, x1 in zip(edges[:-1], edges[1:]):
            inner = cuts[(cuts > x0) & (cuts < x1)]
            sg = sing[(sing >= x0) & (sing <= x1)]
            total += integrate(diff, x0, x1, target * (x1 - x0) / (hi - lo), inner, sg)
        return total

    rough = blocks(1e300)
    # phases of size ~T carry absolute rounding ~eps*T, which caps the relative accuracy
    rel = max(tol, 1e3 * np.finfo(float).eps * (hi - lo))
    sq = blocks(max(rel * rough, 1e-300)) if rough > 0 else 0.0
    return math.sqrt(max(sq, 0.0)), err_tau


def gordon_exponent(q, T_list, tol: float = 1e-10) -> list[tuple[float, float]]:
    """(T, (1/T) log D(T)) with D(T) = |sigma - sigma(.+T)|_{L2[-T,T]} +
    |tau - tau(.+T)|_{L1[-T,T]}; D(T) = 0 gives -inf."""
    st = q.to_sigma_tau() if isinstance(q, QuasiperiodicPotential) else q
    Ts = [float(T) for T in T_list]
    if any(T <= 0 for T in Ts) or any(b <= a for a, b in zip(Ts, Ts[1:])):
        raise ValueError("T_list must be positive and increasing")
    out = []
    for T in Ts:
        d_s = difference_norm(st.sigma, shift(st.sigma, T), -T, T, NormKind.L2SQ, tol)
        d_t = difference_norm(st.tau, shift(st.tau, T), -T, T, NormKind.L1, tol)
        D = math.sqrt(max(d_s, 0.0)) + d_t
        out.append((T, math.log(D) / T if D > 0 else -math.inf))
    return out


def qp_unif_norms(qp: QuasiperiodicPotential, tol: float = 1e-10) -> tuple[float, float]:
    """Triangle-inequality bounds on |sigma|^2_{2,unif} and |tau|_{1,unif}.

    A dilation by alpha < 1 scales a squared unit-window norm by at most 1/alpha.
    """
    s2, c = qp.folded()
    a = qp.alpha_float
    n1 = math.sqrt(unif_norm(qp.sigma1, NormKind.L2SQ, tol=tol)) if qp.sigma1 else 0.0
    n2 = math.sqrt(unif_norm(s2, NormKind.L2SQ, tol=tol) / a) if s2 else 0.0
    t1 = unif_norm(qp.tau1, NormKind.L1, tol=tol) if qp.tau1 else 0.0
    return (n1 + n2) ** 2, t1 + abs(c)


@dataclass(frozen=True)
class GordonRow:
    m: int
    R: int
    T: int
    abs_dalpha: float
    err_sigma: float
    err_tau: float
    log_weighted: float           # C T + log(err_sigma + err_tau); -inf if exact
    log_lio: float                # log(|alpha - R/T| m^T), measured

    @property
    def weighted(self) -> float:
        """exp(C T)(err_sigma + err_tau); inf when it overflows."""
        if self.log_weighted == -math.inf:
            return 0.0
        return math.exp(self.log_weighted) if self.log_weighted < 709.0 else math.inf


@dataclass(frozen=True)
class GordonReport:
    C: float
    alpha: str
    rows: list = field(default_factory=list)
    decreasing: bool = True
    source: str = ""              # how alpha was supplied (e.g. the truncation used)
    slope: float = math.nan       # min over m of (1/T_m) log(err_sigma + err_tau)

    def to_dict(self) -> dict:
        return {"C": self.C, "alpha": self.alpha, "source": self.source,
                "decreasing": self.decreasing,
                "slope": self.slope,
                "rows": [{"m": r.m, "R": str(r.R), "T": str(r.T), "abs_dalpha": r.abs_dalpha,
                          "err_sigma": r.err_sigma, "err_tau": r.err_tau,
                          "weighted": r.weighted, "log_weighted": r.log_weighted,
                          "log_lio": r.log_lio} for r in self.rows]}


def gordon_certificate(qp: QuasiperiodicPotential, m_max: int, C: float | None = None,
                       gamma: float = 0.0, tol: float = 1e-10,
                       max_period: int = MAX_PERIOD, skip: int = 0) -> GordonReport:
    """Weighted approximation errors exp(C T_m)(err_sigma + err_tau) for the
    convergents m = skip+1 .. skip+m_max. The default C is C_q for the
    given gamma."""
    if C is None:
        s2n, t1n = qp_unif_norms(qp, tol)
        C = c_q(gamma, s2n, t1n)
    if not C > 0:
        raise ValueError("C must be positive")
    convs = continued_fraction(qp.alpha, skip + m_max)[skip:]
    rows = []
    for conv in convs:
        if conv.T > max_period:
            raise DeskScaleError(
                f"convergent m={conv.m} has T_m = {conv.T} beyond the desk-scale limit "
                f"{max_period}; lower m_max")
        approx = periodic_approximant(qp, conv, max_period)
        es, et = approximation_error(qp, approx, tol=tol)
        da = abs(_dalpha(qp.alpha, conv))
        total = es + et
        logw = C * conv.T + math.log(total) if total > 0 else -math.inf
        loglio = math.log(da) + conv.T * math.log(conv.m) if da > 0 else -math.inf
        rows.append(GordonRow(conv.m, conv.R, conv.T, da, es, et, logw, loglio))
    lw = [r.log_weighted for r in rows]
    decreasing = all(b < a for a, b in zip(lw, lw[1:]))
    rates = [math.log(r.err_sigma + r.err_tau) / r.T if r.err_sigma + r.err_tau > 0
             else -math.inf for r in rows]
    slope = min(rates) if rates else math.nan
    return GordonReport(float(C), render(qp.alpha), rows, decreasing, qp.label, slope)
