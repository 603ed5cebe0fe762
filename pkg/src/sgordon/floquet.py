"""Monodromy, discriminant sweeps and the three-periods lower bound."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .potential import SigmaTau
from .propagator import StateVector, TransferMatrix, transfer_matrix

EDGE_TOL = 1e-10


@dataclass(frozen=True)
class BandPoint:
    lam: float
    discriminant: float
    in_band: bool


@dataclass(frozen=True)
class ThreePeriods:
    """Norms of U at -T, T, 2T for the solution through U(0) = U0."""

    norm0: float
    norm_minus: float
    norm_plus: float
    norm_double: float
    ratio: float
    passed: bool


def _period(st: SigmaTau) -> float:
    if st.period is None:
        raise ValueError("potential has no period; set 'period' on the SigmaTau")
    return float(st.period)


def monodromy(st: SigmaTau, lam: float, tol: float = 1e-10) -> TransferMatrix:
    """Transfer matrix over one period [0, T]."""
    return transfer_matrix(st, lam, 0.0, _period(st), tol)


def discriminant(st: SigmaTau, lam: float, tol: float = 1e-10) -> float:
    return monodromy(st, lam, tol).trace


def band_scan(st: SigmaTau, lambda_grid, tol: float = 1e-10, edge_tol: float = EDGE_TOL,
              executor=None) -> list[BandPoint]:
    """One BandPoint per grid value, in grid order."""
    grid = [float(x) for x in lambda_grid]
    if not all(np.isfinite(grid)):
        raise ValueError("lambda grid must be finite")
    _period(st)
    if executor is None:
        traces = [discriminant(st, lam, tol) for lam in grid]
    else:
        traces = list(executor.map(lambda lam: discriminant(st, lam, tol), grid))
    return [BandPoint(lam, d, bool(abs(d) <= 2.0 + edge_tol)) for lam, d in zip(grid, traces)]


def cayley_hamilton_residual(M: TransferMatrix) -> float:
    """max-entry size of M^2 - tr(M) M + det(M) I."""
    m = M.matrix
    r = m @ m - M.trace * m + M.det * np.eye(2)
    return float(np.max(np.abs(r)))


def three_periods_check(st: SigmaTau, lam: float, U0, tol: float = 1e-10) -> ThreePeriods:
    """max{|U(-T)|, |U(T)|, |U(2T)|} / |U(0)|; the bound is 1/2."""
    U0 = StateVector.coerce(U0)
    n0 = U0.norm
    if not n0 > 0:
        raise ValueError("initial vector must be nonzero")
    T = _period(st)
    back = transfer_matrix(st, lam, 0.0, -T, tol)
    M = transfer_matrix(st, lam, 0.0, T, tol)
    x0 = U0.as_array()
    x1 = M.matrix @ x0
    x2 = M.matrix @ x1
    nm = float(np.hypot(*(back.matrix @ x0)))
    n1 = float(np.hypot(*x1))
    n2 = float(np.hypot(*x2))
    ratio = max(nm, n1, n2) / n0
    return ThreePeriods(n0, nm, n1, n2, ratio, bool(ratio >= 0.5 - tol))
