"""Evidence against eigenvalues: decay profiles, angle scans of the
three-periods bound and twin propagation against periodic approximants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import gronwall_bound
from .errors import DeskScaleError
from .floquet import _period, band_scan
from .gordon import continued_fraction, periodic_approximant
from .potential import NormKind, QuasiperiodicPotential, SigmaTau, unif_norm
from .propagator import StateVector, propagate, transfer_chain, transfer_matrix

ANGLES = 360
THRESHOLD = 0.5 - 1e-9
DECAY_RATIO = 1e-2
PROPAGATION_BUDGET = 5000      # largest T_m propagated by approximant_proximity
VERDICT_OK = "no-eigenvalue-evidence"
VERDICT_FAIL = "three-periods-bound-violated"


def decay_profile(st: SigmaTau, lam: float, U0, T_max: float, n_samples: int = 64,
                  tol: float = 1e-10) -> list[tuple[float, float]]:
    """(t, |u|^2 + |u^[1]|^2) at 2 n_samples + 1 points spread over [-T_max, T_max]."""
    if not T_max > 0:
        raise ValueError("T_max must be positive")
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    x0 = StateVector.coerce(U0).as_array()
    ts = T_max * np.arange(n_samples + 1) / n_samples
    fwd = transfer_chain(st, lam, list(ts), tol)
    bwd = transfer_chain(st, lam, list(-ts), tol)
    out = []
    for t, M in zip(-ts[:0:-1], bwd[:0:-1]):
        out.append((float(t), float(np.sum((M @ x0) ** 2))))
    for t, M in zip(ts, fwd):
        out.append((float(t), float(np.sum((M @ x0) ** 2))))
    return out


def trends_to_zero(profile, ratio: float = DECAY_RATIO) -> bool:
    """True when the outer quarter on each side stays below ratio * value at 0."""
    ts = np.array([p[0] for p in profile])
    vs = np.array([p[1] for p in profile])
    v0 = vs[np.argmin(np.abs(ts))]
    tmax = np.max(np.abs(ts))
    right = vs[ts >= 0.75 * tmax]
    left = vs[ts <= -0.75 * tmax]
    if v0 == 0 or not right.size or not left.size:
        return False
    return bool(right.max() < ratio * v0 and left.max() < ratio * v0)


def _three_max(back: np.ndarray, M: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """max{|U(-T)|, |U(T)|, |U(2T)|} for U0 = (cos theta, sin theta)."""
    X = np.stack([np.cos(theta), np.sin(theta)])
    M2 = M @ M
    return np.max(np.stack([np.linalg.norm(back @ X, axis=0),
                            np.linalg.norm(M @ X, axis=0),
                            np.linalg.norm(M2 @ X, axis=0)]), axis=0)


@dataclass(frozen=True)
class ScanRow:
    lam: float
    min_max: float
    angle: float
    decays: bool
    verdict: str


@dataclass(frozen=True)
class ScanReport:
    rows: list = field(default_factory=list)
    angles: int = ANGLES
    threshold: float = THRESHOLD

    @property
    def passed(self) -> bool:
        return all(r.verdict == VERDICT_OK for r in self.rows)

    def to_dict(self) -> dict:
        return {"angles": self.angles, "threshold": self.threshold, "pass": self.passed,
                "rows": [{"lambda": r.lam, "min_max": r.min_max, "angle": r.angle,
                          "decays": r.decays, "verdict": r.verdict} for r in self.rows]}


def _scan_one(st: SigmaTau, lam: float, angles: int, tol: float, threshold: float,
              profile_periods: int, n_samples: int) -> ScanRow:
    T = _period(st)
    back = transfer_matrix(st, lam, 0.0, -T, tol).matrix
    M = transfer_matrix(st, lam, 0.0, T, tol).matrix
    # U0 and -U0 give the same norms, so half a turn suffices
    theta = np.pi * np.arange(angles) / angles
    vals = _three_max(back, M, theta)
    i = int(np.argmin(vals))
    step = np.pi / angles
    fine = theta[i] + np.linspace(-step, step, 65)
    fvals = _three_max(back, M, fine)
    j = int(np.argmin(fvals))
    best, ang = (float(fvals[j]), float(fine[j])) if fvals[j] < vals[i] else \
        (float(vals[i]), float(theta[i]))
    prof = decay_profile(st, lam, (math.cos(ang), math.sin(ang)), profile_periods * T,
                         n_samples, tol)
    verdict = VERDICT_OK if best >= threshold else VERDICT_FAIL
    return ScanRow(float(lam), best, ang % math.pi, trends_to_zero(prof), verdict)


def eigen_scan(st: SigmaTau, lambda_grid, angles: int = ANGLES, tol: float = 1e-10,
               threshold: float = THRESHOLD, profile_periods: int = 4,
               n_samples: int = 16, executor=None) -> ScanReport:
    """For each lambda, the minimum over initial angles of the three-periods
    maximum, the minimizing angle and whether that solution decays both ways.

    U0 = (cos a, sin a) is normalized as |U(0)| = 1.
    """
    _period(st)
    if angles < 1:
        raise ValueError("angles must be positive")
    grid = [float(x) for x in lambda_grid]
    if not all(math.isfinite(x) for x in grid):
        raise ValueError("lambda grid must be finite")

    def one(lam):
        return _scan_one(st, lam, angles, tol, threshold, profile_periods, n_samples)

    rows = list(executor.map(one, grid)) if executor is not None else [one(x) for x in grid]
    return ScanReport(rows, angles, threshold)


def default_gamma(st: SigmaTau, points: int = 161, tol: float = 1e-8) -> float:
    """Heuristic lower-bound surrogate: bottom of the spectrum found on a
    coarse lambda grid, minus 1."""
    s = unif_norm(st.sigma, NormKind.L2SQ) if st.sigma else 0.0
    t = unif_norm(st.tau, NormKind.L1) if st.tau else 0.0
    lim = 10.0 * (1.0 + s + t) ** 2
    for bp in band_scan(st, np.linspace(-lim, lim, points), tol):
        if bp.in_band:
            return bp.lam - 1.0
    raise ValueError("no band found on the coarse grid; supply gamma explicitly")


def default_gamma_qp(qp: QuasiperiodicPotential, tol: float = 1e-8) -> float:
    """default_gamma of the first periodic approximant."""
    conv = continued_fraction(qp.alpha, 1)[0]
    return default_gamma(periodic_approximant(qp, conv), tol=tol)


@dataclass(frozen=True)
class ProximityRecord:
    m: int
    T: int
    times: tuple
    gaps: tuple
    bounds: tuple
    passed: bool

    def to_dict(self) -> dict:
        return {"m": self.m, "T": self.T, "pass": self.passed,
                "rows": [{"t": t, "gap": g, "bound": b}
                         for t, g, b in zip(self.times, self.gaps, self.bounds)]}


def approximant_proximity(qp: QuasiperiodicPotential, m: int, lam: float, gamma: float,
                          U0, tol: float = 1e-10,
                          budget: int = PROPAGATION_BUDGET) -> ProximityRecord:
    """|U(t) - U_m(t)| at t = -T_m, T_m, 2T_m for solutions of q and of its
    m-th approximant through the same U0, against the Gronwall bound."""
    if m < 1:
        raise ValueError("m must be at least 1")
    if not lam > gamma:
        raise ValueError("need lambda > gamma")
    conv = continued_fraction(qp.alpha, m)[m - 1]
    if conv.T > budget:
        raise DeskScaleError(
            f"T_m = {conv.T} for m = {m} exceeds the propagation budget {budget}")
    st = qp.to_sigma_tau()
    st_m = periodic_approximant(qp, conv)
    U0 = StateVector.coerce(U0)
    x0 = U0.as_array()
    T = float(conv.T)
    times = (-T, T, 2.0 * T)
    gaps, bounds = [], []
    for t in times:
        U = propagate(st, lam, 0.0, t, x0, tol).as_array()
        Um = propagate(st_m, lam, 0.0, t, x0, tol).as_array()
        gaps.append(float(np.hypot(*(U - Um))))
        bounds.append(gronwall_bound(st, st_m, lam, gamma, t, U0_norm=U0.norm, tol=tol))
    passed = all(g <= b for g, b in zip(gaps, bounds))
    return ProximityRecord(conv.m, conv.T, times, tuple(gaps), tuple(bounds), passed)
