"""Propagation of U = (u, u^[1]) through the first-order system

    U' = [[sigma, 1], [-sigma^2 + tau - lambda, -sigma]] U.

The generator is trace-free, so every step is the exponential of a
trace-free matrix and has unit determinant up to rounding. Constant pieces
use exact exponentials, smooth stretches use the fourth-order Gauss-Magnus
scheme (vectorized over steps and segments), and power singularities are
approached on a dyadic mesh closed off by one first-order Magnus step taken
in a gauge that removes sigma from the diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PropagationError
from .potential import SigmaTau, as_pieces, evaluate, evaluate_local, singular_points_of
from .quadrature import integrate

MAX_SEGMENT = 1.0
MAX_STEPS = 1 << 15
# step-doubling gaps below this that stop shrinking are treated as rounding noise
_ROUNDOFF = 16 * np.finfo(float).eps
_GAUSS = (0.5 - math.sqrt(3.0) / 6.0, 0.5 + math.sqrt(3.0) / 6.0)
_COMM = math.sqrt(3.0) / 12.0


@dataclass(frozen=True)
class StateVector:
    u: float
    u1: float

    @property
    def norm(self) -> float:
        return math.hypot(self.u, self.u1)

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.u1], dtype=float)

    @classmethod
    def coerce(cls, v) -> "StateVector":
        if isinstance(v, StateVector):
            return v
        u, u1 = v
        return cls(float(u), float(u1))


@dataclass(frozen=True)
class TransferMatrix:
    """M with U(t1) = M U(t0) at spectral parameter lam."""

    matrix: np.ndarray
    t0: float
    t1: float
    lam: float

    @property
    def det(self) -> float:
        m = self.matrix
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])

    @property
    def trace(self) -> float:
        return float(self.matrix[0, 0] + self.matrix[1, 1])

    def apply(self, U) -> StateVector:
        x = self.matrix @ StateVector.coerce(U).as_array()
        return StateVector(float(x[0]), float(x[1]))

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        """self after other: (b -> c) @ (a -> b) = (a -> c)."""
        return TransferMatrix(self.matrix @ other.matrix, other.t0, self.t1, self.lam)


def coefficient_matrix(sigma_val: float, tau_val: float, lam: float) -> np.ndarray:
    return np.array([[sigma_val, 1.0], [-sigma_val ** 2 + tau_val - lam, -sigma_val]])


def _expm_tracefree(p, q, r):
    """exp of [[p, q], [r, -p]] for arrays of entries; returns (..., 2, 2)."""
    p, q, r = np.broadcast_arrays(np.asarray(p, float), np.asarray(q, float),
                                  np.asarray(r, float))
    d = p * p + q * r  # the matrix squares to d * I
    c = np.empty(d.shape)
    s = np.empty(d.shape)
    small = np.abs(d) < 1e-3
    ds = d[small]
    c[small] = 1 + ds / 2 * (1 + ds / 12 * (1 + ds / 30 * (1 + ds / 56)))
    s[small] = 1 + ds / 6 * (1 + ds / 20 * (1 + ds / 42 * (1 + ds / 72)))
    pos = (~small) & (d > 0)
    k = np.sqrt(d[pos])
    c[pos] = np.cosh(k)
    s[pos] = np.sinh(k) / k
    neg = (~small) & (d < 0)
    k = np.sqrt(-d[neg])
    c[neg] = np.cos(k)
    s[neg] = np.sin(k) / k
    out = np.empty(d.shape + (2, 2))
    out[..., 0, 0] = c + s * p
    out[..., 0, 1] = s * q
    out[..., 1, 0] = s * r
    out[..., 1, 1] = c - s * p
    return out


def step_exact_constant(sigma0: float, tau0: float, lam: float, h: float) -> TransferMatrix:
    """exp(h G) for constant coefficients (h may be negative for backward steps)."""
    m = _expm_tracefree(h * sigma0, h, h * (-sigma0 ** 2 + tau0 - lam))
    return TransferMatrix(m, 0.0, h, lam)


def _chain(mats: np.ndarray) -> np.ndarray:
    """Ordered product mats[-1] @ ... @ mats[0] along axis -3 (batched)."""
    while mats.shape[-3] > 1:
        n = mats.shape[-3]
        if n % 2:
            eye = np.broadcast_to(np.eye(2), mats.shape[:-3] + (1, 2, 2))
            mats = np.concatenate([mats, eye], axis=-3)
        mats = mats[..., 1::2, :, :] @ mats[..., 0::2, :, :]
    return mats[..., 0, :, :]


def _magnus(st: SigmaTau, lam: float, base: float, a: np.ndarray, b: np.ndarray,
            n: int) -> np.ndarray:
    """Fourth-order Magnus with n equal steps on each [base + a_i, base + b_i].

    Nodes are handled as offsets from base, which keeps them exact next to a
    singular point at base.
    """
    h = (b - a) / n
    j = np.arange(n)
    x1 = a[:, None] + (j[None, :] + _GAUSS[0]) * h[:, None]
    x2 = a[:, None] + (j[None, :] + _GAUSS[1]) * h[:, None]
    s1, s2 = evaluate_local(st.sigma, base, x1), evaluate_local(st.sigma, base, x2)
    r1 = -s1 * s1 + evaluate_local(st.tau, base, x1) - lam
    r2 = -s2 * s2 + evaluate_local(st.tau, base, x2) - lam
    hh = h[:, None]
    # [A2, A1] for A = [[s, 1], [r, -s]]
    c11 = r1 - r2
    c12 = 2.0 * (s2 - s1)
    c21 = 2.0 * (r2 * s1 - s2 * r1)
    k = _COMM * hh * hh
    p = 0.5 * hh * (s1 + s2) + k * c11
    q = hh + k * c12
    r = 0.5 * hh * (r1 + r2) + k * c21
    return _chain(_expm_tracefree(p, q, r))


def _smooth_group(st: SigmaTau, lam: float, base: float, a: np.ndarray, b: np.ndarray,
                  tol: np.ndarray) -> np.ndarray:
    """Adaptive Magnus on regular segments sharing one base point; step
    doubling until the n-step and 2n-step results agree to tol relative to
    the matrix size."""
    out = np.empty((a.size, 2, 2))
    scale = 1.0 + math.sqrt(abs(lam))
    n = max(2, int(math.ceil(4 * scale * float(np.max(np.abs(b - a))))))
    n = 1 << (n - 1).bit_length()
    pending = np.arange(a.size)
    coarse = _magnus(st, lam, base, a, b, n)
    prev = np.full(a.size, np.inf)
    while pending.size:
        n *= 2
        if n > MAX_STEPS:
            raise PropagationError(f"step budget exhausted at tolerance {float(np.min(tol)):g}")
        fine = _magnus(st, lam, base, a[pending], b[pending], n)
        err = np.max(np.abs(fine - coarse), axis=(1, 2))
        size = np.maximum(1.0, np.max(np.abs(fine), axis=(1, 2)))
        # a fourth-order step shrinks the gap 16-fold per doubling; when it
        # stops shrinking at a tiny level, rounding has taken over
        stalled = (err > 0.25 * prev) & (err <= _ROUNDOFF * n * size)
        ok = (err <= tol[pending] * size) | stalled
        out[pending[ok]] = fine[ok]
        prev = err[~ok]
        pending = pending[~ok]
        coarse = fine[~ok]
    return out


def _smooth_segments(st: SigmaTau, lam: float, segs: list, tols: list) -> np.ndarray:
    """Magnus for every (base, a_offset, b_offset) segment, grouped by base."""
    out = np.empty((len(segs), 2, 2))
    if not segs:
        return out
    arr = np.array(segs, dtype=float)
    tol = np.array(tols, dtype=float)
    for base in np.unique(arr[:, 0]):
        idx = np.nonzero(arr[:, 0] == base)[0]
        out[idx] = _smooth_group(st, lam, float(base), arr[idx, 1], arr[idx, 2], tol[idx])
    return out


def _terminal_parts(st: SigmaTau, lam: float, c: float, e: float, qtol: float):
    """First-order Magnus on [c, c+e] in the gauge U = diag(e^S, e^-S) V with
    S(t) = int_c^t sigma, where V' = [[0, a], [b, 0]] V, a = e^{-2S} and
    b = (-sigma^2 + tau - lam) e^{2S}. Returns the step and an estimate of
    the neglected higher Magnus terms. Everything is evaluated in the offset
    x = t - c so that c may be any float."""
    sig, tau = st.sigma, st.tau
    w = abs(e)
    sgn = 1.0 if e > 0 else -1.0
    inner = singular_points_of(sig + tau, c + min(e, 0.0), c + max(e, 0.0)) - c
    # offsets of other singular points are never inside a terminal step
    spts = [float(v) for v in inner if v != 0.0] + [0.0]

    def S(x):
        x = np.asarray(x, float)
        out = np.zeros(x.shape)
        for p in as_pieces(sig):
            out = out + p.integral_local(c, x)
        return out

    def b(x):
        r = evaluate_local(tau, c, x) - lam
        if sig:
            r = r - evaluate_local(sig, c, x) ** 2
        return r * np.exp(2.0 * S(x))

    def quad(f):
        return integrate(f, min(e, 0.0), max(e, 0.0), qtol, (), spts)

    if sig:
        s_end = float(S(e))
        s_abs = quad(lambda x: np.abs(evaluate_local(sig, c, x)))
        big_a = sgn * quad(lambda x: np.exp(-2.0 * S(x)))
    else:
        s_end = s_abs = 0.0
        big_a = e
    big_b = sgn * quad(b)
    b_abs = quad(lambda x: np.abs(b(x)))
    drift = math.expm1(2.0 * s_abs)
    est = 0.5 * w * b_abs * (1.0 + 2.0 * drift) + w * (1.0 + drift) * b_abs ** 2
    step = _expm_tracefree(0.0, big_a, big_b)
    gauge = np.diag([math.exp(s_end), math.exp(-s_end)])
    return gauge @ step, est


def _terminal(st: SigmaTau, lam: float, c: float, e: float, tol: float) -> np.ndarray:
    return _terminal_parts(st, lam, c, e, tol * 1e-2)[0]


def _terminal_size(st: SigmaTau, lam: float, c: float, e: float) -> float:
    return _terminal_parts(st, lam, c, e, 1e-3 * abs(e) + 1e-300)[1]


def _graded_plan(st: SigmaTau, lam: float, c: float, far: float, tol: float):
    """Sub-intervals from the singular point c out to far: a terminal width
    e and the dyadic shells [c + e*2^j, c + e*2^(j+1)]."""
    length = far - c
    k = 6
    while True:
        e = length * 2.0 ** (-k)
        if _terminal_size(st, lam, c, e) <= 0.05 * tol or k > 1000:
            break
        k += 4
    shells = [(length * 2.0 ** (-(j + 1)), length * 2.0 ** (-j)) for j in range(k)]
    shells.reverse()  # offsets from c, innermost first
    return e, shells


def _segment_plan(st: SigmaTau, t0: float, t1: float):
    lo, hi = min(t0, t1), max(t0, t1)
    sing = set(float(x) for x in st.singular_points(lo, hi))
    cuts = set(float(x) for x in st.breakpoints(lo, hi)) | sing | {lo, hi}
    # singular points just outside [lo, hi]: cut at distances d 2^j from them
    # so every segment is about as long as its distance to the singularity
    span = hi - lo
    for s in st.singular_points(lo - span, hi + span):
        s = float(s)
        if lo <= s <= hi:
            continue
        x, u = (lo, 1.0) if s < lo else (hi, -1.0)
        d = abs(x - s)
        p = s + u * 2.0 * d
        while lo < p < hi:
            cuts.add(p)
            d *= 2.0
            p = s + u * 2.0 * d
    pts = np.array(sorted(cuts))
    refined = [pts[0]]
    for x0, x1 in zip(pts[:-1], pts[1:]):
        if x1 <= x0:
            continue
        m = int(math.ceil((x1 - x0) / MAX_SEGMENT))
        refined.extend(np.linspace(x0, x1, m + 1)[1:])
    pts = np.array(refined)
    if t1 < t0:
        pts = pts[::-1]
    return pts, sing


def transfer_matrix(st: SigmaTau, lam: float, t0: float, t1: float,
                    tol: float = 1e-10) -> TransferMatrix:
    """Transfer matrix from t0 to t1 (t1 < t0 propagates backward)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    t0, t1 = float(t0), float(t1)
    if t0 == t1:
        return TransferMatrix(np.eye(2), t0, t1, lam)
    pts, sing = _segment_plan(st, t0, t1)
    pieces_const = st.is_piecewise_constant
    # each entry: ("mat", index into smooth list) or ("const", matrix)
    order: list = []
    segs: list[tuple[float, float, float]] = []
    tols: list[float] = []
    seg_tol = tol / max(1, len(pts) - 1)

    def add(base, a, b, t):
        order.append(len(segs))
        segs.append((base, a, b))
        tols.append(t)

    for x0, x1 in zip(pts[:-1], pts[1:]):
        if pieces_const:
            m = float(0.5 * (x0 + x1))
            s0 = evaluate(st.sigma, m)
            order.append(step_exact_constant(s0, evaluate(st.tau, m), lam, x1 - x0).matrix)
            continue
        s0, s1 = x0 in sing, x1 in sing
        if not (s0 or s1):
            add(0.0, x0, x1, seg_tol)
            continue
        halves = [(x0, x1)]
        if s0 and s1:
            mid = 0.5 * (x0 + x1)
            halves = [(x0, mid), (mid, x1)]
        half_tol = seg_tol / len(halves)
        for y0, y1 in halves:
            if y0 in sing:
                e, shells = _graded_plan(st, lam, y0, y1, 0.5 * half_tol)
                shell_tol = 0.125 * half_tol
                order.append(_terminal(st, lam, y0, e, half_tol))
                for u0, u1 in shells:
                    add(y0, u0, u1, shell_tol)
            else:
                e, shells = _graded_plan(st, lam, y1, y0, 0.5 * half_tol)
                shell_tol = 0.125 * half_tol
                for u0, u1 in reversed(shells):
                    add(y1, u1, u0, shell_tol)
                order.append(np.linalg.inv(_terminal(st, lam, y1, e, half_tol)))
    smooth = _smooth_segments(st, lam, segs, tols)
    mats = np.stack([smooth[o] if isinstance(o, int) else o for o in order])
    return TransferMatrix(_chain(mats), t0, t1, lam)


def propagate(st: SigmaTau, lam: float, t0: float, t1: float, U0,
              tol: float = 1e-10) -> StateVector:
    """U(t1) for the solution with U(t0) = U0."""
    return transfer_matrix(st, lam, t0, t1, tol).apply(U0)


def transfer_chain(st: SigmaTau, lam: float, times, tol: float = 1e-10) -> list[np.ndarray]:
    """Cumulative transfer matrices from times[0] to each entry of times."""
    out = [np.eye(2)]
    for a, b in zip(times[:-1], times[1:]):
        out.append(transfer_matrix(st, lam, a, b, tol).matrix @ out[-1])
    return out


def classical_derivative(st: SigmaTau, t: float, U, side: str = "right") -> float:
    """u'(t) = u^[1] + sigma u, with the one-sided value of sigma at t."""
    U = StateVector.coerce(U)
    if not st.sigma:
        return U.u1
    x = math.nextafter(t, math.inf if side == "right" else -math.inf)
    return U.u1 + evaluate(st.sigma, x) * U.u
