"""Sobolev norms of sampled functions and checks of the shift, dilation and
two-scale difference inequalities.

A GridFunction stands for the piecewise-linear interpolant of its samples,
so every left-hand side below is an exact integral of a piecewise
quadratic (Simpson's rule between merged breakpoints), and first-order
norms are exact for the interpolant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .potential import bump_phi

MIN_SAMPLES = 8
PAD = 4
C0 = 4.0
C1 = 14.0 * 36.0
REL_SLACK = 1e-9


@dataclass(frozen=True)
class GridFunction:
    samples: np.ndarray
    spacing: float
    origin: float = 0.0
    periodic: bool = False

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float).copy()
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        if s.ndim != 1 or s.size < MIN_SAMPLES:
            raise ValueError(f"need at least {MIN_SAMPLES} samples")
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")

    @classmethod
    def from_function(cls, f, a: float, b: float, n: int) -> "GridFunction":
        t = np.linspace(a, b, n)
        return cls(np.asarray(f(t), dtype=float), (b - a) / (n - 1), a)

    @classmethod
    def periodic_from_function(cls, f, n: int) -> "GridFunction":
        """Samples of a 1-periodic function at k/n, k = 0..n-1."""
        t = np.arange(n) / n
        return cls(np.asarray(f(t), dtype=float), 1.0 / n, 0.0, True)

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def end(self) -> float:
        if self.periodic:
            return self.origin + self.n * self.spacing
        return self.origin + (self.n - 1) * self.spacing

    @property
    def grid(self) -> np.ndarray:
        return self.origin + self.spacing * np.arange(self.n)

    def __call__(self, t):
        x = (np.asarray(t, dtype=float) - self.origin) / self.spacing
        s = self.samples
        if self.periodic:
            x = np.mod(x, self.n)
            j = np.floor(x).astype(int) % self.n
            w = x - np.floor(x)
            out = s[j] * (1.0 - w) + s[(j + 1) % self.n] * w
        else:
            inside = (x >= 0.0) & (x <= self.n - 1)
            xc = np.clip(x, 0.0, self.n - 1)
            j = np.minimum(np.floor(xc).astype(int), self.n - 2)
            w = xc - j
            out = np.where(inside, s[j] * (1.0 - w) + s[j + 1] * w, 0.0)
        return float(out) if np.ndim(out) == 0 else out

    def knots(self, lo: float, hi: float) -> np.ndarray:
        """Grid nodes of the interpolant lying in [lo, hi]."""
        h = self.spacing
        k0 = math.ceil((lo - self.origin) / h)
        k1 = math.floor((hi - self.origin) / h)
        if not self.periodic:
            k0, k1 = max(k0, 0), min(k1, self.n - 1)
        if k1 < k0:
            return np.empty(0)
        return self.origin + h * np.arange(k0, k1 + 1)

    def w1_norm_sq(self) -> tuple[float, float]:
        """(int psi^2, int psi'^2) for the interpolant over its grid."""
        s = self.samples
        if self.periodic:
            s = np.append(s, s[0])
        a, b = s[:-1], s[1:]
        h = self.spacing
        return (float(h / 3.0 * np.sum(a * a + a * b + b * b)),
                float(np.sum((b - a) ** 2) / h))


@dataclass(frozen=True)
class InequalityReport:
    lhs: float
    rhs: float
    constant_used: float
    passed: bool
    name: str = ""
    details: dict = field(default_factory=dict)

    @classmethod
    def make(cls, lhs, rhs, constant, name, **details) -> "InequalityReport":
        lhs, rhs = float(lhs), float(rhs)
        return cls(lhs, rhs, float(constant), bool(lhs <= rhs * (1.0 + REL_SLACK)), name,
                   details)

    def to_dict(self) -> dict:
        d = {"name": self.name, "lhs": self.lhs, "rhs": self.rhs,
             "constant_used": self.constant_used, "pass": self.passed}
        d.update(self.details)
        return d


def _simpson_sq(g, pts: np.ndarray) -> float:
    """Exact integral of g^2 when g is linear between consecutive pts."""
    pts = np.unique(pts)
    if pts.size < 2:
        return 0.0
    x0, x1 = pts[:-1], pts[1:]
    m = 0.5 * (x0 + x1)
    g0, gm, g1 = g(x0), g(m), g(x1)
    return float(np.sum((x1 - x0) / 6.0 * (g0 ** 2 + 4.0 * gm ** 2 + g1 ** 2)))


def ws_norm(f: GridFunction, s: float) -> float:
    """(int (1+u^2)^s |f^(u)|^2 du)^(1/2) from the zero-padded DFT (x4)."""
    if not 0.0 <= s <= 1.0:
        raise ValueError("s must lie in [0, 1]")
    n = f.n
    if n < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    N = PAD * n
    F = np.fft.fft(f.samples, N)
    u = 2.0 * np.pi * np.fft.fftfreq(N, f.spacing)
    total = f.spacing / N * np.sum((1.0 + u * u) ** s * np.abs(F) ** 2)
    return math.sqrt(float(total))


def spectral_w1_norm(f: GridFunction) -> float:
    """sqrt(|f|^2 + |f'|^2) with f' by spectral differentiation on the padded grid."""
    N = PAD * f.n
    F = np.fft.fft(f.samples, N)
    u = 2.0 * np.pi * np.fft.fftfreq(N, f.spacing)
    fp = np.fft.ifft(1j * u * F)
    vals = np.fft.ifft(F)
    h = f.spacing
    return math.sqrt(h * float(np.sum(np.abs(vals) ** 2) + np.sum(np.abs(fp) ** 2)))


def reflect_extend(f: GridFunction) -> GridFunction:
    """psi on [2a-b, 2b-a]: f on [a, b], tapered reflections beside it."""
    if f.periodic:
        raise ValueError("reflect_extend needs a function on an interval")
    a, b = f.origin, f.end
    if b - a < 1.0:
        raise ValueError("interval length b - a must be at least 1")
    s = f.samples
    n = f.n
    k = np.arange(1, n)
    taper = (n - 1 - k) / (n - 1)        # (t + b - 2a)/(b - a) at t = a - k h
    left = (s[k] * taper)[::-1]
    right = s[n - 1 - k] * taper           # (2b - a - t)/(b - a) at t = b + k h
    return GridFunction(np.concatenate([left, s, right]), f.spacing, 2 * a - b)


def _w1_sq(f: GridFunction) -> float:
    l2, d2 = f.w1_norm_sq()
    return l2 + d2


def check_shift_bound(f: GridFunction, c: float, eps: float) -> InequalityReport:
    """int_a^c |f(t+eps) - f(t)|^2 <= 7 eps^2 |f|^2_{W^1_2(a,b)}."""
    a, b = f.origin, f.end
    if f.periodic:
        raise ValueError("check_shift_bound needs a function on an interval")
    if b - a < 1.0:
        raise ValueError("interval length b - a must be at least 1")
    if not a < c < b:
        raise ValueError("c must lie in (a, b)")
    if not 0.0 < eps < b - c:
        raise ValueError("eps must lie in (0, b - c)")
    pts = np.concatenate([[a, c], f.knots(a, c), f.knots(a + eps, c + eps) - eps])
    pts = pts[(pts >= a) & (pts <= c)]
    lhs = _simpson_sq(lambda t: f(t + eps) - f(t), pts)
    norm = _w1_sq(f)
    return InequalityReport.make(lhs, 7.0 * eps ** 2 * norm, 7.0, "shift",
                                 eps=eps, w1_norm_sq=norm)


def check_dilation_bound(f: GridFunction, a: float, b: float) -> InequalityReport:
    """int_1^b |f(t) - f(a t)|^2 <= 7 a b^2 (a-1)^2 |f|^2_{W^1_2(R)}."""
    if not a > 1.0:
        raise ValueError("a must exceed 1")
    if not b >= math.e:
        raise ValueError("b must be at least e")
    if f.periodic or f.samples[0] != 0.0 or f.samples[-1] != 0.0:
        raise ValueError("f must be compactly supported: end samples must vanish")
    pts = np.concatenate([[1.0, b], f.knots(1.0, b), f.knots(a, a * b) / a])
    pts = pts[(pts >= 1.0) & (pts <= b)]
    lhs = _simpson_sq(lambda t: f(t) - f(a * t), pts)
    norm = _w1_sq(f)
    const = 7.0 * a * b * b * (a - 1.0) ** 2
    return InequalityReport.make(lhs, const * norm, 7.0, "dilation",
                                 a=a, b=b, w1_norm_sq=norm)


def albe_constant(s: float) -> float:
    """C_s = C0^(1-s) C1^s with C0 = 4 and C1 = 14*36."""
    return C0 ** (1.0 - s) * C1 ** s


def unif_ws_norm(f: GridFunction, s: float, oversample: int = 8) -> float:
    """sup_n |f phi_n|_{W^s_2} for 1-periodic f (every n gives the same value)."""
    if not f.periodic or abs(f.n * f.spacing - 1.0) > 1e-12:
        raise ValueError("need a 1-periodic GridFunction")
    m = oversample * f.n
    t = np.linspace(-1.0, 1.0, 2 * m + 1)
    g = GridFunction(f(t) * bump_phi(t), 1.0 / m, -1.0)
    return ws_norm(g, s)


def check_two_scale_bound(f: GridFunction, alpha: float, beta: float, theta: float,
                          T: float, s: float) -> InequalityReport:
    """int_{-T}^{2T} |f(alpha t + theta) - f(beta t + theta)|^2 against the
    constant assembled from the proof: C_s (10 beta T)^2 T^{2s} alpha^{-1}
    (beta - alpha)^{2s} |f|^2_{W^s_{2,unif}}."""
    if not f.periodic:
        raise ValueError("f must be a 1-periodic GridFunction")
    if not 0.0 < alpha <= beta <= 2.0 * alpha:
        raise ValueError("need 0 < alpha <= beta <= 2 alpha")
    if not 0.0 <= s <= 1.0:
        raise ValueError("s must lie in [0, 1]")
    if not T >= max(1.0 / alpha, abs(theta)):
        raise ValueError("need T >= max(1/alpha, |theta|)")
    th = theta % 1.0    # f is 1-periodic
    lo, hi = -T, 2.0 * T
    pts = np.concatenate([[lo, hi],
                          (f.knots(alpha * lo + th, alpha * hi + th) - th) / alpha,
                          (f.knots(beta * lo + th, beta * hi + th) - th) / beta])
    pts = pts[(pts >= lo) & (pts <= hi)]
    lhs = _simpson_sq(lambda t: f(alpha * t + th) - f(beta * t + th), pts)
    cs = albe_constant(s)
    growth = (10.0 * beta * T) ** 2
    norm = unif_ws_norm(f, s) ** 2
    rhs = cs * growth * T ** (2 * s) / alpha * (beta - alpha) ** (2 * s) * norm
    return InequalityReport.make(lhs, rhs, cs * growth, "two-scale", C_s=cs,
                                 periodization=growth, unif_norm_sq=norm, s=s)
