"""Distributional potentials q = sigma' + tau represented by explicit
(sigma, tau) pairs built from closed-form pieces.

Every piece is an immutable dataclass that evaluates vectorized over numpy
arrays, knows its non-smooth points, and can be shifted, dilated and scaled
exactly. Sums of pieces are plain tuples; keeping them symbolic lets norms of
differences such as ``sigma - sigma_m`` cancel identical terms exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from fractions import Fraction
from typing import Any, Iterable, Sequence, Union

import numpy as np

from .errors import NonIntegrableError, SingularPointError
from .quadrature import integrate

TWO_PI = 2.0 * math.pi
MAX_LATTICE_POINTS = 5_000_000


class NormKind(str, Enum):
    L1 = "L1"
    L2SQ = "L2sq"

    @property
    def power(self) -> int:
        return 1 if self is NormKind.L1 else 2


def _lattice(offset: float, period: float, a: float, b: float) -> np.ndarray:
    """Points offset + k*period lying in [a, b]."""
    k0 = math.ceil((a - offset) / period)
    k1 = math.floor((b - offset) / period)
    if k1 < k0:
        return np.empty(0)
    if k1 - k0 > MAX_LATTICE_POINTS:
        raise ValueError("too many breakpoints in the requested interval")
    pts = offset + period * np.arange(k0, k1 + 1, dtype=float)
    return pts[(pts >= a) & (pts <= b)]


def _frac(x):
    return x - np.floor(x)


# ---------------------------------------------------------------------------
# pieces


class PieceFunction:
    """Base class for closed-form real function pieces."""

    kind: str = "piece"

    def __call__(self, t):
        x = np.asarray(t, dtype=float)
        v = self._eval(x)
        return float(v) if x.ndim == 0 else v

    def _eval(self, t: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    @property
    def period(self) -> float | None:
        return None

    @property
    def is_piecewise_constant(self) -> bool:
        return False

    @property
    def singular_exponent(self) -> float:
        return 0.0

    def breakpoints(self, a: float, b: float) -> np.ndarray:
        return np.empty(0)

    def singular_points(self, a: float, b: float) -> np.ndarray:
        return np.empty(0)

    def shifted(self, T: float) -> "PieceFunction":
        raise NotImplementedError

    def rescaled(self, alpha: float, theta: float) -> "PieceFunction":
        """The piece t -> f(alpha*t + theta), alpha > 0."""
        raise NotImplementedError

    def scaled(self, k: float) -> "PieceFunction":
        raise NotImplementedError

    def integral(self, a, b):
        """Exact integral over [a, b]; vectorized in both limits."""
        raise NotImplementedError

    def _eval_local(self, c: float, x):
        """Value at c + x; singular pieces resolve small offsets x exactly."""
        return self._eval(c + x)

    def integral_local(self, c: float, x):
        """Integral over [c, c + x] in offset form."""
        x = np.asarray(x, float)
        return self.integral(np.full(x.shape, c), c + x)

    def mean_value(self) -> float:
        """Average over one period."""
        per = self.period
        if per is None:
            raise ValueError(f"{self.kind} piece is not periodic")
        return float(self.integral(0.0, per)) / per

    def dilation_difference(self, t, alpha: float, alpha_m: float, theta: float,
                            dalpha: float):
        """f(alpha*t + theta) - f(alpha_m*t + theta).

        ``dalpha`` is alpha - alpha_m supplied separately so closed forms can
        avoid cancellation when the two dilations nearly agree.
        """
        return self.rescaled(alpha, theta)(t) - self.rescaled(alpha_m, theta)(t)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"type": self.kind}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = [x.to_dict() if isinstance(x, PieceFunction) else x for x in v]
            out[f.name] = v
        return out


@dataclass(frozen=True)
class Constant(PieceFunction):
    value: float
    kind = "constant"

    def _eval(self, t):
        return np.full(t.shape, float(self.value))

    @property
    def is_piecewise_constant(self):
        return True

    def shifted(self, T):
        return self

    def rescaled(self, alpha, theta):
        return self

    def scaled(self, k):
        return Constant(self.value * k)

    def integral(self, a, b):
        return self.value * (np.asarray(b, float) - np.asarray(a, float))

    def dilation_difference(self, t, alpha, alpha_m, theta, dalpha):
        return np.zeros(np.shape(t))

    def mean_value(self):
        return float(self.value)


@dataclass(frozen=True)
class Affine(PieceFunction):
    slope: float
    intercept: float = 0.0
    kind = "affine"

    def _eval(self, t):
        return self.slope * t + self.intercept

    @property
    def is_piecewise_constant(self):
        return self.slope == 0.0

    def shifted(self, T):
        return Affine(self.slope, self.intercept + self.slope * T)

    def rescaled(self, alpha, theta):
        return Affine(self.slope * alpha, self.slope * theta + self.intercept)

    def scaled(self, k):
        return Affine(self.slope * k, self.intercept * k)

    def integral(self, a, b):
        a = np.asarray(a, float)
        b = np.asarray(b, float)
        return 0.5 * self.slope * (b * b - a * a) + self.intercept * (b - a)


@dataclass(frozen=True)
class Sawtooth(PieceFunction):
    """amplitude * frac((t + phase) / period); jumps down at t = k*period - phase."""

    amplitude: float
    period_: float = 1.0
    phase: float = 0.0
    kind = "sawtooth"

    def __post_init__(self):
        if not self.period_ > 0:
            raise ValueError("sawtooth period must be positive")

    @property
    def period(self):
        return self.period_

    def _eval(self, t):
        return self.amplitude * _frac((t + self.phase) / self.period_)

    def breakpoints(self, a, b):
        return _lattice(-self.phase, self.period_, a, b)

    def shifted(self, T):
        return replace(self, phase=(self.phase + T) % self.period_)

    def rescaled(self, alpha, theta):
        p = self.period_ / alpha
        return Sawtooth(self.amplitude, p, ((theta + self.phase) / alpha) % p)

    def scaled(self, k):
        return replace(self, amplitude=self.amplitude * k)

    def integral(self, a, b):
        def prim(y):
            x = (np.asarray(y, float) + self.phase) / self.period_
            fl = np.floor(x)
            return 0.5 * fl + 0.5 * (x - fl) ** 2

        return self.amplitude * self.period_ * (prim(b) - prim(a))

    def mean_value(self):
        return 0.5 * self.amplitude

    def to_dict(self):
        return {"type": self.kind, "amplitude": self.amplitude,
                "period": self.period_, "phase": self.phase}


@dataclass(frozen=True)
class FourierMode(PieceFunction):
    """a*cos(2*pi*n*(t+phase)/period) + b*sin(2*pi*n*(t+phase)/period)."""

    index: int
    cos_coeff: float = 0.0
    sin_coeff: float = 0.0
    period_: float = 1.0
    phase: float = 0.0
    kind = "fourier"

    def __post_init__(self):
        if int(self.index) != self.index or self.index < 1:
            raise ValueError("Fourier index must be a positive integer")
        if not self.period_ > 0:
            raise ValueError("Fourier period must be positive")

    @property
    def period(self):
        return self.period_

    def _arg(self, t):
        return TWO_PI * self.index * (t + self.phase) / self.period_

    def _eval(self, t):
        x = self._arg(t)
        return self.cos_coeff * np.cos(x) + self.sin_coeff * np.sin(x)

    def shifted(self, T):
        return replace(self, phase=(self.phase + T) % self.period_)

    def rescaled(self, alpha, theta):
        p = self.period_ / alpha
        return replace(self, period_=p, phase=((theta + self.phase) / alpha) % p)

    def scaled(self, k):
        return replace(self, cos_coeff=self.cos_coeff * k, sin_coeff=self.sin_coeff * k)

    def integral(self, a, b):
        w = TWO_PI * self.index / self.period_

        def prim(y):
            x = self._arg(np.asarray(y, float))
            return (self.cos_coeff * np.sin(x) - self.sin_coeff * np.cos(x)) / w

        return prim(b) - prim(a)

    def mean_value(self):
        return 0.0

    def dilation_difference(self, t, alpha, alpha_m, theta, dalpha):
        t = np.asarray(t, float)
        w = TWO_PI * self.index / self.period_
        x1 = w * (alpha * t + theta + self.phase)
        x2 = w * (alpha_m * t + theta + self.phase)
        mean = 0.5 * (x1 + x2)
        s = np.sin(0.5 * w * dalpha * t)
        return 2.0 * s * (self.sin_coeff * np.cos(mean) - self.cos_coeff * np.sin(mean))

    def to_dict(self):
        return {"type": self.kind, "index": self.index, "cos": self.cos_coeff,
                "sin": self.sin_coeff, "period": self.period_, "phase": self.phase}


@dataclass(frozen=True)
class PowerSingularity(PieceFunction):
    """coefficient * |t - center|^(-exponent), optionally periodized."""

    center: float
    exponent: float
    coefficient: float = 1.0
    period_: float | None = None
    kind = "power"

    def __post_init__(self):
        if not self.exponent > 0:
            raise ValueError("power-singularity exponent must be positive")
        if self.period_ is not None and not self.period_ > 0:
            raise ValueError("power-singularity period must be positive")

    @property
    def period(self):
        return self.period_

    @property
    def singular_exponent(self):
        return self.exponent

    def _offset(self, t):
        x = t - self.center
        if self.period_ is not None:
            half = 0.5 * self.period_
            x = (x + half) % self.period_ - half
        return x

    def _eval(self, t):
        x = self._offset(t)
        if np.any(x == 0.0):
            raise SingularPointError(
                f"evaluation at the singular point {self.center:g}")
        return self.coefficient * np.abs(x) ** (-self.exponent)

    def breakpoints(self, a, b):
        if self.period_ is None:
            return np.empty(0)
        # the periodized distance has a kink halfway between centers
        return _lattice(self.center + 0.5 * self.period_, self.period_, a, b)

    def _near(self, c):
        d = float(self._offset(c))
        return d if abs(d) <= 1e-9 * (1.0 + abs(c)) else None

    def _eval_local(self, c, x):
        d = self._near(c)
        if d is None:
            return self._eval(c + x)
        y = d + np.asarray(x, float)
        if self.period_ is not None:
            half = 0.5 * self.period_
            y = np.where(np.abs(y) > half, (y + half) % self.period_ - half, y)
        if np.any(y == 0.0):
            raise SingularPointError(
                f"evaluation at the singular point {self.center:g}")
        return self.coefficient * np.abs(y) ** (-self.exponent)

    def integral_local(self, c, x):
        d = self._near(c)
        if d is None:
            return super().integral_local(c, x)
        return self.coefficient * (self._prim_rel(d + np.asarray(x, float))
                                   - self._prim_rel(d))

    def _prim_rel(self, x):
        """Antiderivative in x = t - center."""
        if self.exponent >= 1.0:
            raise NonIntegrableError("|t|^-gamma with gamma >= 1 is not integrable")
        g1 = 1.0 - self.exponent

        def prim_free(y):
            return np.sign(y) * np.abs(y) ** g1 / g1

        if self.period_ is None:
            return prim_free(x)
        p, half = self.period_, 0.5 * self.period_
        x = np.asarray(x, float)
        k = np.floor((x + half) / p)
        inside = np.abs(x) <= half
        k = np.where(inside, 0.0, k)
        r = np.where(inside, x, x + half - k * p - half)
        return k * 2.0 * prim_free(half) + prim_free(r)

    def singular_points(self, a, b):
        if self.period_ is None:
            return np.array([self.center]) if a <= self.center <= b else np.empty(0)
        return _lattice(self.center, self.period_, a, b)

    def shifted(self, T):
        c = self.center - T
        if self.period_ is not None:
            c %= self.period_
        return replace(self, center=c)

    def rescaled(self, alpha, theta):
        c = (self.center - theta) / alpha
        p = None if self.period_ is None else self.period_ / alpha
        if p is not None:
            c %= p
        return PowerSingularity(c, self.exponent,
                                self.coefficient * alpha ** (-self.exponent), p)

    def scaled(self, k):
        return replace(self, coefficient=self.coefficient * k)

    def integral(self, a, b):
        return self.coefficient * (self._prim_rel(np.asarray(b, float) - self.center)
                                   - self._prim_rel(np.asarray(a, float) - self.center))

    def to_dict(self):
        return {"type": self.kind, "center": self.center, "exponent": self.exponent,
                "coefficient": self.coefficient, "period": self.period_}


@dataclass(frozen=True)
class StepTrain(PieceFunction):
    """Periodic step function: values[i] on [breakpoints[i], breakpoints[i+1]),
    with the last value wrapping around to the first breakpoint."""

    breakpoints_: tuple
    values: tuple
    period_: float = 1.0
    phase: float = 0.0
    kind = "step_train"

    def __post_init__(self):
        bp = tuple(float(x) for x in self.breakpoints_)
        vals = tuple(float(x) for x in self.values)
        object.__setattr__(self, "breakpoints_", bp)
        object.__setattr__(self, "values", vals)
        if not self.period_ > 0:
            raise ValueError("step-train period must be positive")
        if len(bp) == 0 or len(bp) != len(vals):
            raise ValueError("step train needs matching, nonempty breakpoints and values")
        if any(y <= x for x, y in zip(bp, bp[1:])):
            raise ValueError("step-train breakpoints must be strictly increasing")
        if bp[0] < 0 or bp[-1] >= self.period_:
            raise ValueError("step-train breakpoints must lie in [0, period)")

    @property
    def period(self):
        return self.period_

    @property
    def is_piecewise_constant(self):
        return True

    def _eval(self, t):
        x = (t + self.phase) % self.period_
        idx = np.searchsorted(np.asarray(self.breakpoints_), x, side="right") - 1
        return np.asarray(self.values)[idx]  # idx == -1 wraps to the last value

    def breakpoints(self, a, b):
        pts = [_lattice(x - self.phase, self.period_, a, b) for x in self.breakpoints_]
        return np.concatenate(pts) if pts else np.empty(0)

    def shifted(self, T):
        return replace(self, phase=(self.phase + T) % self.period_)

    def rescaled(self, alpha, theta):
        p = self.period_ / alpha
        return StepTrain(tuple(x / alpha for x in self.breakpoints_), self.values,
                         p, ((theta + self.phase) / alpha) % p)

    def scaled(self, k):
        return replace(self, values=tuple(v * k for v in self.values))

    def integral(self, a, b):
        bp = np.asarray(self.breakpoints_)
        vals = np.asarray(self.values)
        p = self.period_
        # value on [0, bp[0]) is the wrapped last value
        knots = np.concatenate([[0.0], bp, [p]])
        seg_vals = np.concatenate([[vals[-1]], vals])
        cum = np.concatenate([[0.0], np.cumsum(seg_vals * np.diff(knots))])
        per_period = cum[-1]

        def prim(y):
            y = np.asarray(y, float) + self.phase
            k = np.floor(y / p)
            x = y - k * p
            i = np.clip(np.searchsorted(knots, x, side="right") - 1, 0, len(seg_vals) - 1)
            return k * per_period + cum[i] + seg_vals[i] * (x - knots[i])

        return prim(b) - prim(a)

    def to_dict(self):
        return {"type": self.kind, "breakpoints": list(self.breakpoints_),
                "values": list(self.values), "period": self.period_, "phase": self.phase}


@dataclass(frozen=True)
class GridSampled(PieceFunction):
    """Piecewise-linear interpolant of uniform samples."""

    samples: tuple
    spacing: float
    origin: float = 0.0
    periodic: bool = False
    kind = "grid"

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(float(x) for x in self.samples))
        if not self.spacing > 0:
            raise ValueError("grid spacing must be positive")
        if len(self.samples) < 2:
            raise ValueError("grid needs at least two samples")

    @property
    def period(self):
        return len(self.samples) * self.spacing if self.periodic else None

    def _eval(self, t):
        s = np.asarray(self.samples)
        n = len(s)
        x = (t - self.origin) / self.spacing
        if self.periodic:
            x = x % n
        elif np.any((x < -1e-12) | (x > n - 1 + 1e-12)):
            raise ValueError("evaluation outside the sampled domain")
        j = np.clip(np.floor(x).astype(int), 0, n - 1 if self.periodic else n - 2)
        w = x - j
        return s[j] * (1.0 - w) + s[(j + 1) % n] * w

    def breakpoints(self, a, b):
        pts = _lattice(self.origin, self.spacing, a, b)
        if not self.periodic:
            end = self.origin + (len(self.samples) - 1) * self.spacing
            pts = pts[(pts >= self.origin) & (pts <= end)]
        return pts

    def shifted(self, T):
        o = self.origin - T
        if self.periodic:
            o %= self.period
        return replace(self, origin=o)

    def rescaled(self, alpha, theta):
        g = replace(self, spacing=self.spacing / alpha, origin=(self.origin - theta) / alpha)
        if self.periodic:
            g = replace(g, origin=g.origin % g.period)
        return g

    def scaled(self, k):
        return replace(self, samples=tuple(v * k for v in self.samples))

    def integral(self, a, b):
        s = np.asarray(self.samples)
        n = len(s)
        h = self.spacing
        ext = np.append(s, s[0]) if self.periodic else s
        cum = np.concatenate([[0.0], np.cumsum(0.5 * h * (ext[1:] + ext[:-1]))])
        m = len(ext) - 1

        def prim(y):
            x = (np.asarray(y, float) - self.origin) / h
            k = np.floor(x / n) if self.periodic else np.zeros_like(x)
            x = x - k * n
            j = np.clip(np.floor(x).astype(int), 0, m - 1)
            w = x - j
            part = h * (ext[j] * w + 0.5 * (ext[j + 1] - ext[j]) * w * w)
            return k * cum[-1] + cum[j] + part

        return prim(b) - prim(a)

    def to_dict(self):
        return {"type": self.kind, "samples": list(self.samples), "spacing": self.spacing,
                "origin": self.origin, "periodic": self.periodic}


@dataclass(frozen=True)
class Primitive(PieceFunction):
    """Periodic primitive of a zero-mean combination of pieces:

        scale * J((dilation*t + phase) mod period),  J(x) = int_0^x (base - mean).
    """

    base: tuple
    mean: float
    period_: float = 1.0
    scale: float = 1.0
    dilation: float = 1.0
    phase: float = 0.0
    kind = "primitive"

    @property
    def period(self):
        return self.period_ / self.dilation

    def _j(self, x):
        out = -self.mean * x
        for p in self.base:
            out = out + p.integral(0.0, x)
        return out

    def _eval(self, t):
        x = (self.dilation * t + self.phase) % self.period_
        return self.scale * self._j(x)

    def breakpoints(self, a, b):
        inner = [np.asarray(p.breakpoints(0.0, self.period_)) for p in self.base]
        inner += [np.asarray(p.singular_points(0.0, self.period_)) for p in self.base]
        xs = np.unique(np.concatenate(inner)) if inner else np.empty(0)
        per = self.period
        pts = [_lattice((x - self.phase) / self.dilation, per, a, b) for x in xs]
        return np.concatenate(pts) if pts else np.empty(0)

    def shifted(self, T):
        return replace(self, phase=(self.phase + self.dilation * T) % self.period_)

    def rescaled(self, alpha, theta):
        return replace(self, dilation=self.dilation * alpha,
                       phase=(self.dilation * theta + self.phase) % self.period_)

    def scaled(self, k):
        return replace(self, scale=self.scale * k)

    def integral(self, a, b):
        a_arr, b_arr = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float))
        out = np.array([integrate(self, x, y, 1e-12, self.breakpoints(min(x, y), max(x, y)))
                        for x, y in zip(a_arr.ravel(), b_arr.ravel())])
        return out.reshape(a_arr.shape) if a_arr.ndim else float(out[0])


PIECE_TYPES = {cls.kind: cls for cls in
               (Constant, Affine, Sawtooth, FourierMode, PowerSingularity, StepTrain,
                GridSampled)}

_FIELD_ALIASES = {
    "sawtooth": {"amplitude": "amplitude", "period": "period_", "phase": "phase"},
    "fourier": {"index": "index", "cos": "cos_coeff", "sin": "sin_coeff",
                "period": "period_", "phase": "phase"},
    "power": {"center": "center", "exponent": "exponent", "coefficient": "coefficient",
              "period": "period_"},
    "step_train": {"breakpoints": "breakpoints_", "values": "values",
                   "period": "period_", "phase": "phase"},
    "grid": {"samples": "samples", "spacing": "spacing", "origin": "origin",
             "periodic": "periodic"},
    "constant": {"value": "value"},
    "affine": {"slope": "slope", "intercept": "intercept"},
}


def piece_from_dict(d: dict[str, Any]) -> PieceFunction:
    """Inverse of ``PieceFunction.to_dict``; unknown keys are rejected."""
    d = dict(d)
    kind = d.pop("type", None)
    if kind not in _FIELD_ALIASES:
        raise ValueError(f"unknown piece type {kind!r}; expected one of "
                         f"{sorted(_FIELD_ALIASES)}")
    names = _FIELD_ALIASES[kind]
    unknown = set(d) - set(names)
    if unknown:
        raise ValueError(f"unknown field(s) {sorted(unknown)} for piece type {kind!r}")
    kwargs = {names[k]: v for k, v in d.items()}
    try:
        return PIECE_TYPES[kind](**kwargs)
    except TypeError as exc:
        raise ValueError(f"bad fields for piece type {kind!r}: {exc}") from None


# ---------------------------------------------------------------------------
# sums of pieces

PieceSum = Union[PieceFunction, Sequence[PieceFunction]]


def as_pieces(f: PieceSum | None) -> tuple:
    if f is None:
        return ()
    if isinstance(f, PieceFunction):
        return (f,)
    return tuple(f)


def evaluate(f: PieceSum, t):
    """Pointwise value of a piece or a sum of pieces."""
    x = np.asarray(t, dtype=float)
    out = np.zeros(x.shape)
    for p in as_pieces(f):
        out = out + p._eval(x)
    return float(out) if x.ndim == 0 else out


def evaluate_local(f: PieceSum, c: float, x):
    """Value at c + x, keeping full precision in small offsets from a
    singular point c."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    for p in as_pieces(f):
        out = out + p._eval_local(c, x)
    return float(out) if x.ndim == 0 else out


def breakpoints_of(f: PieceSum, a: float, b: float) -> np.ndarray:
    pts = [np.asarray(p.breakpoints(a, b)) for p in as_pieces(f)]
    return np.unique(np.concatenate(pts)) if pts else np.empty(0)


def singular_points_of(f: PieceSum, a: float, b: float) -> np.ndarray:
    pts = [np.asarray(p.singular_points(a, b)) for p in as_pieces(f)]
    return np.unique(np.concatenate(pts)) if pts else np.empty(0)


def cancel_common(f: PieceSum, g: PieceSum) -> tuple[tuple, tuple]:
    """Remove pieces occurring in both sums (as multisets)."""
    left = list(as_pieces(f))
    right = []
    for p in as_pieces(g):
        for i, q in enumerate(left):
            if q == p:
                del left[i]
                break
        else:
            right.append(p)
    return tuple(left), tuple(right)


def shift(f, T: float):
    """Argument shift t -> f(t + T) for a piece, a sum, or a SigmaTau."""
    if isinstance(f, SigmaTau):
        return f.shifted(T)
    if isinstance(f, PieceFunction):
        return f.shifted(T)
    return tuple(p.shifted(T) for p in f)


def common_period(f: PieceSum, max_den: int = 1000) -> float | None:
    """Smallest common period of the periodic pieces (constants ignored).

    Returns None when there are no periodic pieces; raises if some piece is
    aperiodic and not constant, or the periods are incommensurate.
    """
    periods = []
    for p in as_pieces(f):
        if isinstance(p, Constant) or p.is_piecewise_constant and isinstance(p, Affine):
            continue
        if p.period is None:
            raise ValueError(f"piece {p.kind!r} is not periodic")
        periods.append(p.period)
    if not periods:
        return None
    base = periods[0]
    num, den = 1, 1
    for per in periods[1:]:
        r = Fraction(per / base).limit_denominator(max_den)
        if abs(float(r) * base - per) > 1e-9 * per:
            raise ValueError("pieces have incommensurate periods")
        num = num * r.numerator // math.gcd(num, r.numerator)
        den = math.gcd(den, r.denominator)
    return base * num / den


# ---------------------------------------------------------------------------
# potentials


def _check_roles(sigma: tuple, tau: tuple) -> None:
    for p in sigma:
        if p.singular_exponent >= 0.5:
            raise ValueError(
                f"sigma power singularity exponent {p.singular_exponent:g} must be < 1/2 "
                "(sigma must be locally square integrable)")
    for p in tau:
        if p.singular_exponent >= 1.0:
            raise ValueError(
                f"tau power singularity exponent {p.singular_exponent:g} must be < 1 "
                "(tau must be locally integrable)")


def _check_period(pieces: tuple, T: float, name: str) -> None:
    for p in pieces:
        if isinstance(p, Constant) or (isinstance(p, Affine) and p.slope == 0):
            continue
        per = p.period
        if per is None:
            raise ValueError(f"{name} piece {p.kind!r} is not periodic but period={T:g} was set")
        ratio = T / per
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio) or round(ratio) < 1:
            raise ValueError(f"{name} piece period {per:g} does not divide {T:g}")


@dataclass(frozen=True)
class SigmaTau:
    """A potential q = sigma' + tau with sigma, tau sums of pieces."""

    sigma: tuple = ()
    tau: tuple = ()
    period: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "sigma", as_pieces(self.sigma))
        object.__setattr__(self, "tau", as_pieces(self.tau))
        _check_roles(self.sigma, self.tau)
        if self.period is not None:
            if not self.period > 0:
                raise ValueError("period must be positive")
            _check_period(self.sigma, self.period, "sigma")
            _check_period(self.tau, self.period, "tau")

    def sigma_at(self, t):
        return evaluate(self.sigma, t)

    def tau_at(self, t):
        return evaluate(self.tau, t)

    @property
    def is_piecewise_constant(self) -> bool:
        return all(p.is_piecewise_constant for p in self.sigma + self.tau)

    def breakpoints(self, a: float, b: float) -> np.ndarray:
        return breakpoints_of(self.sigma + self.tau, a, b)

    def singular_points(self, a: float, b: float) -> np.ndarray:
        return singular_points_of(self.sigma + self.tau, a, b)

    def shifted(self, T: float) -> "SigmaTau":
        return SigmaTau(shift(self.sigma, T), shift(self.tau, T), self.period)

    def to_dict(self) -> dict[str, Any]:
        return {"sigma": [p.to_dict() for p in self.sigma],
                "tau": [p.to_dict() for p in self.tau], "period": self.period}


def _is_one_periodic(p: PieceFunction) -> bool:
    if isinstance(p, Constant):
        return True
    per = p.period
    if per is None:
        return False
    r = 1.0 / per
    return abs(r - round(r)) < 1e-9 and round(r) >= 1


@dataclass(frozen=True)
class QuasiperiodicPotential:
    """q(t) = d/dt[sigma1(t) + sigma2(alpha*t + theta)] + tau1(t) + tau2(alpha*t + theta).

    All four components are 1-periodic sums of pieces. ``alpha`` is kept as
    an exact Fraction (or an mpmath number) so convergents can be computed
    without rounding; ``irrational`` records whether alpha stands in for an
    irrational number (e.g. a truncated Liouville series).
    """

    sigma1: tuple = ()
    sigma2: tuple = ()
    tau1: tuple = ()
    tau2: tuple = ()
    alpha: Any = Fraction(1, 2)
    theta: float = 0.0
    irrational: bool = False
    cf_terms: tuple | None = None
    label: str = ""

    def __post_init__(self):
        for name in ("sigma1", "sigma2", "tau1", "tau2"):
            pieces = as_pieces(getattr(self, name))
            object.__setattr__(self, name, pieces)
            bad = [p.kind for p in pieces if not _is_one_periodic(p)]
            if bad:
                raise ValueError(f"{name} pieces must be 1-periodic (offending: {bad})")
        _check_roles(self.sigma1 + self.sigma2, self.tau1 + self.tau2)
        a = float(self.alpha)
        if not 0.0 < a < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if not 0.0 <= self.theta < 1.0:
            raise ValueError("theta must lie in [0, 1)")
        if self.cf_terms is not None:
            from .gordon import partial_quotients

            terms = tuple(int(x) for x in self.cf_terms)
            have = partial_quotients(self.alpha, len(terms))
            if tuple(have[:len(terms)]) != terms:
                raise ValueError("cf_terms disagree with the continued fraction of alpha")
            object.__setattr__(self, "cf_terms", terms)

    @property
    def alpha_float(self) -> float:
        return float(self.alpha)

    def folded(self) -> tuple[tuple, float]:
        """(sigma2_tilde, c): tau2 = sigma3' + c absorbed into the dilated part.

        Since d/dt[sigma3(alpha*t + theta)] = alpha * sigma3'(alpha*t + theta),
        the primitive enters the dilated sigma with weight 1/alpha.
        """
        if not self.tau2:
            return self.sigma2, 0.0
        sigma3, c = decompose_tau_periodic(self.tau2)
        extra = () if _vanishes(sigma3) else (sigma3.scaled(1.0 / self.alpha_float),)
        return self.sigma2 + extra, c

    def to_sigma_tau(self) -> SigmaTau:
        """The potential itself in the folded (sigma, tau) representation."""
        s2, c = self.folded()
        a = self.alpha_float
        sigma = self.sigma1 + tuple(p.rescaled(a, self.theta) for p in s2)
        tau = self.tau1 + ((Constant(c),) if c != 0.0 else ())
        return SigmaTau(sigma, tau, None)


def _vanishes(p: PieceFunction) -> bool:
    return isinstance(p, Constant) and p.value == 0.0


# ---------------------------------------------------------------------------
# operations


def bump_phi(t):
    """The C^1 bump: 2(t+1)^2, 1-2t^2, 2(t-1)^2 on the three sub-intervals of
    [-1, 1], zero elsewhere; its integer translates sum to one."""
    x = np.asarray(t, dtype=float)
    out = np.zeros(x.shape)
    m1 = (x >= -1.0) & (x < -0.5)
    m2 = (x >= -0.5) & (x < 0.5)
    m3 = (x >= 0.5) & (x <= 1.0)
    out[m1] = 2.0 * (x[m1] + 1.0) ** 2
    out[m2] = 1.0 - 2.0 * x[m2] ** 2
    out[m3] = 2.0 * (x[m3] - 1.0) ** 2
    return float(out) if x.ndim == 0 else out


def _check_integrable(pieces: tuple, kind: NormKind, a: float, b: float) -> None:
    for p in pieces:
        if p.singular_exponent * kind.power >= 1.0 and len(p.singular_points(a, b)):
            raise NonIntegrableError(
                f"|t|^-{p.singular_exponent:g} is not {'square ' if kind.power == 2 else ''}"
                f"integrable near {p.singular_points(a, b)[0]:g}")


def norm_on_interval(f: PieceSum, a: float, b: float, kind: NormKind | str = NormKind.L2SQ,
                     tol: float = 1e-10) -> float:
    """int_a^b |f| (L1) or int_a^b |f|^2 (L2sq), singularity aware."""
    kind = NormKind(kind)
    if not a < b:
        raise ValueError("need a < b")
    if tol <= 0:
        raise ValueError("tol must be positive")
    pieces = as_pieces(f)
    if not pieces:
        return 0.0
    _check_integrable(pieces, kind, a, b)
    p = kind.power
    return integrate(lambda t: np.abs(evaluate(pieces, t)) ** p, a, b, tol,
                     breakpoints_of(pieces, a, b), singular_points_of(pieces, a, b),
                     local=lambda c, x: np.abs(evaluate_local(pieces, c, x)) ** p)


def difference_norm(f: PieceSum, g: PieceSum, a: float, b: float,
                    kind: NormKind | str = NormKind.L2SQ, tol: float = 1e-10) -> float:
    """int_a^b |f - g| (L1) or |f - g|^2 (L2sq); pieces common to f and g
    cancel exactly before any evaluation."""
    kind = NormKind(kind)
    if not a < b:
        raise ValueError("need a < b")
    left, right = cancel_common(f, g)
    if not left and not right:
        return 0.0
    both = left + right
    _check_integrable(both, kind, a, b)
    p = kind.power
    return integrate(lambda t: np.abs(evaluate(left, t) - evaluate(right, t)) ** p, a, b, tol,
                     breakpoints_of(both, a, b), singular_points_of(both, a, b),
                     local=lambda c, x: np.abs(evaluate_local(left, c, x)
                                               - evaluate_local(right, c, x)) ** p)


def unif_norm(f: PieceSum, kind: NormKind | str = NormKind.L2SQ,
              window_step: float | None = None, tol: float = 1e-10) -> float:
    """sup_t int_t^{t+1} |f| or |f|^2 for periodic (or compactly perturbed
    periodic) sums of pieces.

    Exact when 1 is a multiple of the common period; otherwise the supremum
    is sampled over window starts spaced ``window_step`` (default period/256)
    with one local refinement pass around the maximum.
    """
    kind = NormKind(kind)
    pieces = as_pieces(f)
    if not pieces:
        return 0.0
    periodic = [p for p in pieces if not (p.period is None and p.kind == "power")]
    bumps = [p for p in pieces if p.period is None and p.kind == "power"]
    try:
        P = common_period(periodic)
    except ValueError as exc:
        raise ValueError(f"cannot bound supremum: {exc}") from None
    if P is None:
        P = 1.0
    if not bumps:
        r = 1.0 / P
        if abs(r - round(r)) < 1e-12 * max(1.0, r) and round(r) >= 1:
            return norm_on_interval(pieces, 0.0, 1.0, kind, tol)
    step = window_step if window_step is not None else P / 256
    if not step > 0:
        raise ValueError("window_step must be positive")

    def window(t0: float) -> float:
        return norm_on_interval(pieces, t0, t0 + 1.0, kind, tol)

    starts = list(np.arange(0.0, P, step))
    for b in bumps:
        starts += list(np.arange(b.center - 1.0, b.center + step, step))
    values = [window(s) for s in starts]
    i = int(np.argmax(values))
    best = values[i]
    for s in np.linspace(starts[i] - step, starts[i] + step, 33):
        best = max(best, window(float(s)))
    return best


def delta_comb(g: float, period: float = 1.0) -> SigmaTau:
    """q = g * sum_n delta(t - n*period) as sigma = -g*{t/period}, tau = g/period."""
    if not period > 0:
        raise ValueError("period must be positive")
    if g == 0:
        return SigmaTau((), (), period)
    return SigmaTau((Sawtooth(-g, period, 0.0),), (Constant(g / period),), period)


def decompose_tau_periodic(tau2: PieceSum) -> tuple[PieceFunction, float]:
    """Split a 1-periodic tau2 as sigma3' + c with c the mean of tau2 and
    sigma3 its 1-periodic primitive normalized by sigma3(0) = 0."""
    pieces = as_pieces(tau2)
    for p in pieces:
        if not _is_one_periodic(p):
            raise ValueError("tau2 must be 1-periodic")
        if p.singular_exponent >= 1.0:
            raise NonIntegrableError("tau2 must be integrable over a period")
    c = float(sum(p.mean_value() for p in pieces))
    rest = tuple(p for p in pieces if not isinstance(p, Constant))
    if not rest:
        return Constant(0.0), c
    if len(rest) == 1 and isinstance(rest[0], FourierMode):
        m = rest[0]
        if m.phase == 0.0 and m.sin_coeff == 0.0:
            w = TWO_PI * m.index / m.period_
            return FourierMode(m.index, 0.0, m.cos_coeff / w, m.period_), c
    return Primitive(rest, c - sum(p.value for p in pieces if isinstance(p, Constant)),
                     1.0), c
