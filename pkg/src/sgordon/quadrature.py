"""Adaptive Gauss-Legendre quadrature with breakpoint splitting and
geometric grading toward integrable endpoint singularities."""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np

from .errors import NonIntegrableError, QuadratureError

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(15)

_ROUNDOFF = 64 * np.finfo(float).eps
MAX_PENDING = 1 << 20

Integrand = Callable[[np.ndarray], np.ndarray]


def _gl(func: Integrand, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Fixed-order Gauss-Legendre on a batch of intervals."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    pts = mid[:, None] + half[:, None] * _NODES[None, :]
    vals = np.asarray(func(pts.ravel()), dtype=float).reshape(pts.shape)
    return half * (vals @ _WEIGHTS)


def _adaptive(func: Integrand, lo: np.ndarray, hi: np.ndarray, tol: float,
              max_levels: int = 50, equal_share: bool = False) -> np.ndarray:
    """Integrate func over each [lo_i, hi_i]; returns one value per interval.

    Each interval receives tolerance proportional to its share of the total
    length (or an equal share); halves inherit half of their parent's share.
    Bisection proceeds level by level, all pending pieces at once.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    out = np.zeros(lo.shape)
    if equal_share:
        budget = np.full(lo.shape, tol / max(lo.size, 1))
    else:
        total = float(np.sum(np.abs(hi - lo))) or 1.0
        budget = tol * np.abs(hi - lo) / total
    owner = np.arange(lo.size)
    coarse = _gl(func, lo, hi)
    for _ in range(max_levels):
        mid = 0.5 * (lo + hi)
        left = _gl(func, lo, mid)
        right = _gl(func, mid, hi)
        fine = left + right
        err = np.abs(fine - coarse)
        # below the roundoff floor further bisection cannot help
        floor = _ROUNDOFF * (np.abs(left) + np.abs(right))
        done = (err <= np.maximum(budget, floor)) | \
            (np.abs(hi - lo) < 1e-15 * (1.0 + np.abs(lo)))
        np.add.at(out, owner[done], fine[done])
        keep = ~done
        if not keep.any():
            return out
        lo, mid, hi = lo[keep], mid[keep], hi[keep]
        owner = owner[keep]
        budget = np.tile(0.5 * budget[keep], 2)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
        coarse = np.concatenate([left[keep], right[keep]])
        owner = np.concatenate([owner, owner])
        if lo.size > MAX_PENDING:
            raise QuadratureError(
                f"adaptive quadrature needs more than {MAX_PENDING} subintervals for {tol:g}")
    raise QuadratureError(f"adaptive quadrature did not converge to {tol:g}")


def _graded(func: Integrand, c: float, far: float, tol: float,
            max_levels: int = 400, local=None) -> float:
    """Integral over the segment between a singular point c and a regular
    point far, using dyadic grading toward c plus a geometric tail.

    The work is done in the offset x = t - c; ``local(c, x)``, when given,
    evaluates the integrand without forming c + x.
    """
    length = far - c
    if local is not None:
        g = lambda x: local(c0, x)  # noqa: E731
    else:
        g = lambda x: func(c0 + x)  # noqa: E731
    c0 = c
    c = 0.0
    total = 0.0
    level = 0
    chunk = 24
    while level < max_levels:
        k = np.arange(level, level + chunk)
        inner = c + length * 2.0 ** (-(k + 1))
        outer = c + length * 2.0 ** (-k)
        live = np.abs(inner) > (0.0 if local is not None else 1024 * np.spacing(abs(c0)))
        if not live.all():
            # grading has reached the float resolution around c
            k, inner, outer = k[live], inner[live], outer[live]
            if k.size < 3:
                return total
            pieces = _adaptive(g, inner, outer, tol / 4.0, equal_share=True)
            total += float(np.sum(pieces))
            last, before = float(pieces[-1]), float(pieces[-2])
            ratio = last / before if before != 0.0 else 0.0
            if 0.0 <= ratio < 1.0:
                total += last * ratio / (1.0 - ratio)
            return total
        # pieces run from the far end toward c
        pieces = _adaptive(g, inner, outer, tol / 4.0, equal_share=True)
        total += float(np.sum(pieces))
        level += chunk
        last, before, earlier = (float(v) for v in pieces[-1:-4:-1])
        if last == 0.0:
            return total
        ratio = last / before if before != 0.0 else np.inf
        if 0.0 <= ratio < 1.0:
            # tail of a geometric series; trust it once the ratio has settled
            tail = last * ratio / (1.0 - ratio)
            prev_ratio = before / earlier if earlier != 0.0 else np.inf
            if 0.0 <= prev_ratio < 1.0:
                alt = last * prev_ratio / (1.0 - prev_ratio)
                if abs(tail - alt) <= tol / 8.0:
                    return total + tail
            elif abs(tail) <= tol / 8.0:
                return total + tail
        elif ratio < 0.0:
            if abs(last) <= tol / 8.0:
                return total
        elif level >= 5 * chunk:
            raise NonIntegrableError(
                f"integrand does not decay toward singular point {c0:g}")
    raise QuadratureError(f"graded quadrature toward {c0:g} did not converge")


def integrate(func: Integrand, a: float, b: float, tol: float = 1e-10,
              breakpoints: Iterable[float] = (),
              singular: Iterable[float] = (), local=None) -> float:
    """Integrate a vectorized function over [a, b] (a > b flips the sign).

    The interval is split at every breakpoint; segments ending at a point of
    ``singular`` are graded geometrically toward it. ``local(c, x)`` may
    supply the integrand at c + x for offsets x from a singular point c.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if a == b:
        return 0.0
    if a > b:
        return -integrate(func, b, a, tol, breakpoints, singular, local)
    sing = {float(s) for s in singular if a <= s <= b}
    cuts = {float(p) for p in breakpoints if a < p < b} | {s for s in sing if a < s < b}
    pts = np.array(sorted(cuts | {float(a), float(b)}))
    pts = pts[np.concatenate([[True], np.diff(pts) > 0])]
    nseg = len(pts) - 1
    seg_tol = tol / max(nseg, 1)
    regular_lo, regular_hi = [], []
    total = 0.0
    for x0, x1 in zip(pts[:-1], pts[1:]):
        s0, s1 = x0 in sing, x1 in sing
        if s0 and s1:
            m = 0.5 * (x0 + x1)
            total += (_graded(func, x0, m, seg_tol / 2, local=local)
                      - _graded(func, x1, m, seg_tol / 2, local=local))
        elif s0:
            total += _graded(func, x0, x1, seg_tol, local=local)
        elif s1:
            total -= _graded(func, x1, x0, seg_tol, local=local)
        else:
            regular_lo.append(x0)
            regular_hi.append(x1)
    if regular_lo:
        lo = np.array(regular_lo)
        hi = np.array(regular_hi)
        share = float(np.sum(hi - lo)) / (b - a)
        total += float(np.sum(_adaptive(func, lo, hi, tol * max(share, 1e-3))))
    return total
