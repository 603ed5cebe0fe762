"""Random periodic instances shared by the test modules."""

from __future__ import annotations

import numpy as np

from sgordon.potential import (Constant, FourierMode, PowerSingularity, Sawtooth, SigmaTau,
                               StepTrain)

KINDS = ("steps", "sawtooth", "singular")


def _steps(rng, period, scale):
    n = int(rng.integers(1, 5))
    bp = np.sort(rng.choice(np.arange(1, 64), n - 1, replace=False)) / 64 * period
    bp = np.concatenate([[0.0], bp])
    return StepTrain(tuple(bp), tuple(rng.uniform(-scale, scale, n)), period,
                     float(rng.uniform(0, period)))


def random_periodic(rng: np.random.Generator, kind: str | None = None) -> SigmaTau:
    """A periodic SigmaTau of the requested family (random if None)."""
    kind = kind or KINDS[int(rng.integers(len(KINDS)))]
    period = float(rng.choice([1.0, 0.5, 2.0]))
    if kind == "steps":
        sigma = (_steps(rng, period, 2.0),)
        tau = (_steps(rng, period, 4.0),)
    elif kind == "sawtooth":
        sigma = (Sawtooth(float(rng.uniform(-3, 3)), period, float(rng.uniform(0, period))),)
        tau = (Constant(float(rng.uniform(-3, 3))),
               FourierMode(int(rng.integers(1, 3)), float(rng.uniform(-2, 2)),
                           float(rng.uniform(-2, 2)), period))
    elif kind == "singular":
        c = float(rng.uniform(0, period))
        sigma = (PowerSingularity(c, float(rng.uniform(0.05, 0.45)),
                                  float(rng.uniform(-1, 1)), period),
                 Sawtooth(float(rng.uniform(-1, 1)), period, 0.0))
        tau = (PowerSingularity(float(rng.uniform(0, period)), float(rng.uniform(0.05, 0.9)),
                                float(rng.uniform(-1, 1)), period),)
    else:
        raise ValueError(kind)
    return SigmaTau(sigma, tau, period)
