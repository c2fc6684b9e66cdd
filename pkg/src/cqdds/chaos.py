"""Chebyshev chaotic weight source.

The raw recurrence ``cos(t * arccos(rho))`` lives in [-1, 1]; emitted weights
are folded into [0, 1] by absolute value. Orbits that land on a fixed point
(|raw| == 1) are reseeded from the run's random stream so the sequence never
freezes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_RHO0 = 0.7
DEGENERATE_TOL = 1e-12
RESEED_LOW, RESEED_HIGH = 0.05, 0.95


@dataclass
class ChebyshevState:
    rho: float
    t: int
    rng: np.random.Generator
    reseed_count: int = 0

    def next(self) -> float:
        return next_weight(self)


def init(rng: np.random.Generator, rho0: float = DEFAULT_RHO0) -> ChebyshevState:
    if not 0.0 < rho0 < 1.0:
        raise ValueError(f"rho0 must lie strictly inside (0, 1), got {rho0}")
    return ChebyshevState(rho=float(rho0), t=1, rng=rng)


def next_weight(state: ChebyshevState) -> float:
    """Advance the map one step and return the folded weight."""
    raw = math.cos(state.t * math.acos(state.rho))
    state.t += 1
    rho = abs(raw)
    if rho >= 1.0 - DEGENERATE_TOL:
        rho = float(state.rng.uniform(RESEED_LOW, RESEED_HIGH))
        state.reseed_count += 1
    state.rho = rho
    return rho


def sample_sequence(seed: int, n: int, rho0: float = DEFAULT_RHO0) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    state = init(np.random.default_rng(seed), rho0)
    return np.array([next_weight(state) for _ in range(n)])
