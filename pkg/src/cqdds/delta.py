"""Characteristic-constraint dynamics for the double-delta swarm.

Positions are handled in an internal coordinate ``r`` in ``[r_floor, r_ceil]``
that is an affine image of each dimension's search box; this keeps
``exp(2kr)`` finite and the constraint value strictly positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

R_FLOOR = 1e-6
R_CEIL = 1.0
INVERT_RTOL = 1e-10
INVERT_MAXITER = 200


@dataclass(frozen=True)
class DeltaParams:
    k: float = 5.0
    theta: float = 0.0
    alpha_hi: float = 1.0
    alpha_lo: float = 0.3
    r_floor: float = R_FLOOR
    r_ceil: float = R_CEIL

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError("k must be positive")
        if not 0 < self.alpha_lo <= self.alpha_hi:
            raise ValueError("need 0 < alpha_lo <= alpha_hi")
        if not 0 < self.r_floor < self.r_ceil:
            raise ValueError("need 0 < r_floor < r_ceil")

    @classmethod
    def draw(cls, rng: np.random.Generator, **kwargs) -> "DeltaParams":
        """Fix theta for one run as 1e-3 times a N(0, 0.5) draw."""
        return cls(theta=1e-3 * float(rng.normal(0.0, 0.5)), **kwargs)

    @property
    def delta_range(self) -> tuple[float, float]:
        return (
            float(_delta(self.r_floor, self.k)),
            float(_delta(self.r_ceil, self.k)),
        )


def _delta(r, k):
    return np.exp(2 * k * r) - 5 * np.exp(-2 * k * r) + 4 * k * r + 4


def _ddelta(r, k):
    return 2 * k * np.exp(2 * k * r) + 10 * k * np.exp(-2 * k * r) + 4 * k


def delta_of_r(r, k: float = 5.0, lo: float = R_FLOOR, hi: float = R_CEIL):
    """``exp(2kr) - 5 exp(-2kr) + 4kr + 4`` for ``r`` in ``[lo, hi]``."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(~np.isfinite(r_arr)) or np.any(r_arr < lo) or np.any(r_arr > hi):
        raise ValueError(f"r outside the internal domain [{lo}, {hi}]")
    out = _delta(r_arr, k)
    return float(out) if out.ndim == 0 else out


def invert_delta(delta, k: float = 5.0, lo: float = R_FLOOR, hi: float = R_CEIL):
    """Solve ``delta_of_r(r) == delta`` for ``r`` in ``[lo, hi]``.

    Safeguarded Newton on the bracket ``[lo, hi]``: a Newton step that leaves
    the current bracket is replaced by bisection. Deltas outside the attainable
    range are clamped to the nearest endpoint first. Vectorised over arrays.
    """
    d = np.asarray(delta, dtype=float)
    if np.any(~np.isfinite(d)):
        raise ValueError("delta must be finite")
    scalar = d.ndim == 0
    d = np.atleast_1d(d)
    d_lo, d_hi = _delta(lo, k), _delta(hi, k)
    d = np.clip(d, d_lo, d_hi)

    a = np.full(d.shape, lo)
    b = np.full(d.shape, hi)
    # exp(2kr) dominates for large delta
    r = np.clip(np.log(np.maximum(d, 1.0)) / (2 * k), lo, hi)
    r = np.where(d <= d_lo, lo, np.where(d >= d_hi, hi, r))
    tol = INVERT_RTOL * np.abs(d)
    active = (d > d_lo) & (d < d_hi)

    for _ in range(INVERT_MAXITER):
        if not active.any():
            break
        f = _delta(r, k) - d
        done = np.abs(f) <= tol
        active &= ~done
        if not active.any():
            break
        # f is increasing in r, so the sign of f tells which side the root is on
        a = np.where(active & (f < 0), r, a)
        b = np.where(active & (f > 0), r, b)
        newton = r - f / _ddelta(r, k)
        bad = (newton <= a) | (newton >= b) | ~np.isfinite(newton)
        step = np.where(bad, 0.5 * (a + b), newton)
        collapsed = (b - a) <= 4 * np.finfo(float).eps * np.maximum(np.abs(b), 1e-300)
        active &= ~collapsed
        r = np.where(active, step, r)

    return float(r[0]) if scalar else r


def learning_rate(t: int, t_max: int, alpha_hi: float = 1.0, alpha_lo: float = 0.3) -> float:
    """Linear ramp from ``alpha_hi`` at t=1 down to ``alpha_lo`` at t=t_max."""
    if t_max < 2:
        raise ValueError("t_max must be >= 2")
    if not 1 <= t <= t_max:
        raise ValueError(f"t={t} outside [1, {t_max}]")
    return alpha_hi - (alpha_hi - alpha_lo) * (t - 1) / (t_max - 1)


def corrected_delta(delta_prev, delta_prev2, params: DeltaParams, alpha: float):
    """Apply the band-gated gradient correction to one agent's history.

    The gradient is the temporal difference ``delta_prev - delta_prev2``.
    Entries inside the band ``[0.5, 2] * delta_prev2`` pass through unchanged.
    """
    d1 = np.asarray(delta_prev, dtype=float)
    d2 = np.asarray(delta_prev2, dtype=float)
    grad = d1 - d2
    step = params.theta * grad * alpha
    high = d1 > 2.0 * d2
    low = d1 < 0.5 * d2
    minus = (high & (grad > 0)) | (low & (grad < 0))
    plus = (high | low) & ~minus
    out = np.where(minus, d1 - step, np.where(plus, d1 + step, d1))
    out = np.clip(out, *params.delta_range)
    return float(out) if out.ndim == 0 else out


def to_internal(x, lo, hi, r_floor: float = R_FLOOR, r_ceil: float = R_CEIL):
    x, lo, hi = (np.asarray(v, dtype=float) for v in (x, lo, hi))
    return r_floor + (x - lo) / (hi - lo) * (r_ceil - r_floor)


def from_internal(r, lo, hi, r_floor: float = R_FLOOR, r_ceil: float = R_CEIL):
    r, lo, hi = (np.asarray(v, dtype=float) for v in (r, lo, hi))
    x = lo + (r - r_floor) / (r_ceil - r_floor) * (hi - lo)
    # rounding can push an endpoint a hair outside the box
    return np.clip(x, np.minimum(lo, hi), np.maximum(lo, hi))
