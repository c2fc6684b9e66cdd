"""Trial summaries and cross-algorithm comparison statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

T_CRITICAL = 2.001717  # two-tailed, alpha = 0.05, df = 58
PRECISION_FRACTIONS = tuple(round(0.1 * i, 1) for i in range(1, 11))


@dataclass(frozen=True)
class SampleSummary:
    mean: float
    std: float
    min: float
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("a summary needs n >= 2")
        if self.std < 0:
            raise ValueError("std must be non-negative")

    def scaled(self, c: float) -> "SampleSummary":
        return SampleSummary(self.mean * c, self.std * abs(c), self.min * c, self.n)


@dataclass(frozen=True)
class EffectSizes:
    t_value: float
    significant: bool
    cohens_d: float
    hedges_g_textbook: float
    hedges_g_papermode: float
    degenerate: bool = False


def summarize(costs: Iterable[float]) -> SampleSummary:
    a = np.asarray(list(costs), dtype=float)
    if a.size < 2:
        raise ValueError("need at least two costs")
    if not np.all(np.isfinite(a)):
        raise ValueError("costs must be finite")
    return SampleSummary(float(a.mean()), float(a.std(ddof=1)), float(a.min()), int(a.size))


def _ratio(diff: float, scale: float) -> float:
    if scale > 0:
        return diff / scale
    if diff == 0:
        return 0.0
    return math.copysign(math.inf, diff)


def _check_n(a: SampleSummary, b: SampleSummary) -> int:
    if a.n != b.n:
        raise ValueError(f"equal sample sizes required, got {a.n} and {b.n}")
    return a.n


def t_test(a: SampleSummary, b: SampleSummary) -> tuple[float, bool]:
    """Equal-n two-sample t value and its significance at ``T_CRITICAL``.

    Zero spread with unequal means yields a signed infinity.
    """
    n = _check_n(a, b)
    t = _ratio(a.mean - b.mean, math.sqrt((a.std**2 + b.std**2) / n))
    return t, abs(t) > T_CRITICAL


def cohens_d(a: SampleSummary, b: SampleSummary) -> float:
    _check_n(a, b)
    return _ratio(a.mean - b.mean, math.sqrt((a.std**2 + b.std**2) / 2))


def hedges_g(a: SampleSummary, b: SampleSummary, mode: str = "textbook") -> float:
    """Hedges' g.

    ``textbook`` pools the variances with (n - 1) weights, which equals
    Cohen's d at equal n. ``papermode`` rescales d by sqrt((2n - 2) / n).
    """
    n = _check_n(a, b)
    if mode == "textbook":
        pooled = ((n - 1) * a.std**2 + (n - 1) * b.std**2) / (2 * n - 2)
        return _ratio(a.mean - b.mean, math.sqrt(pooled))
    if mode == "papermode":
        return cohens_d(a, b) * math.sqrt((2 * n - 2) / n)
    raise ValueError(f"unknown mode {mode!r}")


def effect_sizes(a: SampleSummary, b: SampleSummary) -> EffectSizes:
    t, sig = t_test(a, b)
    return EffectSizes(
        t_value=t,
        significant=sig,
        cohens_d=cohens_d(a, b),
        hedges_g_textbook=hedges_g(a, b, "textbook"),
        hedges_g_papermode=hedges_g(a, b, "papermode"),
        degenerate=math.isinf(t),
    )


def round_sig(x: float, digits: int = 4) -> float:
    if x == 0 or not math.isfinite(x):
        return x
    return round(x, digits - 1 - int(math.floor(math.log10(abs(x)))))


def win_tie_loss(
    values: Mapping[str, float], direction: str = "minimize", sig_figs: Optional[int] = None
) -> dict[str, str]:
    """Classify each algorithm as ``win``, ``tie`` or ``loss`` for one cell.

    A win is a unique best, a tie shares the best value, anything else loses.
    With ``sig_figs`` set, values are compared after rounding.
    """
    if len(values) < 2:
        raise ValueError("need at least two algorithms")
    vals = {}
    for k, v in values.items():
        v = float(v)
        if not math.isfinite(v):
            raise ValueError(f"non-finite value for {k}")
        vals[k] = round_sig(v, sig_figs) if sig_figs else v
    if direction == "maximize":
        vals = {k: -v for k, v in vals.items()}
    elif direction != "minimize":
        raise ValueError("direction must be 'minimize' or 'maximize'")
    best = min(vals.values())
    n_best = sum(v == best for v in vals.values())
    return {k: ("loss" if v != best else "win" if n_best == 1 else "tie") for k, v in vals.items()}


def tally(cells: Iterable[Mapping[str, float]], **kwargs) -> dict[str, dict[str, int]]:
    """Sum ``win_tie_loss`` over many cells (typically one per function)."""
    out: dict[str, dict[str, int]] = {}
    for cell in cells:
        for algo, outcome in win_tie_loss(cell, **kwargs).items():
            row = out.setdefault(algo, {"win": 0, "tie": 0, "loss": 0})
            row[outcome] += 1
    return out


def _dense_rank(values: Sequence[float], descending: bool) -> list[int]:
    levels = sorted(set(values), reverse=descending)
    pos = {v: i + 1 for i, v in enumerate(levels)}
    return [pos[v] for v in values]


def average_ranks(wtl: Mapping[str, Mapping[str, int]]) -> dict[str, dict[str, float]]:
    """Dense-rank each of the win/tie/loss rows and average the three ranks."""
    algos = list(wtl)
    win = _dense_rank([wtl[a]["win"] for a in algos], descending=True)
    tie = _dense_rank([wtl[a]["tie"] for a in algos], descending=True)
    loss = _dense_rank([wtl[a]["loss"] for a in algos], descending=False)
    return {
        a: {
            "win_rank": win[i],
            "tie_rank": tie[i],
            "loss_rank": loss[i],
            "average_rank": (win[i] + tie[i] + loss[i]) / 3,
        }
        for i, a in enumerate(algos)
    }


def precision_curve(costs: Iterable[float]) -> list[tuple[float, float, int]]:
    """``(fraction, threshold, count)`` for fractions 0.1..1.0.

    ``count`` is the number of costs strictly below
    ``min + fraction * (max - min)``; when all costs coincide every count is n.
    """
    a = np.asarray(list(costs), dtype=float)
    if a.size < 1:
        raise ValueError("need at least one cost")
    lo, hi = float(a.min()), float(a.max())
    out = []
    for f in PRECISION_FRACTIONS:
        thr = lo + f * (hi - lo)
        count = a.size if hi == lo else int(np.sum(a < thr))
        out.append((f, thr, count))
    return out
