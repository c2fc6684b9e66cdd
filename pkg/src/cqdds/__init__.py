"""Chaotic quantum double-delta swarm optimizer and benchmark harness."""

from .benchmarks import ObjectiveSpec, evaluate, suite
from .optimizers import ALGORITHMS, RunResult, run

__all__ = ["ALGORITHMS", "ObjectiveSpec", "RunResult", "evaluate", "run", "suite"]
__version__ = "0.1.0"
