"""Optimizer family: C-QDDS, its uniform-weight ablation, QPSO and two PSOs.

Every optimizer keeps a pool of agents and, by default, moves ONE randomly
chosen agent per iteration, so each iteration costs exactly one objective
evaluation after initialization. ``swarm_mode="full-swarm"`` sweeps all
agents instead.

The global best is replaced only on strict improvement, and ``run`` checks
after every iteration that the best cost never increased.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import chaos
from .benchmarks import ObjectiveSpec, evaluate
from .delta import (
    DeltaParams,
    corrected_delta,
    delta_of_r,
    from_internal,
    invert_delta,
    learning_rate,
)

POOL_SIZE = 50
ALGORITHMS = ("cqdds", "qdds-uniform", "qpso", "pso-damped", "pso-canonical")
EXTERNAL_ALGORITHMS = ("sca", "dfa", "alo", "woa", "fa")
SWARM_MODES = ("one-agent", "full-swarm")


class BoundsViolation(RuntimeError):
    pass


class MonotonicityViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class PsoParams:
    w0: float = 0.9
    damping: float = 1.0
    c1: float = 2.0
    c2: float = 2.0
    v_max_fraction: float = 0.2

    def __post_init__(self):
        if self.w0 <= 0:
            raise ValueError("w0 must be positive")
        if not 0 < self.damping <= 1:
            raise ValueError("damping must be in (0, 1]")
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("acceleration coefficients must be non-negative")


@dataclass(frozen=True)
class QpsoParams:
    beta_hi: float = 1.0
    beta_lo: float = 0.5

    def beta(self, t: int, t_max: int) -> float:
        if t_max < 2:
            return self.beta_hi
        return self.beta_hi - (self.beta_hi - self.beta_lo) * (t - 1) / (t_max - 1)


@dataclass
class TrajectoryPoint:
    iteration: int
    cost: float
    x1: float
    x2: float


@dataclass
class AgentState:
    """Snapshot of one C-QDDS agent."""

    r: np.ndarray
    delta_prev: np.ndarray
    delta_prev2: np.ndarray
    cost: float
    position: np.ndarray


@dataclass
class RunResult:
    algorithm: str
    function: str
    dim: int
    seed: int
    best_cost: float
    best_position: np.ndarray
    trajectory: list[TrajectoryPoint]
    evaluations: int
    init_evaluations: int
    iterations: int
    convergence: np.ndarray = field(repr=False)

    @property
    def initial_best_cost(self) -> float:
        return self.trajectory[0].cost


class UniformWeights:
    """Weight source drawing rho ~ U(0, 1); drop-in for ``ChebyshevState``."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def next(self) -> float:
        return float(self.rng.random())


@dataclass
class RunState:
    spec: ObjectiveSpec
    dim: int
    lower: np.ndarray
    upper: np.ndarray
    rng: np.random.Generator
    budget: int
    positions: np.ndarray
    costs: np.ndarray
    best_cost: float = np.inf
    best_position: Optional[np.ndarray] = None
    t: int = 0
    evaluations: int = 0
    trajectory: list[TrajectoryPoint] = field(default_factory=list)
    # C-QDDS
    r: Optional[np.ndarray] = None
    delta_prev: Optional[np.ndarray] = None
    delta_prev2: Optional[np.ndarray] = None
    r_best: Optional[np.ndarray] = None
    delta_params: Optional[DeltaParams] = None
    weights: object = None
    # PSO / QPSO
    pbest: Optional[np.ndarray] = None
    pbest_cost: Optional[np.ndarray] = None
    velocity: Optional[np.ndarray] = None
    w: float = 0.0
    pso: Optional[PsoParams] = None
    qpso: Optional[QpsoParams] = None

    @property
    def pool_size(self) -> int:
        return self.positions.shape[0]

    def evaluate(self, x: np.ndarray) -> float:
        if np.any(x < self.lower) or np.any(x > self.upper):
            raise BoundsViolation(f"{self.spec.id}: evaluation outside the search box")
        self.evaluations += 1
        return evaluate(self.spec, x, self.rng)

    def consider(self, x: np.ndarray, cost: float, r: Optional[np.ndarray] = None) -> bool:
        """Replace the global best iff ``cost`` is strictly lower."""
        if not cost < self.best_cost:
            return False
        self.best_cost = cost
        self.best_position = x.copy()
        if r is not None:
            self.r_best = r.copy()
        self.trajectory.append(TrajectoryPoint(self.t, cost, float(x[0]), float(x[1])))
        return True

    def agent(self, i: int) -> AgentState:
        return AgentState(
            r=self.r[i].copy(),
            delta_prev=self.delta_prev[i].copy(),
            delta_prev2=self.delta_prev2[i].copy(),
            cost=float(self.costs[i]),
            position=self.positions[i].copy(),
        )


def _new_state(spec, dim, rng, budget, m) -> RunState:
    dim = spec.resolve_dim(dim)
    lo, hi = spec.bounds(dim)
    return RunState(
        spec=spec,
        dim=dim,
        lower=lo,
        upper=hi,
        rng=rng,
        budget=budget,
        positions=np.empty((m, dim)),
        costs=np.empty(m),
    )


# ---------------------------------------------------------------------------
# C-QDDS
# ---------------------------------------------------------------------------


def blend(r_t, r_gbest, rho: float):
    """Convex pull towards the global best: ``rho * r_t + (1 - rho) * r_gbest``."""
    return rho * np.asarray(r_t, dtype=float) + (1.0 - rho) * np.asarray(r_gbest, dtype=float)


def init_cqdds(
    spec: ObjectiveSpec,
    dim: Optional[int],
    rng: np.random.Generator,
    budget: int,
    m: int = POOL_SIZE,
    delta_params: Optional[DeltaParams] = None,
    uniform_weights: bool = False,
    rho0: float = chaos.DEFAULT_RHO0,
) -> RunState:
    """Two warm-up draws per agent seed the delta history; both are evaluated."""
    state = _new_state(spec, dim, rng, budget, m)
    p = delta_params if delta_params is not None else DeltaParams.draw(rng)
    state.delta_params = p
    state.weights = UniformWeights(rng) if uniform_weights else chaos.init(rng, rho0)

    d = state.dim
    state.r = np.empty((m, d))
    state.delta_prev = np.empty((m, d))
    state.delta_prev2 = np.empty((m, d))
    for i in range(m):
        r1 = rng.uniform(p.r_floor, p.r_ceil, d)
        r2 = rng.uniform(p.r_floor, p.r_ceil, d)
        x1 = _to_box(state, r1)
        state.consider(x1, state.evaluate(x1), r1)
        x2 = _to_box(state, r2)
        c2 = state.evaluate(x2)
        state.consider(x2, c2, r2)
        state.r[i] = r2
        state.positions[i] = x2
        state.costs[i] = c2
        state.delta_prev2[i] = delta_of_r(r1, p.k, p.r_floor, p.r_ceil)
        state.delta_prev[i] = delta_of_r(r2, p.k, p.r_floor, p.r_ceil)
    return state


def _to_box(state: RunState, r: np.ndarray) -> np.ndarray:
    p = state.delta_params
    return from_internal(r, state.lower, state.upper, p.r_floor, p.r_ceil)


def cqdds_step(state: RunState, i: Optional[int] = None) -> RunState:
    """Move one agent: delta correction, inversion, chaotic pull to gbest."""
    p = state.delta_params
    if i is None:
        i = int(state.rng.integers(state.pool_size))
    t = min(max(state.t, 1), state.budget)
    alpha = learning_rate(t, max(state.budget, 2), p.alpha_hi, p.alpha_lo)

    delta_t = corrected_delta(state.delta_prev[i], state.delta_prev2[i], p, alpha)
    r_t = invert_delta(delta_t, p.k, p.r_floor, p.r_ceil)
    rho = state.weights.next()
    r_new = np.clip(blend(r_t, state.r_best, rho), p.r_floor, p.r_ceil)

    x = _to_box(state, r_new)
    cost = state.evaluate(x)
    state.consider(x, cost, r_new)

    state.r[i] = r_new
    state.positions[i] = x
    state.costs[i] = cost
    state.delta_prev2[i] = state.delta_prev[i]
    state.delta_prev[i] = delta_of_r(r_new, p.k, p.r_floor, p.r_ceil)
    return state


# the ablation differs only in the weight source chosen at init
qdds_uniform_step = cqdds_step


# ---------------------------------------------------------------------------
# QPSO
# ---------------------------------------------------------------------------


def qpso_mbest(pbests) -> np.ndarray:
    pbests = np.atleast_2d(np.asarray(pbests, dtype=float))
    if pbests.shape[0] < 1:
        raise ValueError("need at least one personal best")
    return pbests.mean(axis=0)


def local_attractor(pbest, gbest, phi):
    return phi * np.asarray(pbest) + (1.0 - phi) * np.asarray(gbest)


def qpso_position(p, mbest, x, beta: float, u, sign):
    """``p + sign * beta * |mbest - x| * ln(1/u)``."""
    return np.asarray(p) + np.asarray(sign) * beta * np.abs(
        np.asarray(mbest) - np.asarray(x)
    ) * np.log(1.0 / np.asarray(u))


def _init_swarm(state: RunState) -> RunState:
    m, d = state.positions.shape
    for i in range(m):
        x = state.rng.uniform(state.lower, state.upper)
        c = state.evaluate(x)
        state.positions[i] = x
        state.costs[i] = c
        state.consider(x, c)
    state.pbest = state.positions.copy()
    state.pbest_cost = state.costs.copy()
    return state


def init_qpso(spec, dim, rng, budget, m: int = POOL_SIZE, params: Optional[QpsoParams] = None):
    state = _new_state(spec, dim, rng, budget, m)
    state.qpso = params or QpsoParams()
    return _init_swarm(state)


def qpso_step(state: RunState, i: Optional[int] = None) -> RunState:
    rng = state.rng
    if i is None:
        i = int(rng.integers(state.pool_size))
    d = state.dim
    beta = state.qpso.beta(min(max(state.t, 1), state.budget), state.budget)
    phi = rng.random(d)
    u = rng.uniform(np.finfo(float).tiny, 1.0, d)
    sign = np.where(rng.random(d) < 0.5, 1.0, -1.0)
    p = local_attractor(state.pbest[i], state.best_position, phi)
    mbest = qpso_mbest(state.pbest)
    x = np.clip(qpso_position(p, mbest, state.positions[i], beta, u, sign), state.lower, state.upper)
    _accept(state, i, x)
    return state


# ---------------------------------------------------------------------------
# PSO
# ---------------------------------------------------------------------------


def pso_velocity(v, x, pbest, gbest, w, c1, c2, u1, u2, v_max=np.inf):
    v_new = w * v + c1 * u1 * (pbest - x) + c2 * u2 * (gbest - x)
    return np.clip(v_new, -v_max, v_max)


def init_pso(spec, dim, rng, budget, m: int = POOL_SIZE, params: Optional[PsoParams] = None):
    state = _new_state(spec, dim, rng, budget, m)
    state.pso = params or PsoParams()
    state.w = state.pso.w0
    state.velocity = np.zeros_like(state.positions)
    return _init_swarm(state)


def pso_step(state: RunState, i: Optional[int] = None) -> RunState:
    rng = state.rng
    if i is None:
        i = int(rng.integers(state.pool_size))
    prm = state.pso
    d = state.dim
    u1, u2 = rng.random(d), rng.random(d)
    v_max = prm.v_max_fraction * (state.upper - state.lower)
    x = state.positions[i]
    v = pso_velocity(
        state.velocity[i], x, state.pbest[i], state.best_position, state.w, prm.c1, prm.c2, u1, u2, v_max
    )
    state.velocity[i] = v
    _accept(state, i, np.clip(x + v, state.lower, state.upper))
    return state


def _accept(state: RunState, i: int, x: np.ndarray) -> None:
    cost = state.evaluate(x)
    state.positions[i] = x
    state.costs[i] = cost
    if cost < state.pbest_cost[i]:
        state.pbest[i] = x
        state.pbest_cost[i] = cost
    state.consider(x, cost)


def _damp(state: RunState) -> None:
    state.w *= state.pso.damping


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Algo:
    init: Callable
    step: Callable
    end_iteration: Optional[Callable] = None
    defaults: dict = field(default_factory=dict)


_REGISTRY = {
    "cqdds": _Algo(init_cqdds, cqdds_step),
    "qdds-uniform": _Algo(init_cqdds, qdds_uniform_step, defaults={"uniform_weights": True}),
    "qpso": _Algo(init_qpso, qpso_step),
    "pso-damped": _Algo(init_pso, pso_step, _damp, {"params": PsoParams(damping=0.95)}),
    "pso-canonical": _Algo(init_pso, pso_step, _damp, {"params": PsoParams(damping=1.0)}),
}


def init_state(
    algorithm: str,
    spec: ObjectiveSpec,
    budget: int,
    rng: np.random.Generator,
    dim: Optional[int] = None,
    pool_size: int = POOL_SIZE,
    **options,
) -> RunState:
    algo = _lookup(algorithm)
    kwargs = {**algo.defaults, **options}
    state = algo.init(spec, dim, rng, budget, pool_size, **kwargs)
    state.t = 1
    return state


def _lookup(algorithm: str) -> _Algo:
    if algorithm in EXTERNAL_ALGORITHMS:
        raise NotImplementedError(f"{algorithm}: not implemented, defined by an external reference")
    try:
        return _REGISTRY[algorithm]
    except KeyError:
        raise ValueError(
            f"unknown algorithm {algorithm!r}; expected one of {', '.join(ALGORITHMS)}"
        ) from None


def run(
    algorithm: str,
    spec: ObjectiveSpec,
    budget: int,
    seed: int,
    dim: Optional[int] = None,
    swarm_mode: str = "one-agent",
    pool_size: int = POOL_SIZE,
    **options,
) -> RunResult:
    """Run ``budget`` iterations of ``algorithm`` on ``spec`` from ``seed``.

    Initialization evaluations (``2 * pool_size`` for the QDDS variants,
    ``pool_size`` otherwise) come on top of the iteration budget.
    """
    if budget < 3:
        raise ValueError("budget must be >= 3")
    if swarm_mode not in SWARM_MODES:
        raise ValueError(f"swarm_mode must be one of {SWARM_MODES}")
    algo = _lookup(algorithm)
    rng = np.random.default_rng(seed)
    state = init_state(algorithm, spec, budget, rng, dim, pool_size, **options)
    init_evals = state.evaluations
    state.trajectory[:] = state.trajectory[-1:]
    state.trajectory[0].iteration = 0

    convergence = np.empty(budget)
    for t in range(1, budget + 1):
        state.t = t
        before = state.best_cost
        if swarm_mode == "one-agent":
            algo.step(state)
        else:
            for i in range(state.pool_size):
                algo.step(state, i)
        if algo.end_iteration is not None:
            algo.end_iteration(state)
        if state.best_cost > before:
            raise MonotonicityViolation(
                f"{algorithm}/{spec.id}: best cost rose from {before!r} to {state.best_cost!r} at t={t}"
            )
        convergence[t - 1] = state.best_cost

    return RunResult(
        algorithm=algorithm,
        function=spec.id,
        dim=state.dim,
        seed=seed,
        best_cost=float(state.best_cost),
        best_position=state.best_position.copy(),
        trajectory=list(state.trajectory),
        evaluations=state.evaluations,
        init_evaluations=init_evals,
        iterations=budget,
        convergence=convergence,
    )
