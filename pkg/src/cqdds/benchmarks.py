"""The 23 classical test functions F1-F23 with bounds and known optima.

Functions F1-F13 accept any dimensionality (default 30); F14-F23 are fixed.
All evaluators take a 1-D float array. F7 adds uniform noise drawn from a
caller-supplied ``numpy.random.Generator``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

DEFAULT_DIM = 30


# ---------------------------------------------------------------------------
# Coefficient tables
# ---------------------------------------------------------------------------

KOWALIK_A = np.array(
    [0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246]
)
# the printed column holds reciprocals 1/b_i
KOWALIK_B_RECIPROCAL = np.array([0.25, 0.5, 1, 2, 4, 6, 8, 10, 12, 14, 16], dtype=float)
KOWALIK_B = 1.0 / KOWALIK_B_RECIPROCAL

# row 0 cycles fastest, row 1 slowest; 25 columns
FOXHOLES_A = np.array(
    [[a, b] for b, a in itertools.product((-32, -16, 0, 16, 32), repeat=2)], dtype=float
).T

HARTMANN3_A = np.array(
    [[3.0, 10.0, 30.0], [0.1, 10.0, 35.0], [3.0, 10.0, 30.0], [0.1, 10.0, 35.0]]
)
HARTMANN3_C = np.array([1.0, 1.2, 3.0, 3.2])
HARTMANN3_P = np.array(
    [
        [0.3689, 0.1170, 0.2673],
        [0.4699, 0.4387, 0.7470],
        [0.1091, 0.8732, 0.5547],
        [0.038150, 0.5743, 0.8828],
    ]
)

HARTMANN6_A = np.array(
    [
        [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
        [0.5, 10.0, 17.0, 0.1, 8.0, 14.0],
        [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
        [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
    ]
)
HARTMANN6_C = np.array([1.0, 1.2, 3.0, 3.2])
HARTMANN6_P = np.array(
    [
        [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
        [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
        [0.2348, 0.1415, 0.3522, 0.2883, 0.3047, 0.6650],
        [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
    ]
)

SHEKEL_A = np.array(
    [
        [4, 4, 4, 4],
        [1, 1, 1, 1],
        [8, 8, 8, 8],
        [6, 6, 6, 6],
        [3, 7, 3, 7],
        [2, 9, 2, 9],
        [5, 5, 3, 3],
        [8, 1, 8, 1],
        [6, 2, 6, 2],
        [7, 3.6, 7, 3.6],
    ],
    dtype=float,
)
SHEKEL_C = np.array([0.1, 0.2, 0.4, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5])


# ---------------------------------------------------------------------------
# Helpers shared by the penalized functions
# ---------------------------------------------------------------------------


def penalty_u(x_i, a: float, k: float, m: float):
    """Boundary penalty ``u(x, a, k, m)``; zero inside ``[-a, a]``.

    Works elementwise on arrays as well as on scalars.
    """
    x_i = np.asarray(x_i, dtype=float)
    out = np.where(x_i > a, k * (x_i - a) ** m, 0.0)
    out = np.where(x_i < -a, k * (-x_i - a) ** m, out)
    return float(out) if out.ndim == 0 else out


def penalized_y(x_i):
    return 1.0 + (np.asarray(x_i, dtype=float) + 1.0) / 4.0


# ---------------------------------------------------------------------------
# Evaluators
# ---------------------------------------------------------------------------


def sphere(x):
    return float(np.sum(x * x))


def schwefel_2_22(x):
    ax = np.abs(x)
    return float(np.sum(ax) + np.prod(ax))


def schwefel_1_2(x):
    return float(np.sum(np.cumsum(x) ** 2))


def schwefel_2_21(x):
    return float(np.max(np.abs(x)))


def rosenbrock(x):
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1.0) ** 2))


def step(x):
    return float(np.sum((x + 0.5) ** 2))


def quartic_noise(x, rng: np.random.Generator):
    i = np.arange(1, x.size + 1)
    return float(np.sum(i * x**4) + rng.random())


def schwefel_2_26(x):
    return float(-np.sum(x * np.sin(np.sqrt(np.abs(x)))))


def rastrigin(x, A: float = 10.0):
    return float(A * x.size + np.sum(x * x - A * np.cos(2.0 * np.pi * x)))


def ackley(x):
    n = x.size
    a = -20.0 * np.exp(-0.2 * np.sqrt(np.sum(x * x) / n))
    b = -np.exp(np.sum(np.cos(2.0 * np.pi * x)) / n)
    return float(a + b + 20.0 + math.e)


def griewank(x):
    i = np.arange(1, x.size + 1)
    return float(1.0 + np.sum(x * x) / 4000.0 - np.prod(np.cos(x / np.sqrt(i))))


def penalized_1(x):
    n = x.size
    y = penalized_y(x)
    core = (
        10.0 * np.sin(np.pi * y[0]) ** 2
        + np.sum((y[:-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * y[1:]) ** 2))
        + (y[-1] - 1.0) ** 2
    )
    return float(np.pi / n * core + np.sum(penalty_u(x, 10.0, 100.0, 4.0)))


def penalized_2(x):
    core = (
        np.sin(3.0 * np.pi * x[0]) ** 2
        + np.sum((x[:-1] - 1.0) ** 2 * (1.0 + np.sin(3.0 * np.pi * x[1:]) ** 2))
        + (x[-1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * x[-1]) ** 2)
    )
    return float(0.1 * core + np.sum(penalty_u(x, 5.0, 100.0, 4.0)))


def foxholes(x):
    diff = x[:, None] - FOXHOLES_A
    j = np.arange(1, 26)
    return float(1.0 / (1.0 / 500.0 + np.sum(1.0 / (j + np.sum(diff**6, axis=0)))))


def kowalik(x):
    b = KOWALIK_B
    model = x[0] * (b * b + b * x[1]) / (b * b + b * x[2] + x[3])
    return float(np.sum((KOWALIK_A - model) ** 2))


def six_hump_camel(x):
    x1, x2 = x
    return float(4 * x1**2 - 2.1 * x1**4 + x1**6 / 3 + x1 * x2 - 4 * x2**2 + 4 * x2**4)


def branin(x):
    x1, x2 = x
    return float(
        (x2 - 5.1 / (4 * np.pi**2) * x1**2 + 5 / np.pi * x1 - 6) ** 2
        + 10 * (1 - 1 / (8 * np.pi)) * np.cos(x1)
        + 10
    )


def goldstein_price(x):
    x1, x2 = x
    a = 1 + (x1 + x2 + 1) ** 2 * (19 - 14 * x1 + 3 * x1**2 - 14 * x2 + 6 * x1 * x2 + 3 * x2**2)
    b = 30 + (2 * x1 - 3 * x2) ** 2 * (
        18 - 32 * x1 + 12 * x1**2 + 48 * x2 - 36 * x1 * x2 + 27 * x2**2
    )
    return float(a * b)


def _hartmann(x, a, c, p):
    return float(-np.sum(c * np.exp(-np.sum(a * (x - p) ** 2, axis=1))))


def hartmann3(x):
    return _hartmann(x, HARTMANN3_A, HARTMANN3_C, HARTMANN3_P)


def hartmann6(x):
    return _hartmann(x, HARTMANN6_A, HARTMANN6_C, HARTMANN6_P)


def _shekel(x, m):
    diff = x - SHEKEL_A[:m]
    return float(-np.sum(1.0 / (np.sum(diff * diff, axis=1) + SHEKEL_C[:m])))


# ---------------------------------------------------------------------------
# Specs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ObjectiveSpec:
    id: str
    name: str
    func: Callable = field(repr=False)
    lower: float | tuple[float, ...]
    upper: float | tuple[float, ...]
    known_min_value: float
    modality: str
    fixed_dim: Optional[int] = None
    known_min_position: Optional[Callable[[int], np.ndarray]] = field(default=None, repr=False)
    noisy: bool = False

    @property
    def index(self) -> int:
        return int(self.id[1:])

    def resolve_dim(self, dim: Optional[int] = None) -> int:
        """Return the dimensionality to use, checking it against the rule."""
        if self.fixed_dim is not None:
            if dim is not None and dim != self.fixed_dim:
                raise ValueError(f"{self.id} is fixed at n={self.fixed_dim}, got n={dim}")
            return self.fixed_dim
        dim = DEFAULT_DIM if dim is None else int(dim)
        if dim < 2:
            raise ValueError(f"{self.id} needs at least 2 dimensions, got {dim}")
        return dim

    def bounds(self, dim: Optional[int] = None) -> tuple[np.ndarray, np.ndarray]:
        n = self.resolve_dim(dim)
        # F5's box scales with n
        if self.id == "F5":
            return np.full(n, -float(n)), np.full(n, float(n))
        lo = np.broadcast_to(np.asarray(self.lower, dtype=float), (n,)).copy()
        hi = np.broadcast_to(np.asarray(self.upper, dtype=float), (n,)).copy()
        return lo, hi

    def optimum(self, dim: Optional[int] = None) -> Optional[np.ndarray]:
        if self.known_min_position is None:
            return None
        return np.asarray(self.known_min_position(self.resolve_dim(dim)), dtype=float)

    def __call__(self, x, rng: Optional[np.random.Generator] = None) -> float:
        return evaluate(self, x, rng)


_default_noise = np.random.default_rng()


def evaluate(spec: ObjectiveSpec, x, rng: Optional[np.random.Generator] = None) -> float:
    """Evaluate ``spec`` at ``x``.

    Points outside the box are accepted. ``rng`` feeds F7's noise term and is
    ignored elsewhere; without it F7 falls back to an unseeded generator.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"{spec.id}: expected a 1-D point, got shape {x.shape}")
    if spec.fixed_dim is not None and x.size != spec.fixed_dim:
        raise ValueError(f"{spec.id} is fixed at n={spec.fixed_dim}, got n={x.size}")
    if spec.fixed_dim is None and x.size < 2:
        raise ValueError(f"{spec.id} needs at least 2 dimensions, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{spec.id}: non-finite component in input")
    if spec.noisy:
        return spec.func(x, rng if rng is not None else _default_noise)
    return spec.func(x)


def _const(value):
    return lambda n: np.full(n, value, dtype=float)


def _point(*coords):
    return lambda n: np.array(coords, dtype=float)


_SUITE = (
    ObjectiveSpec("F1", "Sphere", sphere, -100, 100, 0.0, "unimodal", known_min_position=_const(0.0)),
    ObjectiveSpec("F2", "Schwefel's Problem 2.22", schwefel_2_22, -10, 10, 0.0, "unimodal",
                  known_min_position=_const(0.0)),
    ObjectiveSpec("F3", "Schwefel's Problem 1.2", schwefel_1_2, -100, 100, 0.0, "unimodal",
                  known_min_position=_const(0.0)),
    ObjectiveSpec("F4", "Schwefel's Problem 2.21", schwefel_2_21, -100, 100, 0.0, "unimodal",
                  known_min_position=_const(0.0)),
    ObjectiveSpec("F5", "Generalized Rosenbrock's Function", rosenbrock, -30, 30, 0.0, "unimodal",
                  known_min_position=_const(1.0)),
    ObjectiveSpec("F6", "Step Function", step, -100, 100, 0.0, "unimodal",
                  known_min_position=_const(-0.5)),
    ObjectiveSpec("F7", "Quartic Function i.e. Noise", quartic_noise, -1.28, 1.28, 0.0, "unimodal",
                  noisy=True),
    ObjectiveSpec("F8", "Generalized Schwefel's Problem 2.26", schwefel_2_26, -500, 500, -12569.5,
                  "multimodal", known_min_position=_const(420.9687)),
    ObjectiveSpec("F9", "Generalized Rastrigin's Function", rastrigin, -5.12, 5.12, 0.0, "multimodal",
                  known_min_position=_const(0.0)),
    ObjectiveSpec("F10", "Ackley's Function", ackley, -32.768, 32.768, 0.0, "multimodal",
                  known_min_position=_const(0.0)),
    ObjectiveSpec("F11", "Generalized Griewank Function", griewank, -600, 600, 0.0, "multimodal",
                  known_min_position=_const(0.0)),
    ObjectiveSpec("F12", "Generalized Penalized Function 1", penalized_1, -50, 50, 0.0, "multimodal",
                  known_min_position=_const(-1.0)),
    ObjectiveSpec("F13", "Generalized Penalized Function 2", penalized_2, -50, 50, 0.0, "multimodal",
                  known_min_position=_const(1.0)),
    ObjectiveSpec("F14", "Shekel's Foxholes Function", foxholes, -65.536, 65.536, 1.0,
                  "multimodal-fixed-dim", fixed_dim=2, known_min_position=_point(-32.0, -32.0)),
    ObjectiveSpec("F15", "Kowalik's Function", kowalik, -5, 5, 0.0003075, "multimodal-fixed-dim",
                  fixed_dim=4, known_min_position=_point(0.192833, 0.190836, 0.123117, 0.135766)),
    ObjectiveSpec("F16", "Six-Hump Camel-Back Function", six_hump_camel, -5, 5, -1.0316285,
                  "multimodal-fixed-dim", fixed_dim=2,
                  known_min_position=_point(0.08984201368301331, -0.7126564032704135)),
    ObjectiveSpec("F17", "Branin Function", branin, (-5.0, 0.0), (10.0, 15.0), 0.398,
                  "multimodal-fixed-dim", fixed_dim=2, known_min_position=_point(math.pi, 2.275)),
    ObjectiveSpec("F18", "Goldstein-Price Function", goldstein_price, -2, 2, 3.0,
                  "multimodal-fixed-dim", fixed_dim=2, known_min_position=_point(0.0, -1.0)),
    ObjectiveSpec("F19", "Hartman's Family Function 1", hartmann3, 0, 1, -3.86, "multimodal-fixed-dim",
                  fixed_dim=3, known_min_position=_point(0.114614, 0.555649, 0.852547)),
    ObjectiveSpec("F20", "Hartman's Family Function 2", hartmann6, 0, 1, -3.86, "multimodal-fixed-dim",
                  fixed_dim=6),
    ObjectiveSpec("F21", "Shekel's Family Function 1", lambda x: _shekel(x, 5), 0, 10, -10.1532,
                  "multimodal-fixed-dim", fixed_dim=4),
    ObjectiveSpec("F22", "Shekel's Family Function 2", lambda x: _shekel(x, 7), 0, 10, -10.4029,
                  "multimodal-fixed-dim", fixed_dim=4),
    ObjectiveSpec("F23", "Shekel's Family Function 3", lambda x: _shekel(x, 10), 0, 10, -10.5364,
                  "multimodal-fixed-dim", fixed_dim=4),
)

_BY_ID = {s.id: s for s in _SUITE}


def suite() -> tuple[ObjectiveSpec, ...]:
    """All 23 specs in F1..F23 order."""
    return _SUITE


def get(function_id: str) -> ObjectiveSpec:
    try:
        return _BY_ID[function_id.upper()]
    except KeyError:
        raise ValueError(f"unknown function id {function_id!r}; expected F1..F23") from None
