import math

import numpy as np
import pytest
from scipy.integrate import quad

from cqdds import chaos


def _state(rho, t, seed=0):
    s = chaos.init(np.random.default_rng(seed), 0.5)
    s.rho, s.t = rho, t
    return s


def test_init_examples():
    s = chaos.init(np.random.default_rng(0), 0.7)
    assert (s.rho, s.t, s.reseed_count) == (0.7, 1, 0)
    assert chaos.init(np.random.default_rng(0), 0.25).rho == 0.25


@pytest.mark.parametrize("rho0", [1.0, 0.0, -0.3, 1.5])
def test_init_rejects_boundary(rho0):
    with pytest.raises(ValueError):
        chaos.init(np.random.default_rng(0), rho0)


def test_fixed_point_one_is_reseeded():
    s = _state(1.0, 7)
    w = chaos.next_weight(s)
    assert 0.05 < w < 0.95
    assert s.reseed_count == 1
    assert s.t == 8


def test_t2_half_folds_to_half():
    # arccos(0.5) = pi/3, cos(2 pi / 3) = -0.5
    s = _state(0.5, 2)
    assert chaos.next_weight(s) == pytest.approx(0.5, abs=1e-12)
    assert s.reseed_count == 0


def test_t3_half_hits_minus_one():
    s = _state(0.5, 3)
    w = chaos.next_weight(s)
    assert s.reseed_count == 1
    assert 0.05 < w < 0.95


def test_t_increments_by_one():
    s = chaos.init(np.random.default_rng(0), 0.7)
    for expected in range(2, 50):
        s.next()
        assert s.t == expected


def test_sample_sequence_range_and_determinism():
    a = chaos.sample_sequence(42, 1000)
    assert a.shape == (1000,)
    assert np.all((a >= 0) & (a <= 1))
    assert np.array_equal(a, chaos.sample_sequence(42, 1000))
    # the seed only enters through reseeds, which a generic orbit never triggers
    assert np.array_equal(a, chaos.sample_sequence(43, 1000))
    assert _state(1.0, 1, seed=1).next() != _state(1.0, 1, seed=2).next()
    assert not np.array_equal(a, chaos.sample_sequence(42, 1000, rho0=0.3))


def test_sample_sequence_rejects_empty():
    with pytest.raises(ValueError):
        chaos.sample_sequence(0, 0)


def _folded_arcsine_mass(a, b):
    return quad(lambda x: 2 / (math.pi * math.sqrt(1 - x * x)), a, b)[0]


def test_density_oracle_values():
    edge = _folded_arcsine_mass(0.9, 1.0)
    mid = _folded_arcsine_mass(0.45, 0.55)
    assert edge == pytest.approx(0.2871, abs=1e-3)
    assert mid == pytest.approx(0.0736, abs=1e-3)
    assert edge >= 2 * mid


@pytest.fixture(scope="module")
def long_sequence():
    return chaos.sample_sequence(2024, 100_000)


def test_density_shape(long_sequence):
    w = long_sequence
    edge = np.count_nonzero((w >= 0.9) & (w <= 1.0))
    mid = np.count_nonzero((w >= 0.45) & (w <= 0.55))
    assert edge >= 2 * mid
    # empirical masses sit near the invariant density
    assert edge / w.size == pytest.approx(_folded_arcsine_mass(0.9, 1.0), abs=0.02)


def test_no_long_runs(long_sequence):
    w = long_sequence
    run = longest = 1
    for a, b in zip(w[:-1], w[1:]):
        run = run + 1 if a == b else 1
        longest = max(longest, run)
    assert longest <= 3
