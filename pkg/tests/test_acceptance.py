"""Acceptance gate. Each criterion prints one PASS/FAIL line.

Tolerances are fixed here and must not be relaxed to turn a criterion green.
"""

import time

import numpy as np
import pytest

from cqdds import benchmarks, chaos, harness, optimizers, stats
from cqdds.delta import R_CEIL, R_FLOOR, delta_of_r, invert_delta

OPTIMUM_POINT_IDS = ("F1", "F5", "F6", "F8", "F9", "F10", "F11", "F16", "F17", "F18")


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail

    return emit


def test_criterion_1_table_regression(verdict):
    t0 = time.perf_counter()
    rep = harness.fixture_report()
    elapsed = time.perf_counter() - t0
    t_f1 = rep.effects[("F1", "sca")].t_value
    t_f4 = rep.effects[("F4", "sca")].t_value
    d_f1 = rep.effects[("F1", "sca")].cohens_d
    g_f1 = rep.effects[("F1", "sca")].hedges_g_papermode
    wtl = rep.wtl["mean"]["cqdds"]
    rank = rep.ranks["mean"]["cqdds"]["average_rank"]
    checks = [
        abs(t_f1 - -1.8707) <= 5e-4,
        abs(t_f4 - -8.6470) <= 5e-4,
        abs(d_f1 - -0.483) <= 5e-4,
        abs(g_f1 - -0.6716) <= 5e-4,
        (wtl["win"], wtl["tie"], wtl["loss"]) == (10, 0, 13),
        abs(rank - 2.333) <= 1e-3,
        elapsed < 1.0,
    ]
    verdict(
        1,
        all(checks),
        f"t(F1)={t_f1:.5f} t(F4)={t_f4:.5f} d={d_f1:.5f} g={g_f1:.5f} "
        f"wtl={wtl['win']}/{wtl['tie']}/{wtl['loss']} rank={rank:.4f} in {elapsed:.3f}s",
    )


def test_criterion_2_benchmark_optima(verdict):
    misses = []
    for fid in OPTIMUM_POINT_IDS:
        spec = benchmarks.get(fid)
        value = benchmarks.evaluate(spec, spec.optimum())
        tol = 0.1 if fid == "F8" else 1e-4
        err = abs(value - spec.known_min_value)
        if not err < tol:
            misses.append(f"{fid}: f(x*)={value:.7g} vs {spec.known_min_value} (|err|={err:.3g} > {tol})")
    verdict(2, not misses, "; ".join(misses) or f"{len(OPTIMUM_POINT_IDS)} optima within tolerance")


def test_criterion_3_delta_inversion(verdict):
    r = np.random.default_rng(20240).uniform(R_FLOOR, R_CEIL, 1000)
    err = float(np.max(np.abs(invert_delta(delta_of_r(r, 5.0), 5.0) - r)))
    verdict(3, err < 1e-9, f"max roundtrip error {err:.3g} over 1000 points")


def test_criterion_4_h1_sweep(verdict):
    t0 = time.perf_counter()
    violations, runs = [], 0
    for algo in optimizers.ALGORITHMS:
        for spec in benchmarks.suite():
            for seed in range(3):
                runs += 1
                try:
                    optimizers.run(algo, spec, 200, seed)
                except (optimizers.MonotonicityViolation, optimizers.BoundsViolation) as exc:
                    violations.append(f"{algo}/{spec.id}/{seed}: {exc}")
    elapsed = time.perf_counter() - t0
    verdict(
        4,
        not violations and elapsed < 60,
        f"{runs} runs, {len(violations)} violations, {elapsed:.1f}s"
        + (f"; first: {violations[0]}" if violations else ""),
    )


def test_criterion_5_determinism(tmp_path, verdict):
    def cfg(workers):
        return harness.ExperimentConfig(
            algorithms=["cqdds", "qpso"], functions=["F1", "F9", "F18"], trials=5,
            iterations=1000, master_seed=11, workers=workers,
        ).validate()

    t0 = time.perf_counter()
    a = harness.write_records(harness.run_matrix(cfg(1)), tmp_path / "w1")
    b = harness.write_records(harness.run_matrix(cfg(4)), tmp_path / "w4")
    elapsed = time.perf_counter() - t0
    same = a.read_bytes() == b.read_bytes()
    verdict(5, same and elapsed < 30, f"records.csv identical at 1 and 4 workers: {same}, {elapsed:.1f}s")


def test_criterion_6_chaos_distribution(verdict):
    w = chaos.sample_sequence(6, 100_000)
    in_range = bool(np.all((w >= 0) & (w <= 1)))
    edge = int(np.count_nonzero((w >= 0.9) & (w <= 1.0)))
    mid = int(np.count_nonzero((w >= 0.45) & (w <= 0.55)))
    longest = run = 1
    for i in range(1, w.size):
        run = run + 1 if w[i] == w[i - 1] else 1
        longest = max(longest, run)
    verdict(
        6,
        in_range and edge >= 2 * mid and longest <= 3,
        f"in [0,1]: {in_range}; [0.9,1]={edge} vs [0.45,0.55]={mid}; longest repeat {longest}",
    )


def test_criterion_7_directional_reproduction(verdict):
    spec = benchmarks.get("F1")
    t0 = time.perf_counter()
    results = [
        optimizers.run("cqdds", spec, 1000, harness.sub_seed(0, "cqdds", "F1", t), dim=30)
        for t in range(30)
    ]
    elapsed = time.perf_counter() - t0
    initial = float(np.median([r.initial_best_cost for r in results]))
    final = float(np.median([r.best_cost for r in results]))
    orders = float(np.log10(initial / final))
    counts = [c for _, _, c in stats.precision_curve([r.best_cost for r in results])]
    monotone = all(b >= a for a, b in zip(counts, counts[1:]))
    verdict(
        7,
        orders >= 3 and monotone and elapsed < 120,
        f"median post-init {initial:.4g} -> final {final:.4g} ({orders:.2f} orders, need >= 3); "
        f"precision curve non-decreasing: {monotone}; reference mean 1.1956e-6; {elapsed:.1f}s",
    )


def test_criterion_8_stats_properties(verdict):
    rng = np.random.default_rng(8)
    failures = 0
    for _ in range(1000):
        a = stats.SampleSummary(rng.normal(0, 100), rng.uniform(1e-3, 50), 0.0, 30)
        b = stats.SampleSummary(rng.normal(0, 100), rng.uniform(1e-3, 50), 0.0, 30)
        c = rng.uniform(1e-3, 1e3)
        ab, ba = stats.effect_sizes(a, b), stats.effect_sizes(b, a)
        sc = stats.effect_sizes(a.scaled(c), b.scaled(c))
        ok = (
            ab.t_value == -ba.t_value
            and ab.cohens_d == -ba.cohens_d
            and ab.hedges_g_textbook == -ba.hedges_g_textbook
            and np.isclose(sc.t_value, ab.t_value, rtol=1e-9)
            and np.isclose(sc.cohens_d, ab.cohens_d, rtol=1e-9)
            and np.isclose(sc.hedges_g_textbook, ab.hedges_g_textbook, rtol=1e-9)
            and np.isclose(ab.hedges_g_textbook, ab.cohens_d, rtol=1e-12)
        )
        failures += not ok
    verdict(8, failures == 0, f"{failures} failures over 1000 random summary pairs")
