"""Experiment matrices, persistence and report generation."""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from . import benchmarks, chaos, optimizers, stats

log = logging.getLogger(__name__)

RECORD_FIELDS = (
    "algorithm",
    "function",
    "dim",
    "trial_index",
    "sub_seed",
    "iterations",
    "swarm_mode",
    "best_cost",
    "evaluations",
    "best_position",
)
FIXTURE_TRIALS = 30
FIXTURE_SIG_FIGS = 4
# report column order
COLUMN_ORDER = (
    "cqdds", "sca", "dfa", "alo", "woa", "fa", "qpso", "pso-damped", "pso-canonical", "qdds-uniform",
)


def fmt(x) -> str:
    """Shortest round-trip decimal for floats, plain text otherwise."""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


@dataclass
class ExperimentConfig:
    algorithms: list[str] = field(default_factory=lambda: ["cqdds"])
    functions: list[str] = field(default_factory=lambda: ["F1"])
    dim: int = benchmarks.DEFAULT_DIM
    iterations: int = 1000
    trials: int = 30
    master_seed: int = 0
    workers: int = 1
    swarm_mode: str = "one-agent"
    output_dir: str = "results"
    format: str = "csv"

    def validate(self) -> "ExperimentConfig":
        if self.iterations < 3:
            raise ValueError("iterations must be >= 3")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.swarm_mode not in optimizers.SWARM_MODES:
            raise ValueError(f"swarm_mode must be one of {optimizers.SWARM_MODES}")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        for a in self.algorithms:
            if a in optimizers.EXTERNAL_ALGORITHMS:
                raise ValueError(f"{a} is an external reference algorithm and cannot be run")
            if a not in optimizers.ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}")
        self.functions = [benchmarks.get(f).id for f in self.functions]
        return self


_LIST_KEYS = {"algorithms", "functions"}
_INT_KEYS = {"dim", "iterations", "trials", "master_seed", "workers"}


def _coerce(key: str, value):
    if key in _LIST_KEYS:
        if isinstance(value, str):
            value = [v.strip() for v in value.split(",") if v.strip()]
        out = []
        for v in value:
            out.extend(s.strip() for s in str(v).split(",") if s.strip())
        if key == "functions" and [v.lower() for v in out] == ["all"]:
            out = [s.id for s in benchmarks.suite()]
        return out
    if key in _INT_KEYS:
        return int(value)
    return str(value)


def parse_config_text(text: str) -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    known = {f.name for f in fields(ExperimentConfig)}
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        out[key] = _coerce(key, value)
    return out


def make_config(config_file: Optional[str] = None, **overrides) -> ExperimentConfig:
    values = {}
    if config_file:
        values.update(parse_config_text(Path(config_file).read_text()))
    for k, v in overrides.items():
        if v is not None:
            values[k] = _coerce(k, v)
    return ExperimentConfig(**values).validate()


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------


def sub_seed(master_seed: int, algorithm: str, function: str, trial_index: int) -> int:
    """64-bit seed from BLAKE2b over ``"master|algorithm|function|trial"``."""
    key = f"{master_seed}|{algorithm}|{function}|{trial_index}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


@dataclass
class TrialRecord:
    algorithm: str
    function: str
    dim: int
    trial_index: int
    sub_seed: int
    iterations: int
    swarm_mode: str
    best_cost: float
    evaluations: int
    best_position: np.ndarray
    wall_time_ms: float = 0.0
    trajectory: Optional[list] = field(default=None, repr=False, compare=False)

    @property
    def key(self) -> str:
        return f"{self.algorithm}-{self.function}-{self.trial_index}"

    def sort_key(self):
        return (self.algorithm, benchmarks.get(self.function).index, self.trial_index)


@dataclass(frozen=True)
class _Task:
    algorithm: str
    function: str
    dim: int
    trial_index: int
    seed: int
    iterations: int
    swarm_mode: str


def _run_task(task: _Task) -> TrialRecord:
    spec = benchmarks.get(task.function)
    t0 = time.perf_counter()
    res = optimizers.run(
        task.algorithm, spec, task.iterations, task.seed, dim=task.dim, swarm_mode=task.swarm_mode
    )
    return TrialRecord(
        algorithm=task.algorithm,
        function=task.function,
        dim=res.dim,
        trial_index=task.trial_index,
        sub_seed=task.seed,
        iterations=task.iterations,
        swarm_mode=task.swarm_mode,
        best_cost=res.best_cost,
        evaluations=res.evaluations,
        best_position=res.best_position,
        wall_time_ms=(time.perf_counter() - t0) * 1e3,
        trajectory=res.trajectory,
    )


def build_tasks(config: ExperimentConfig) -> list[_Task]:
    tasks = []
    for algo in config.algorithms:
        for fid in config.functions:
            spec = benchmarks.get(fid)
            dim = spec.resolve_dim(None if spec.fixed_dim else config.dim)
            for trial in range(config.trials):
                seed = sub_seed(config.master_seed, algo, spec.id, trial)
                tasks.append(_Task(algo, spec.id, dim, trial, seed, config.iterations, config.swarm_mode))
    seeds = [t.seed for t in tasks]
    if len(set(seeds)) != len(seeds):
        raise RuntimeError("sub-seed collision in experiment matrix")
    return tasks


def run_matrix(config: ExperimentConfig) -> list[TrialRecord]:
    """Run every (algorithm, function, trial) cell; output order is canonical."""
    config.validate()
    tasks = build_tasks(config)
    log.info("running %d trials on %d worker(s)", len(tasks), config.workers)
    if config.workers == 1:
        records = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * config.workers))))
    return sorted(records, key=TrialRecord.sort_key)


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------


def _record_row(rec: TrialRecord) -> dict:
    return {
        "algorithm": rec.algorithm,
        "function": rec.function,
        "dim": rec.dim,
        "trial_index": rec.trial_index,
        "sub_seed": rec.sub_seed,
        "iterations": rec.iterations,
        "swarm_mode": rec.swarm_mode,
        "best_cost": float(rec.best_cost),
        "evaluations": rec.evaluations,
        "best_position": [float(v) for v in rec.best_position],
    }


def write_records(records: Sequence[TrialRecord], out_dir, format: str = "csv") -> Path:
    """Write records (sorted canonically) and a separate timings file.

    Wall times live in ``timings.csv`` so the records file stays
    byte-reproducible.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records = sorted(records, key=TrialRecord.sort_key)
    if format == "json":
        path = out / "records.json"
        path.write_text(json.dumps([_record_row(r) for r in records], indent=1) + "\n")
    else:
        path = out / "records.csv"
        with open(path, "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(RECORD_FIELDS)
            for r in records:
                row = _record_row(r)
                row["best_position"] = " ".join(fmt(v) for v in row["best_position"])
                w.writerow([fmt(row[k]) for k in RECORD_FIELDS])
    with open(out / "timings.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["algorithm", "function", "trial_index", "wall_time_ms"])
        for r in records:
            w.writerow([r.algorithm, r.function, r.trial_index, fmt(round(r.wall_time_ms, 3))])
    return path


def _from_row(row: dict) -> TrialRecord:
    pos = row["best_position"]
    if isinstance(pos, str):
        pos = [float(v) for v in pos.split()]
    return TrialRecord(
        algorithm=row["algorithm"],
        function=row["function"],
        dim=int(row["dim"]),
        trial_index=int(row["trial_index"]),
        sub_seed=int(row["sub_seed"]),
        iterations=int(row["iterations"]),
        swarm_mode=row["swarm_mode"],
        best_cost=float(row["best_cost"]),
        evaluations=int(row["evaluations"]),
        best_position=np.asarray(pos, dtype=float),
    )


def read_records(path) -> list[TrialRecord]:
    path = Path(path)
    if path.is_dir():
        path = path / "records.csv" if (path / "records.csv").exists() else path / "records.json"
    if path.suffix == ".json":
        return [_from_row(r) for r in json.loads(path.read_text())]
    with open(path, newline="") as f:
        return [_from_row(r) for r in csv.DictReader(f)]


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass
class ComparisonReport:
    reference: Optional[str]
    algorithms: list[str]
    functions: list[str]
    summaries: dict  # (function, algorithm) -> SampleSummary
    effects: dict  # (function, competitor) -> EffectSizes, reference vs competitor
    wtl: dict  # metric -> algorithm -> {win, tie, loss}
    ranks: dict  # metric -> algorithm -> rank dict
    precision: dict  # (function, algorithm) -> list of (fraction, threshold, count)
    gaps: list  # (function, algorithm, reason)


def _ordered(items: Iterable[str], preferred: Sequence[str]) -> list[str]:
    items = list(dict.fromkeys(items))
    rank = {a: i for i, a in enumerate(preferred)}
    return sorted(items, key=lambda a: (rank.get(a, len(rank)), a))


def _function_order(fids: Iterable[str]) -> list[str]:
    return sorted(set(fids), key=lambda f: benchmarks.get(f).index)


def build_report(
    summaries: dict,
    raw_costs: Optional[dict] = None,
    reference: Optional[str] = None,
    sig_figs: Optional[int] = None,
    gaps: Optional[list] = None,
) -> ComparisonReport:
    algos = _ordered((a for _, a in summaries), COLUMN_ORDER)
    funcs = _function_order(f for f, _ in summaries)
    gaps = list(gaps or [])
    for f in funcs:
        for a in algos:
            if (f, a) not in summaries and not any(g[0] == f and g[1] == a for g in gaps):
                gaps.append((f, a, "missing"))

    if reference is None and algos:
        reference = "cqdds" if "cqdds" in algos else algos[0]

    effects = {}
    wtl, ranks = {}, {}
    if len(algos) >= 2:
        for f in funcs:
            ref = summaries.get((f, reference))
            if ref is None:
                continue
            for a in algos:
                if a == reference or (f, a) not in summaries:
                    continue
                effects[(f, a)] = stats.effect_sizes(ref, summaries[(f, a)])
        complete = [f for f in funcs if all((f, a) in summaries for a in algos)]
        for metric, attr in (("mean", "mean"), ("best", "min"), ("std", "std")):
            cells = [{a: getattr(summaries[(f, a)], attr) for a in algos} for f in complete]
            if cells:
                wtl[metric] = stats.tally(cells, sig_figs=sig_figs)
                ranks[metric] = stats.average_ranks(wtl[metric])

    precision = {}
    for (f, a), costs in (raw_costs or {}).items():
        precision[(f, a)] = stats.precision_curve(costs)

    return ComparisonReport(reference, algos, funcs, summaries, effects, wtl, ranks, precision, gaps)


def report(records: Sequence[TrialRecord], reference: Optional[str] = None) -> ComparisonReport:
    """Statistics from raw trial records; exact comparisons."""
    costs: dict = {}
    for r in records:
        costs.setdefault((r.function, r.algorithm), []).append(r.best_cost)
    summaries, gaps = {}, []
    for key, c in costs.items():
        if len(c) < 2:
            gaps.append((*key, "fewer than 2 trials"))
            continue
        summaries[key] = stats.summarize(c)
    return build_report(summaries, raw_costs=costs, reference=reference, gaps=gaps)


def fixture_path() -> Path:
    return Path(str(resources.files("cqdds") / "data" / "reference-tables.csv"))


def load_fixture(path=None, n: int = FIXTURE_TRIALS) -> dict:
    """Read a ``function,algorithm,mean,best,std`` table into summaries."""
    path = Path(path) if path else fixture_path()
    out = {}
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            out[(row["function"], row["algorithm"])] = stats.SampleSummary(
                mean=float(row["mean"]), std=float(row["std"]), min=float(row["best"]), n=n
            )
    return out


def fixture_report(path=None, reference: str = "cqdds") -> ComparisonReport:
    """Report from a summary table; ties judged at 4 significant figures."""
    return build_report(load_fixture(path), reference=reference, sig_figs=FIXTURE_SIG_FIGS)


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def write_report(rep: ComparisonReport, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def emit(name, header, rows):
        p = out / name
        _write_csv(p, header, rows)
        written.append(p)

    emit(
        "summary.csv",
        ["function", "algorithm", "mean", "best", "std", "n"],
        [
            (f, a, s.mean, s.min, s.std, s.n)
            for f in rep.functions
            for a in rep.algorithms
            if (s := rep.summaries.get((f, a))) is not None
        ],
    )
    eff_keys = [(f, a) for f in rep.functions for a in rep.algorithms if (f, a) in rep.effects]
    emit(
        "ttest.csv",
        ["function", "reference", "competitor", "t_value", "significant"],
        [(f, rep.reference, a, rep.effects[(f, a)].t_value, rep.effects[(f, a)].significant) for f, a in eff_keys],
    )
    emit(
        "effects.csv",
        ["function", "reference", "competitor", "cohens_d", "hedges_g_textbook", "hedges_g_papermode"],
        [
            (f, rep.reference, a, e.cohens_d, e.hedges_g_textbook, e.hedges_g_papermode)
            for f, a in eff_keys
            for e in [rep.effects[(f, a)]]
        ],
    )
    emit(
        "wtl.csv",
        ["metric", "algorithm", "win", "tie", "loss"],
        [(m, a, c["win"], c["tie"], c["loss"]) for m, t in rep.wtl.items() for a, c in t.items()],
    )
    emit(
        "ranks.csv",
        ["metric", "algorithm", "win_rank", "tie_rank", "loss_rank", "average_rank"],
        [
            (m, a, r["win_rank"], r["tie_rank"], r["loss_rank"], r["average_rank"])
            for m, t in rep.ranks.items()
            for a, r in t.items()
        ],
    )
    emit(
        "precision.csv",
        ["function", "algorithm", "fraction", "threshold", "count"],
        [
            (f, a, frac, thr, cnt)
            for f in rep.functions
            for a in rep.algorithms
            for frac, thr, cnt in rep.precision.get((f, a), [])
        ],
    )
    if rep.gaps:
        emit("gaps.csv", ["function", "algorithm", "reason"], rep.gaps)
        for g in rep.gaps:
            log.warning("report gap: %s/%s (%s)", *g)
    return written


# ---------------------------------------------------------------------------
# Trajectories and chaos dumps
# ---------------------------------------------------------------------------


def replay(record: TrialRecord) -> optimizers.RunResult:
    """Re-run a record from its sub-seed; the result must match bit-for-bit."""
    res = optimizers.run(
        record.algorithm,
        benchmarks.get(record.function),
        record.iterations,
        record.sub_seed,
        dim=record.dim,
        swarm_mode=record.swarm_mode,
    )
    if res.best_cost != record.best_cost:
        raise RuntimeError(
            f"replay of {record.key} gave {res.best_cost!r}, record says {record.best_cost!r}"
        )
    return res


def export_trajectory(trajectory, path) -> Path:
    """CSV of ``iteration,cost,x1,x2``; an empty trajectory gives a header only."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    _write_csv(
        path,
        ["iteration", "cost", "x1", "x2"],
        [(p.iteration, float(p.cost), p.x1, p.x2) for p in trajectory or []],
    )
    return path


def dump_chaos(seed: int, n: int, path, rho0: float = chaos.DEFAULT_RHO0) -> Path:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    weights = chaos.sample_sequence(seed, n, rho0)
    _write_csv(path, ["index", "weight"], enumerate(weights.tolist()))
    return path


def check_writable(out_dir) -> None:
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ValueError(f"output directory {out} is not writable: {exc}") from exc
    if not os.access(out, os.W_OK):
        raise ValueError(f"output directory {out} is not writable")
