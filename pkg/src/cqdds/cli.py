"""Command-line entry point: ``cqdds run | report | trajectory | dump-chaos``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import harness, optimizers


def _add_run(sub):
    p = sub.add_parser("run", help="execute an algorithm x function x trial matrix")
    p.add_argument("--config", help="flat 'key = value' config file; flags override it")
    p.add_argument("--algo", dest="algorithms", action="append",
                   help=f"algorithm id(s), comma separated or repeated: {', '.join(optimizers.ALGORITHMS)}")
    p.add_argument("--function", dest="functions", action="append",
                   help="function id(s) F1..F23, comma separated or repeated, or 'all'")
    p.add_argument("--dim", type=int, help="dimensionality of variable-dim functions (default 30)")
    p.add_argument("--iters", dest="iterations", type=int, help="iterations per run (default 1000)")
    p.add_argument("--trials", type=int, help="independent trials per cell (default 30)")
    p.add_argument("--seed", dest="master_seed", type=int, help="master seed (default 0)")
    p.add_argument("--workers", type=int, help="parallel worker processes (default 1)")
    p.add_argument("--swarm-mode", choices=optimizers.SWARM_MODES)
    p.add_argument("--out", dest="output_dir", help="output directory (default results)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--report", action="store_true", help="also write the comparison report")
    p.set_defaults(func=cmd_run)


def _add_report(sub):
    p = sub.add_parser("report", help="comparison statistics from run records or a summary table")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--records", help="records.csv / records.json or a run directory")
    src.add_argument("--fixture", nargs="?", const="", metavar="CSV",
                     help="function,algorithm,mean,best,std table (bundled reference tables if no path)")
    p.add_argument("--reference", help="algorithm the others are compared against (default cqdds)")
    p.add_argument("--out", default="report", help="output directory")
    p.set_defaults(func=cmd_report)


def _add_trajectory(sub):
    p = sub.add_parser("trajectory", help="export the gbest path of recorded runs")
    p.add_argument("--records", required=True, help="records file or run directory")
    p.add_argument("--key", action="append",
                   help="record key algorithm-function-trial (e.g. cqdds-F1-0); default all")
    p.add_argument("--out", default="trajectories", help="output directory")
    p.set_defaults(func=cmd_trajectory)


def _add_dump_chaos(sub):
    p = sub.add_parser("dump-chaos", help="write a Chebyshev weight sequence as CSV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--rho0", type=float, default=0.7)
    p.add_argument("--out", default="chaos.csv", help="output CSV path")
    p.set_defaults(func=cmd_dump_chaos)


def cmd_run(args) -> int:
    config = harness.make_config(
        args.config,
        algorithms=args.algorithms,
        functions=args.functions,
        dim=args.dim,
        iterations=args.iterations,
        trials=args.trials,
        master_seed=args.master_seed,
        workers=args.workers,
        swarm_mode=args.swarm_mode,
        output_dir=args.output_dir,
        format=args.format,
    )
    harness.check_writable(config.output_dir)
    records = harness.run_matrix(config)
    path = harness.write_records(records, config.output_dir, config.format)
    print(f"wrote {len(records)} records to {path}")
    if args.report:
        for p in harness.write_report(harness.report(records), config.output_dir):
            print(f"wrote {p}")
    return 0


def cmd_report(args) -> int:
    if args.records:
        rep = harness.report(harness.read_records(args.records), reference=args.reference)
    else:
        rep = harness.fixture_report(args.fixture or None, reference=args.reference or "cqdds")
    for p in harness.write_report(rep, args.out):
        print(f"wrote {p}")
    return 0


def cmd_trajectory(args) -> int:
    records = harness.read_records(args.records)
    wanted = set(args.key or [])
    if wanted:
        records = [r for r in records if r.key in wanted]
        missing = wanted - {r.key for r in records}
        if missing:
            raise ValueError(f"no record(s) with key {', '.join(sorted(missing))}")
    out = Path(args.out)
    for rec in records:
        res = harness.replay(rec)
        p = harness.export_trajectory(res.trajectory, out / f"trajectory-{rec.key}.csv")
        print(f"wrote {p}")
    return 0


def cmd_dump_chaos(args) -> int:
    p = harness.dump_chaos(args.seed, args.n, args.out, args.rho0)
    print(f"wrote {p}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cqdds", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run(sub)
    _add_report(sub)
    _add_trajectory(sub)
    _add_dump_chaos(sub)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, NotImplementedError, FileNotFoundError) as exc:
        print(f"cqdds: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
