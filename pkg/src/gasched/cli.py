"""Command-line front end.

Four subcommands: ``gen`` writes a random task graph, ``solve`` runs the
genetic search on a graph file, ``verify`` compares the search result
against the exhaustive optimum on cap-sized instances, ``bench`` times the
sequential and parallel engines over a named suite and writes the CSV
report.

Primary output is stdout as ``key=value`` lines, one fact per line, after a
``#``-prefixed header restating the effective configuration; errors go to
stderr only. Exit codes: 0 success, 1 bad flags or parameters, 2 validation
or infeasibility (bad graph, oracle cap, nonzero verify gap), 3 I/O
failure. Identical flags and inputs give identical primary output; wall
times and communication-cost estimates are measurements and exempt.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

from . import analysis, backend, engine, evaluator, taskgraph
from .errors import ConfigError, GraphError, OracleCapError


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _default_workers() -> int:
    return os.cpu_count() or 1


def build_parser() -> _Parser:
    parser = _Parser(prog="gasched", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random task graph file")
    p.add_argument("--tasks", type=int, required=True, help="number of tasks")
    p.add_argument("--edge-prob", type=float, required=True,
                   help="probability of a precedence edge between task pairs")
    p.add_argument("--tmin", type=int, required=True, help="minimum task time")
    p.add_argument("--tmax", type=int, required=True, help="maximum task time")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output graph file")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="run the genetic search on a graph file")
    p.add_argument("--graph", required=True, help="input graph file")
    p.add_argument("--procs", type=int, required=True, help="processor count")
    p.add_argument("--pop", type=int, required=True, help="population size")
    p.add_argument("--gens", type=int, required=True, help="generation count")
    p.add_argument("--pc", type=float, default=0.8, help="crossover probability")
    p.add_argument("--pm", type=float, default=0.02, help="mutation probability")
    p.add_argument("--workers", type=int, default=None,
                   help="evaluation workers in par mode (default: cpu count)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("seq", "par"), default="par")
    p.add_argument("--gantt", help="also write the schedule as CSV")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="compare the search against the exact optimum")
    p.add_argument("--graph", required=True, help="input graph file")
    p.add_argument("--procs", type=int, required=True, help="processor count")
    p.add_argument("--pop", type=int, default=50)
    p.add_argument("--gens", type=int, default=200)
    p.add_argument("--pc", type=float, default=0.8)
    p.add_argument("--pm", type=float, default=0.02)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time both engines over a suite, write CSV")
    p.add_argument("--suite", choices=analysis.SUITE_NAMES, required=True)
    p.add_argument("--scale", type=float, default=1.0,
                   help="multiply population/generation sizes (default 1.0)")
    p.add_argument("--reps", type=int, default=10, help="repetitions per cell")
    p.add_argument("--out", required=True, help="output CSV file")
    p.set_defaults(func=cmd_bench)
    return parser


def _read_graph(path: str) -> taskgraph.TaskGraph:
    with open(path) as fh:
        return taskgraph.parse_graph(fh.read())


def cmd_gen(args) -> int:
    graph = taskgraph.random_dag(args.tasks, args.edge_prob, args.tmin, args.tmax, args.seed)
    with open(args.out, "w") as fh:
        fh.write(taskgraph.serialize_graph(graph))
    print(f"# seed={args.seed} edge_prob={args.edge_prob} "
          f"tmin={args.tmin} tmax={args.tmax} out={args.out}")
    print(f"tasks={graph.n_tasks}")
    print(f"edges={len(graph.edges)}")
    return 0


def cmd_solve(args) -> int:
    graph = _read_graph(args.graph)
    workers = 1 if args.mode == "seq" else (args.workers or _default_workers())
    cfg = engine.GAConfig(
        pop_size=args.pop, generations=args.gens, n_procs=args.procs,
        crossover_prob=args.pc, mutation_prob=args.pm,
        n_workers=workers, seed=args.seed,
    )
    result = engine.run(graph, cfg)
    cp, work = taskgraph.lower_bounds(graph, args.procs)
    print(f"# mode={args.mode} pop={cfg.pop_size} gens={cfg.generations} "
          f"procs={cfg.n_procs} pc={cfg.crossover_prob} pm={cfg.mutation_prob} "
          f"workers={cfg.n_workers} seed={cfg.seed} backend={backend.active()}")
    print(f"best_makespan={result.makespan}")
    print(f"critical_path={cp}")
    print(f"work_bound={work}")
    print(f"generations_run={result.generations_run}")
    print(f"evaluations={result.evaluations}")
    print(f"wall_seconds={result.wall_seconds:.6f}")
    if args.gantt:
        rows = evaluator.gantt_rows(graph, result.best, args.procs)
        with open(args.gantt, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["task", "proc", "start", "finish"])
            writer.writerows(rows)
        print(f"gantt={args.gantt}")
    return 0


def cmd_verify(args) -> int:
    graph = _read_graph(args.graph)
    optimal = analysis.exhaustive_optimal(graph, args.procs)
    cfg = engine.GAConfig(
        pop_size=args.pop, generations=args.gens, n_procs=args.procs,
        crossover_prob=args.pc, mutation_prob=args.pm,
        n_workers=args.workers, seed=args.seed,
    )
    result = engine.run(graph, cfg)
    gap = result.makespan - optimal
    print(f"# pop={cfg.pop_size} gens={cfg.generations} procs={cfg.n_procs} "
          f"pc={cfg.crossover_prob} pm={cfg.mutation_prob} "
          f"workers={cfg.n_workers} seed={cfg.seed}")
    print(f"oracle={optimal}")
    print(f"ga_best={result.makespan}")
    print(f"gap={gap}")
    return 0 if gap == 0 else 2


def cmd_bench(args) -> int:
    cells = analysis.make_suite(args.suite, args.scale)
    report = analysis.run_benchmark(
        cells, reps=args.reps,
        progress=lambda msg: print(msg, file=sys.stderr),
    )
    report.write_csv(args.out)
    print(f"# suite={args.suite} scale={args.scale} reps={args.reps} "
          f"backend={backend.active()} out={args.out}")
    for i, cell in enumerate(report.cells):
        seq_row, par_row = report.rows[2 * i], report.rows[2 * i + 1]
        print(f"cell={cell.name} seq_ms={seq_row['mean_wall_ms']} "
              f"par_ms={par_row['mean_wall_ms']} "
              f"speedup={par_row['measured_speedup']} "
              f"trend={par_row['trend_flag']}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (GraphError, OracleCapError) as exc:
        print(f"gasched: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"gasched: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"gasched: {exc}", file=sys.stderr)
        return 3


def entry():
    raise SystemExit(main())
