"""Schedule decoding and fitness evaluation.

Two independent decode routes exist on purpose. ``decode`` runs an
event-driven simulation of the processor queues and returns full start and
finish times for one chromosome; it is the reference semantics and the basis
for schedule output. ``evaluate_population`` runs the array kernel over
stacked chromosomes and returns only makespans and fitness; it is the hot
path of the search. Tests hold the two routes equal on random chromosomes.

``evaluate_population`` is also the only parallel phase of the search: the
population is cut into contiguous near-equal row slices, worker threads fill
each slice through the (nogil or pure-numpy) kernel, and the caller blocks
until every slice is done. Workers draw no randomness and write disjoint
rows, so worker count cannot change any result, only wall time.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import ConfigError, GraphError
from .genome import Chromosome, Population
from .taskgraph import TaskGraph


@dataclass
class ScheduleResult:
    makespan: int
    fitness: float
    start: np.ndarray
    finish: np.ndarray
    processor: np.ndarray


def fitness_from_makespan(graph: TaskGraph, makespan) -> float:
    """total processing time + 1 - makespan.

    A schedule can never be longer than running every task back to back, so
    this is always >= 1 and shorter schedules score higher; positivity keeps
    roulette selection well defined.
    """
    return float(graph.total_time + 1 - makespan)


def decode(graph: TaskGraph, chrom: Chromosome, n_procs: int) -> ScheduleResult:
    """Event-driven simulation of one chromosome's processor queues.

    Each processor executes its queue in order; a task starts at the later
    of its processor's previous finish and its predecessors' finishes. Queue
    heads are scheduled whenever ready, so any queue order consistent with
    the precedences decodes; an order that deadlocks raises GraphError.
    """
    n = graph.n_tasks
    queues: list[list[int]] = [[] for _ in range(n_procs)]
    processor = np.zeros(n, dtype=np.int64)
    for t, p in zip(chrom.seq, chrom.proc):
        queues[int(p)].append(int(t))
        processor[int(t)] = int(p)
    head = [0] * n_procs
    avail = [0] * n_procs
    start = np.zeros(n, dtype=np.int64)
    finish = np.zeros(n, dtype=np.int64)
    done = np.zeros(n, dtype=bool)
    scheduled = 0
    while scheduled < n:
        progressed = False
        for p in range(n_procs):
            while head[p] < len(queues[p]):
                t = queues[p][head[p]]
                preds = graph.predecessors(t)
                if not all(done[q] for q in preds):
                    break
                s = avail[p]
                for q in preds:
                    if finish[q] > s:
                        s = int(finish[q])
                start[t] = s
                finish[t] = s + int(graph.times[t])
                done[t] = True
                avail[p] = int(finish[t])
                head[p] += 1
                scheduled += 1
                progressed = True
        if not progressed:
            stuck = [graph.task_ids[queues[p][head[p]]]
                     for p in range(n_procs) if head[p] < len(queues[p])]
            raise GraphError(
                "queue order deadlocks; blocked tasks: " + ", ".join(stuck)
            )
    makespan = int(finish.max())
    return ScheduleResult(
        makespan=makespan,
        fitness=fitness_from_makespan(graph, makespan),
        start=start,
        finish=finish,
        processor=processor,
    )


def slice_bounds(n_rows: int, n_workers: int) -> list[tuple[int, int]]:
    """Contiguous near-equal row slices, one per worker; sizes differ by at
    most one."""
    cuts = [n_rows * w // n_workers for w in range(n_workers + 1)]
    return [(cuts[w], cuts[w + 1]) for w in range(n_workers)]


def evaluate_population(
    pop: Population,
    n_workers: int = 1,
    kernels=None,
    executor: ThreadPoolExecutor | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Makespan and fitness per chromosome row.

    n_workers=1 evaluates in the calling thread. Otherwise the rows are
    split into one slice per worker and evaluated concurrently; the call
    returns only after every slice is complete. Pass ``executor`` to reuse a
    thread pool across generations; it must have capacity for n_workers
    tasks. ``kernels`` picks the kernel backend by name or module, default
    per environment.
    """
    if n_workers < 1:
        raise ConfigError(f"worker count must be >= 1, got {n_workers}")
    kern = kernels if hasattr(kernels, "evaluate_slice") else backend.get(kernels)
    g = pop.graph
    rows = len(pop)
    makespan = np.empty(rows, dtype=np.int64)
    args = (pop.seq, pop.proc, g.times, g.pred_ptr, g.pred_flat, pop.n_procs)

    def run(lo: int, hi: int):
        if lo < hi:
            kern.evaluate_slice(
                args[0], args[1], lo, hi, args[2], args[3], args[4], args[5],
                makespan,
            )

    if n_workers == 1:
        run(0, rows)
    else:
        own = executor is None
        pool = executor or ThreadPoolExecutor(max_workers=n_workers)
        try:
            futures = [pool.submit(run, lo, hi)
                       for lo, hi in slice_bounds(rows, n_workers)]
            for f in futures:
                f.result()
        finally:
            if own:
                pool.shutdown()
    fitness = (g.total_time + 1 - makespan).astype(np.float64)
    return makespan, fitness


def gantt_rows(graph: TaskGraph, chrom: Chromosome, n_procs: int):
    """(task_id, processor, start, finish) tuples sorted by processor then
    start time; input for schedule CSV output."""
    sched = decode(graph, chrom, n_procs)
    rows = [
        (graph.task_ids[t], int(sched.processor[t]),
         int(sched.start[t]), int(sched.finish[t]))
        for t in range(graph.n_tasks)
    ]
    rows.sort(key=lambda r: (r[1], r[2]))
    return rows
