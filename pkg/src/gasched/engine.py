"""Genetic search loop.

Generational replacement with elitism of one: each generation breeds a full
new population from roulette-selected parent pairs, then the best chromosome
of the old population overwrites the worst child, so the best makespan found
never regresses and the per-generation history is non-increasing.

All randomness is drawn in the master thread from one seeded generator, in a
fixed order per generation (selection, crossover coins, cut heights, mutation
coins, swap positions). Worker threads only fill fitness slices. A run is
therefore reproducible from its seed alone and bit-identical for any worker
count; workers buy wall time, nothing else.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .evaluator import evaluate_population, fitness_from_makespan
from .genome import (
    Chromosome,
    Population,
    draw_swaps,
    init_population,
    select_parents,
    splice_batch,
    swap_batch,
)
from .taskgraph import TaskGraph


@dataclass(frozen=True)
class GAConfig:
    pop_size: int
    generations: int
    n_procs: int
    crossover_prob: float = 0.8
    mutation_prob: float = 0.02
    n_workers: int = 1
    seed: int | None = None

    def __post_init__(self):
        if self.pop_size < 2:
            raise ConfigError(f"population size must be >= 2, got {self.pop_size}")
        if self.generations < 1:
            raise ConfigError(f"generation count must be >= 1, got {self.generations}")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ConfigError(
                f"crossover probability must be in [0, 1], got {self.crossover_prob}"
            )
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ConfigError(
                f"mutation probability must be in [0, 1], got {self.mutation_prob}"
            )
        if self.n_procs < 1:
            raise ConfigError(f"processor count must be >= 1, got {self.n_procs}")
        if self.n_workers < 1:
            raise ConfigError(f"worker count must be >= 1, got {self.n_workers}")


@dataclass
class GAResult:
    best: Chromosome
    makespan: int
    fitness: float
    history: list[int] = field(repr=False)
    generations_run: int
    evaluations: int
    wall_seconds: float


def _breed(pop: Population, fitness, cfg: GAConfig, rng) -> tuple[np.ndarray, np.ndarray]:
    """One full offspring population; draws happen in a fixed order."""
    g = pop.graph
    p_size = cfg.pop_size
    n_pairs = (p_size + 1) // 2
    pairs = select_parents(fitness, n_pairs, rng)
    coins = rng.random(n_pairs)
    cuts = rng.integers(0, g.max_height + 1, size=n_pairs)

    a_seq, a_proc = pop.seq[pairs[:, 0]], pop.proc[pairs[:, 0]]
    b_seq, b_proc = pop.seq[pairs[:, 1]], pop.proc[pairs[:, 1]]
    c1s, c1p, c2s, c2p = splice_batch(a_seq, a_proc, b_seq, b_proc, cuts, g.block_offsets)
    cross = (coins < cfg.crossover_prob)[:, None]
    c1s = np.where(cross, c1s, a_seq)
    c1p = np.where(cross, c1p, a_proc)
    c2s = np.where(cross, c2s, b_seq)
    c2p = np.where(cross, c2p, b_proc)

    # interleave the two children of each pair, then trim an odd overhang
    child_seq = np.empty((2 * n_pairs, g.n_tasks), dtype=np.int64)
    child_proc = np.empty_like(child_seq)
    child_seq[0::2], child_seq[1::2] = c1s, c2s
    child_proc[0::2], child_proc[1::2] = c1p, c2p
    child_seq = child_seq[:p_size]
    child_proc = child_proc[:p_size]

    hits = np.flatnonzero(rng.random(p_size) < cfg.mutation_prob)
    if len(hits):
        drawn = draw_swaps(g, len(hits), rng)
        if drawn is not None:
            swap_batch(child_seq, hits, drawn[0], drawn[1])
    return child_seq, child_proc


def _search(graph: TaskGraph, cfg: GAConfig, patience, kernels):
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    pop = init_population(graph, cfg.n_procs, cfg.pop_size, rng)

    executor = ThreadPoolExecutor(max_workers=cfg.n_workers) if cfg.n_workers > 1 else None
    try:
        makespan, fitness = evaluate_population(
            pop, cfg.n_workers, kernels=kernels, executor=executor
        )
        evaluations = cfg.pop_size
        best_ms = int(makespan.min())
        stale = 0
        history: list[int] = []
        for _ in range(cfg.generations):
            elite = int(np.argmax(fitness))
            elite_seq = pop.seq[elite]
            elite_proc = pop.proc[elite]
            elite_ms = int(makespan[elite])

            child_seq, child_proc = _breed(pop, fitness, cfg, rng)
            pop.seq, pop.proc = child_seq, child_proc
            makespan, fitness = evaluate_population(
                pop, cfg.n_workers, kernels=kernels, executor=executor
            )
            evaluations += cfg.pop_size

            worst = int(np.argmin(fitness))
            pop.seq[worst] = elite_seq
            pop.proc[worst] = elite_proc
            makespan[worst] = elite_ms
            fitness[worst] = fitness_from_makespan(graph, elite_ms)

            gen_best = int(makespan.min())
            if gen_best < best_ms:
                best_ms = gen_best
                stale = 0
            else:
                stale += 1
            history.append(best_ms)
            if patience is not None and stale >= patience:
                break
    finally:
        if executor is not None:
            executor.shutdown()

    best = int(np.argmax(fitness))
    chrom = Chromosome(graph, pop.seq[best].copy(), pop.proc[best].copy())
    return GAResult(
        best=chrom,
        makespan=int(makespan[best]),
        fitness=float(fitness[best]),
        history=history,
        generations_run=len(history),
        evaluations=evaluations,
        wall_seconds=time.perf_counter() - t0,
    )


def run(graph: TaskGraph, cfg: GAConfig, kernels=None) -> GAResult:
    """Run the configured number of generations.

    Evaluation count is exactly pop_size * (generations + 1): the initial
    population plus one full offspring population per generation.
    """
    return _search(graph, cfg, None, kernels)


def run_to_convergence(
    graph: TaskGraph, cfg: GAConfig, patience: int, kernels=None
) -> GAResult:
    """Stop early once the best makespan has not improved for ``patience``
    consecutive generations; cfg.generations still caps the run."""
    if patience < 1:
        raise ConfigError(f"patience must be >= 1, got {patience}")
    return _search(graph, cfg, patience, kernels)
