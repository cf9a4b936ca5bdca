"""Chromosome encoding and genetic operators.

A chromosome assigns every task to one processor queue, queues ordered so
that task heights never decrease. Internally a chromosome is a pair of
parallel arrays over n slots: ``seq`` is a permutation of task indices sorted
by height (random order inside a height tie), ``proc`` the processor owning
each slot. Processor p's queue is the subsequence of ``seq`` where
``proc == p``. Slots of equal height may appear in any relative order; the
schedule a chromosome decodes to only depends on the queues, so equality and
validation go through the queue view.

Crossover cuts both parents after a height block and splices: because any
valid ``seq`` holds exactly the tasks of height <= h in its first
``block_offsets[h+1]`` slots, the splice is again a permutation and stays
height sorted. Mutation swaps two slots of equal height while ``proc`` stays
positional, moving the two tasks between queue positions. Batch variants
operate on stacked (rows, n) arrays and are what the search loop uses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .taskgraph import TaskGraph


@dataclass
class Chromosome:
    graph: TaskGraph
    seq: np.ndarray
    proc: np.ndarray

    def lists(self) -> list[list[str]]:
        """Per-processor task-id queues, index = processor."""
        n_procs = int(self.proc.max()) + 1 if len(self.proc) else 0
        out: list[list[str]] = [[] for _ in range(n_procs)]
        for t, p in zip(self.seq, self.proc):
            out[int(p)].append(self.graph.task_ids[int(t)])
        return out

    def validate(self, n_procs: int):
        g = self.graph
        n = g.n_tasks
        if self.seq.shape != (n,) or self.proc.shape != (n,):
            raise ValueError(f"chromosome arrays must have shape ({n},)")
        if not np.array_equal(np.sort(self.seq), np.arange(n)):
            raise ValueError("seq is not a permutation of the task indices")
        h = g.heights[self.seq]
        if np.any(np.diff(h) < 0):
            raise ValueError("task heights decrease along seq")
        if np.any(self.proc < 0) or np.any(self.proc >= n_procs):
            raise ValueError(f"processor index out of range [0, {n_procs})")

    def copy(self) -> "Chromosome":
        return Chromosome(self.graph, self.seq.copy(), self.proc.copy())

    def __eq__(self, other):
        if not isinstance(other, Chromosome):
            return NotImplemented
        return self.graph == other.graph and self.lists() == other.lists()


@dataclass
class Individual:
    chromosome: Chromosome
    makespan: int
    fitness: float


class Population:
    """Stacked chromosome arrays for one graph / processor count."""

    def __init__(self, graph: TaskGraph, n_procs: int, seq: np.ndarray, proc: np.ndarray):
        self.graph = graph
        self.n_procs = n_procs
        self.seq = seq
        self.proc = proc

    def __len__(self):
        return self.seq.shape[0]

    def chromosome(self, i: int) -> Chromosome:
        return Chromosome(self.graph, self.seq[i], self.proc[i])

    def validate_all(self):
        for i in range(len(self)):
            self.chromosome(i).validate(self.n_procs)


def init_population(
    graph: TaskGraph, n_procs: int, size: int, rng: np.random.Generator
) -> Population:
    """Random population: per row a random height-sorted permutation plus
    uniform processor assignments."""
    if size < 2:
        raise ConfigError(f"population size must be >= 2, got {size}")
    if n_procs < 1:
        raise ConfigError(f"processor count must be >= 1, got {n_procs}")
    n = graph.n_tasks
    # heights + U[0,1) keys sort by height with a random shuffle inside ties
    keys = rng.random((size, n))
    seq = np.argsort(graph.heights[None, :] + keys, axis=1).astype(np.int64)
    proc = rng.integers(0, n_procs, size=(size, n), dtype=np.int64)
    return Population(graph, n_procs, seq, proc)


def select_parents(
    fitness: np.ndarray, n_pairs: int, rng: np.random.Generator
) -> np.ndarray:
    """Roulette-wheel selection proportional to fitness; returns (n_pairs, 2)
    row indices. Fitness values must be positive."""
    f = np.asarray(fitness, dtype=np.float64)
    cum = np.cumsum(f)
    u = rng.random((n_pairs, 2))
    idx = np.searchsorted(cum, u * cum[-1], side="right")
    # u * total can round up to the final cumulative value
    return np.minimum(idx, len(f) - 1).astype(np.int64)


def splice_batch(a_seq, a_proc, b_seq, b_proc, cut_heights, block_offsets):
    """Height-boundary one-point crossover on stacked parent rows.

    Row r is cut after the height-``cut_heights[r]`` block; child one takes
    the head slots from parent a and the tail from parent b, child two the
    reverse. Returns (c1_seq, c1_proc, c2_seq, c2_proc).
    """
    n = a_seq.shape[1]
    k = block_offsets[np.asarray(cut_heights) + 1]
    head = np.arange(n)[None, :] < k[:, None]
    c1_seq = np.where(head, a_seq, b_seq)
    c1_proc = np.where(head, a_proc, b_proc)
    c2_seq = np.where(head, b_seq, a_seq)
    c2_proc = np.where(head, b_proc, a_proc)
    return c1_seq, c1_proc, c2_seq, c2_proc


def crossover(
    a: Chromosome, b: Chromosome, rng: np.random.Generator
) -> tuple[Chromosome, Chromosome]:
    """Single-pair crossover at a random height boundary."""
    g = a.graph
    h = int(rng.integers(0, g.max_height + 1))
    c1s, c1p, c2s, c2p = splice_batch(
        a.seq[None, :], a.proc[None, :], b.seq[None, :], b.proc[None, :],
        np.array([h]), g.block_offsets,
    )
    return Chromosome(g, c1s[0], c1p[0]), Chromosome(g, c2s[0], c2p[0])


def draw_swaps(graph: TaskGraph, n_rows: int, rng: np.random.Generator):
    """Random equal-height slot pairs (i, j), one per row, j != i.

    Returns (i, j) index arrays, or None when no height level holds two or
    more tasks (a pure chain has nothing to swap).
    """
    blocks = graph.swap_blocks
    if len(blocks) == 0:
        return None
    b = rng.integers(0, len(blocks), size=n_rows)
    lo = blocks[b, 0]
    size = blocks[b, 1] - lo
    u = rng.random((n_rows, 2))
    i = lo + (u[:, 0] * size).astype(np.int64)
    j = lo + (u[:, 1] * (size - 1)).astype(np.int64)
    j = j + (j >= i)  # uniform over the block minus slot i
    return i, j


def swap_batch(seq, rows, i, j):
    """Swap seq[r, i[r]] and seq[r, j[r]] for each listed row, in place.

    proc is positional, so the two tasks trade queue slots, which can move a
    task to another processor.
    """
    a = seq[rows, i].copy()
    seq[rows, i] = seq[rows, j]
    seq[rows, j] = a


def mutate(c: Chromosome, rng: np.random.Generator) -> Chromosome:
    """Swap two random equal-height tasks; identity on graphs with no
    swappable height level."""
    out = c.copy()
    drawn = draw_swaps(c.graph, 1, rng)
    if drawn is None:
        return out
    i, j = drawn
    seq = out.seq[None, :]
    swap_batch(seq, np.array([0]), i, j)
    return out
