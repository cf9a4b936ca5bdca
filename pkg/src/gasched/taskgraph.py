"""Precedence-constrained task graphs: parsing, validation, generation, bounds.

The file format is line based: ``task <id> <time>`` declares a task with an
integer processing time, ``edge <pred> <succ>`` a precedence constraint.
Blank lines and ``#`` comments are ignored; declarations may appear in any
order. Canonical serialization lists all tasks first (in input order), then
all edges (in input order), one per line.
"""

from __future__ import annotations

from collections import deque
from functools import cached_property

import numpy as np

from .errors import ConfigError, CycleError, GraphError, GraphSyntaxError


class TaskGraph:
    """Immutable DAG of tasks with integer processing times.

    Tasks are indexed 0..n-1 in declaration order; ``task_ids`` maps index to
    the external id token. Heights, predecessor lists (CSR layout) and height
    block offsets are computed once here because every other module keys off
    them: chromosomes are height-sorted sequences and the schedule kernels
    walk the predecessor arrays directly.
    """

    def __init__(self, tasks, edges):
        ids: list[str] = []
        times: list[int] = []
        index: dict[str, int] = {}
        for tid, t in tasks:
            if tid in index:
                raise GraphError(f"duplicate task id {tid!r}")
            t = int(t)
            if t < 1:
                raise GraphError(f"task {tid!r}: processing time must be >= 1, got {t}")
            index[tid] = len(ids)
            ids.append(tid)
            times.append(t)
        if not ids:
            raise GraphError("graph has no tasks")
        edge_list: list[tuple[str, str]] = []
        for u, v in edges:
            if u not in index:
                raise GraphError(f"edge references unknown task {u!r}")
            if v not in index:
                raise GraphError(f"edge references unknown task {v!r}")
            edge_list.append((u, v))

        self.task_ids: tuple[str, ...] = tuple(ids)
        self.index = index
        self.times = np.asarray(times, dtype=np.int64)
        self.edges: tuple[tuple[str, str], ...] = tuple(edge_list)
        self.n_tasks = len(ids)
        self.total_time = int(self.times.sum())
        self._build_structure()

    def _build_structure(self):
        n = self.n_tasks
        ne = len(self.edges)
        e_from = np.empty(ne, dtype=np.int64)
        e_to = np.empty(ne, dtype=np.int64)
        for k, (u, v) in enumerate(self.edges):
            e_from[k] = self.index[u]
            e_to[k] = self.index[v]

        # predecessor lists in CSR form, declaration order preserved per task
        pred_counts = np.bincount(e_to, minlength=n)
        self.pred_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(pred_counts, out=self.pred_ptr[1:])
        self.pred_flat = e_from[np.argsort(e_to, kind="stable")]

        succ_counts = np.bincount(e_from, minlength=n)
        succ_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(succ_counts, out=succ_ptr[1:])
        succ_flat = e_to[np.argsort(e_from, kind="stable")]

        # Kahn traversal doubles as the acyclicity check and computes heights:
        # 0 for sources, else 1 + max over predecessor heights.
        indeg = pred_counts.copy()
        heights = np.zeros(n, dtype=np.int64)
        queue = deque(int(i) for i in range(n) if indeg[i] == 0)
        seen = 0
        while queue:
            i = queue.popleft()
            seen += 1
            for e in range(succ_ptr[i], succ_ptr[i + 1]):
                j = int(succ_flat[e])
                if heights[j] < heights[i] + 1:
                    heights[j] = heights[i] + 1
                indeg[j] -= 1
                if indeg[j] == 0:
                    queue.append(j)
        if seen < n:
            raise CycleError(self._extract_cycle(indeg))

        self.heights = heights
        self.max_height = int(heights.max())
        # block_offsets[h] = number of tasks of height < h; slots
        # [block_offsets[h], block_offsets[h+1]) of any valid chromosome
        # sequence hold exactly the tasks of height h
        hcounts = np.bincount(heights, minlength=self.max_height + 1)
        self.block_offsets = np.zeros(self.max_height + 2, dtype=np.int64)
        np.cumsum(hcounts, out=self.block_offsets[1:])
        swappable = np.flatnonzero(hcounts >= 2)
        self.swap_blocks = np.stack(
            [self.block_offsets[swappable], self.block_offsets[swappable + 1]], axis=1
        ) if len(swappable) else np.zeros((0, 2), dtype=np.int64)
        self.height_order = np.argsort(heights, kind="stable")

    def _extract_cycle(self, indeg):
        # every node with remaining in-degree has at least one unprocessed
        # predecessor, so walking predecessors must revisit a node
        remaining = indeg > 0
        start = int(np.flatnonzero(remaining)[0])
        path = [start]
        seen = {start: 0}
        cur = start
        while True:
            for e in range(self.pred_ptr[cur], self.pred_ptr[cur + 1]):
                p = int(self.pred_flat[e])
                if remaining[p]:
                    cur = p
                    break
            if cur in seen:
                cycle = path[seen[cur]:]
                return tuple(self.task_ids[i] for i in reversed(cycle))
            seen[cur] = len(path)
            path.append(cur)

    @cached_property
    def pred_matrix(self):
        """Predecessors padded to a rectangular (n, max_preds) array, -1 filled."""
        widths = self.pred_ptr[1:] - self.pred_ptr[:-1]
        maxp = int(widths.max()) if self.n_tasks else 0
        mat = np.full((self.n_tasks, maxp), -1, dtype=np.int64)
        for t in range(self.n_tasks):
            lo, hi = self.pred_ptr[t], self.pred_ptr[t + 1]
            mat[t, : hi - lo] = self.pred_flat[lo:hi]
        return mat

    def predecessors(self, task_index: int) -> np.ndarray:
        return self.pred_flat[self.pred_ptr[task_index]:self.pred_ptr[task_index + 1]]

    def __eq__(self, other):
        if not isinstance(other, TaskGraph):
            return NotImplemented
        return (
            self.task_ids == other.task_ids
            and self.times.tolist() == other.times.tolist()
            and self.edges == other.edges
        )

    __hash__ = None

    def __repr__(self):
        return f"TaskGraph(tasks={self.n_tasks}, edges={len(self.edges)})"


def parse_graph(text: str) -> TaskGraph:
    """Parse graph-file content into a validated TaskGraph."""
    tasks: list[tuple[str, int]] = []
    edges: list[tuple[str, str]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "task":
            if len(parts) != 3:
                raise GraphSyntaxError(line_no, "expected: task <id> <time>")
            try:
                t = int(parts[2])
            except ValueError:
                raise GraphSyntaxError(
                    line_no, f"processing time {parts[2]!r} is not an integer"
                ) from None
            tasks.append((parts[1], t))
        elif parts[0] == "edge":
            if len(parts) != 3:
                raise GraphSyntaxError(line_no, "expected: edge <pred> <succ>")
            edges.append((parts[1], parts[2]))
        else:
            raise GraphSyntaxError(line_no, f"unknown directive {parts[0]!r}")
    return TaskGraph(tasks, edges)


def serialize_graph(graph: TaskGraph) -> str:
    """Canonical text form; parse_graph(serialize_graph(g)) == g."""
    lines = [f"task {tid} {int(t)}" for tid, t in zip(graph.task_ids, graph.times)]
    lines += [f"edge {u} {v}" for u, v in graph.edges]
    return "\n".join(lines) + "\n"


def compute_heights(graph: TaskGraph) -> dict[str, int]:
    """Height per task id: 0 for sources, else 1 + max over predecessor heights."""
    return {tid: int(h) for tid, h in zip(graph.task_ids, graph.heights)}


def lower_bounds(graph: TaskGraph, n_procs: int) -> tuple[int, int]:
    """(critical path length, ceil(total work / n_procs)).

    Any feasible makespan is >= max of the two.
    """
    if n_procs < 1:
        raise ConfigError(f"processor count must be >= 1, got {n_procs}")
    ending = graph.times.copy()
    for t in graph.height_order:
        t = int(t)
        best = 0
        for p in graph.predecessors(t):
            if ending[p] > best:
                best = int(ending[p])
        ending[t] += best
    critical_path = int(ending.max())
    work_bound = -(-graph.total_time // n_procs)
    return critical_path, work_bound


def random_dag(
    n: int, edge_prob: float, t_min: int, t_max: int, seed: int
) -> TaskGraph:
    """Random DAG with n tasks, ids t0..t{n-1}.

    Each ordered pair (i, j) with i < j gets an edge with probability
    edge_prob, which forces acyclicity; times are uniform in [t_min, t_max].
    Same seed, same graph.
    """
    if n < 1:
        raise ConfigError(f"task count must be >= 1, got {n}")
    if not 0.0 <= edge_prob <= 1.0:
        raise ConfigError(f"edge probability must be in [0, 1], got {edge_prob}")
    if not 1 <= t_min <= t_max:
        raise ConfigError(f"need 1 <= t_min <= t_max, got t_min={t_min} t_max={t_max}")
    rng = np.random.default_rng(seed)
    times = rng.integers(t_min, t_max + 1, size=n)
    tasks = [(f"t{i}", int(times[i])) for i in range(n)]
    ii, jj = np.triu_indices(n, k=1)
    coins = rng.random(len(ii))
    edges = [
        (f"t{int(i)}", f"t{int(j)}")
        for i, j, c in zip(ii, jj, coins)
        if c < edge_prob
    ]
    return TaskGraph(tasks, edges)
