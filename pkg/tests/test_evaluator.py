import numpy as np
import pytest

from gasched.errors import ConfigError, GraphError
from gasched.evaluator import (
    decode,
    evaluate_population,
    fitness_from_makespan,
    gantt_rows,
    slice_bounds,
)
from gasched.genome import Chromosome, init_population
from gasched.taskgraph import lower_bounds, parse_graph, random_dag

CHAIN = parse_graph("task a 3\ntask b 2\nedge a b")


def chrom(graph, seq, proc):
    return Chromosome(
        graph, np.array(seq, dtype=np.int64), np.array(proc, dtype=np.int64)
    )


def test_decode_chain_split_and_together():
    split = decode(CHAIN, chrom(CHAIN, [0, 1], [0, 1]), 2)
    assert split.start[0] == 0 and split.start[1] == 3
    assert split.makespan == 5
    together = decode(CHAIN, chrom(CHAIN, [0, 1], [0, 0]), 2)
    assert together.makespan == 5


def test_decode_independent_pair():
    g = parse_graph("task a 4\ntask b 4")
    r = decode(g, chrom(g, [0, 1], [0, 1]), 2)
    assert r.start.tolist() == [0, 0]
    assert r.makespan == 4


def test_decode_forced_wait():
    # b waits for a on the other processor; c fills p1 meanwhile
    g = parse_graph("task a 5\ntask b 2\ntask c 3\nedge a b")
    r = decode(g, chrom(g, [0, 2, 1], [0, 1, 1]), 2)
    assert r.start[g.index["c"]] == 0
    assert r.start[g.index["b"]] == 5
    assert r.makespan == 7
    assert r.processor[g.index["b"]] == 1


def test_decode_invariants_random():
    rng = np.random.default_rng(42)
    for seed in range(20):
        g = random_dag(int(rng.integers(2, 30)), 0.3, 1, 9, seed)
        m = int(rng.integers(1, 5))
        pop = init_population(g, m, 5, rng)
        for i in range(5):
            r = decode(g, pop.chromosome(i), m)
            assert np.array_equal(r.finish, r.start + g.times)
            for u, v in g.edges:
                assert r.start[g.index[v]] >= r.finish[g.index[u]]
            for p in range(m):
                on_p = np.flatnonzero(r.processor == p)
                iv = sorted((int(r.start[t]), int(r.finish[t])) for t in on_p)
                for (s1, f1), (s2, _) in zip(iv, iv[1:]):
                    assert s2 >= f1
            assert r.makespan == int(r.finish.max())


def test_decode_deadlock_detection():
    # hand-built invalid order: b queued before its predecessor a
    bad = chrom(CHAIN, [1, 0], [0, 0])
    with pytest.raises(GraphError, match="deadlock"):
        decode(CHAIN, bad, 1)


def test_fitness_formula():
    assert fitness_from_makespan(CHAIN, 5) == 1.0
    single = parse_graph("task a 7")
    assert fitness_from_makespan(single, 7) == 1.0
    indep = parse_graph("task a 4\ntask b 4")
    assert fitness_from_makespan(indep, 4) == 5.0
    # strictly decreasing in makespan
    assert fitness_from_makespan(indep, 5) < fitness_from_makespan(indep, 4)


def test_slice_bounds_cover_and_balance():
    for rows, workers in [(10, 3), (3, 8), (100, 7), (1, 1), (0, 4)]:
        bounds = slice_bounds(rows, workers)
        assert len(bounds) == workers
        assert bounds[0][0] == 0 and bounds[-1][1] == rows
        sizes = [hi - lo for lo, hi in bounds]
        assert sum(sizes) == rows
        assert max(sizes) - min(sizes) <= 1
        for (_, hi), (lo, _) in zip(bounds, bounds[1:]):
            assert hi == lo


def test_evaluate_population_matches_decode():
    g = random_dag(18, 0.3, 1, 9, 8)
    pop = init_population(g, 3, 30, np.random.default_rng(1))
    ms, fit = evaluate_population(pop)
    for i in range(30):
        r = decode(g, pop.chromosome(i), 3)
        assert ms[i] == r.makespan
        assert fit[i] == r.fitness


def test_evaluate_population_worker_count_irrelevant():
    g = random_dag(22, 0.25, 1, 9, 9)
    pop = init_population(g, 2, 37, np.random.default_rng(2))
    base_ms, base_fit = evaluate_population(pop, n_workers=1)
    for workers in (2, 3, 4, 8):
        ms, fit = evaluate_population(pop, n_workers=workers)
        assert np.array_equal(ms, base_ms)
        assert np.array_equal(fit, base_fit)
    # more workers than rows
    small = init_population(g, 2, 3, np.random.default_rng(3))
    a = evaluate_population(small, n_workers=8)
    b = evaluate_population(small, n_workers=1)
    assert np.array_equal(a[0], b[0])


def test_evaluate_population_rejects_bad_worker_count():
    pop = init_population(CHAIN, 2, 4, np.random.default_rng(0))
    with pytest.raises(ConfigError):
        evaluate_population(pop, n_workers=0)


def test_makespan_never_below_lower_bounds():
    rng = np.random.default_rng(77)
    for seed in range(15):
        g = random_dag(int(rng.integers(2, 25)), 0.35, 1, 9, 500 + seed)
        m = int(rng.integers(1, 4))
        pop = init_population(g, m, 10, rng)
        ms, _ = evaluate_population(pop)
        cp, wb = lower_bounds(g, m)
        assert int(ms.min()) >= max(cp, wb)


def test_gantt_rows_sorted_and_complete():
    g = parse_graph("task a 5\ntask b 2\ntask c 3\nedge a b")
    rows = gantt_rows(g, chrom(g, [0, 2, 1], [0, 1, 1]), 2)
    assert len(rows) == 3
    assert rows == sorted(rows, key=lambda r: (r[1], r[2]))
    by_task = {r[0]: r for r in rows}
    assert by_task["a"] == ("a", 0, 0, 5)
    assert by_task["b"] == ("b", 1, 5, 7)
