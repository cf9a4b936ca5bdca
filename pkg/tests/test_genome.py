import numpy as np
import pytest

from gasched.errors import ConfigError
from gasched.genome import (
    Chromosome,
    crossover,
    draw_swaps,
    init_population,
    mutate,
    select_parents,
    splice_batch,
)
from gasched.taskgraph import parse_graph, random_dag

CHAIN = parse_graph("task a 3\ntask b 2\nedge a b")


def chrom(graph, seq, proc):
    return Chromosome(
        graph, np.array(seq, dtype=np.int64), np.array(proc, dtype=np.int64)
    )


def test_init_population_valid_and_deterministic():
    g = random_dag(20, 0.3, 1, 9, 5)
    pop = init_population(g, 3, 40, np.random.default_rng(7))
    pop.validate_all()
    pop2 = init_population(g, 3, 40, np.random.default_rng(7))
    assert np.array_equal(pop.seq, pop2.seq)
    assert np.array_equal(pop.proc, pop2.proc)
    pop3 = init_population(g, 3, 40, np.random.default_rng(8))
    assert not np.array_equal(pop.seq, pop3.seq) or not np.array_equal(
        pop.proc, pop3.proc
    )


def test_init_population_single_task():
    g = parse_graph("task a 5")
    pop = init_population(g, 2, 3, np.random.default_rng(0))
    for i in range(3):
        lists = pop.chromosome(i).lists()
        assert sorted(sum(lists, [])) == ["a"]


def test_init_population_size_check():
    with pytest.raises(ConfigError):
        init_population(CHAIN, 2, 1, np.random.default_rng(0))
    with pytest.raises(ConfigError):
        init_population(CHAIN, 0, 4, np.random.default_rng(0))


def test_chromosome_lists_and_equality():
    a = chrom(CHAIN, [0, 1], [0, 1])
    assert a.lists() == [["a"], ["b"]]
    b = chrom(CHAIN, [0, 1], [0, 0])
    assert b.lists() == [["a", "b"]]
    assert a != b
    assert a == chrom(CHAIN, [0, 1], [0, 1])


def test_chromosome_validate_rejects_bad_forms():
    with pytest.raises(ValueError, match="permutation"):
        chrom(CHAIN, [0, 0], [0, 0]).validate(2)
    with pytest.raises(ValueError, match="decrease"):
        chrom(CHAIN, [1, 0], [0, 0]).validate(2)
    with pytest.raises(ValueError, match="out of range"):
        chrom(CHAIN, [0, 1], [0, 2]).validate(2)
    chrom(CHAIN, [0, 1], [0, 1]).validate(2)


def test_select_parents_bounds_and_determinism():
    f = np.array([1.0, 5.0, 2.0, 1.0])
    pairs = select_parents(f, 500, np.random.default_rng(3))
    assert pairs.shape == (500, 2)
    assert pairs.min() >= 0 and pairs.max() <= 3
    again = select_parents(f, 500, np.random.default_rng(3))
    assert np.array_equal(pairs, again)


def test_select_parents_roulette_frequencies():
    # fitnesses {3, 1}: the first should win 3/4 of draws
    f = np.array([3.0, 1.0])
    draws = select_parents(f, 5000, np.random.default_rng(11)).ravel()
    freq = np.mean(draws == 0)
    assert abs(freq - 0.75) < 0.02

    # equal fitnesses: symmetric within the same tolerance
    draws = select_parents(np.array([1.0, 1.0]), 5000, np.random.default_rng(12))
    assert abs(np.mean(draws.ravel() == 0) - 0.5) < 0.02


def test_crossover_pinned_hand_example():
    # chain a(h0)->b(h1): parent A keeps both on list 0, parent B splits;
    # cutting after height 0 hands child one A's low slot and B's high slot
    a = chrom(CHAIN, [0, 1], [0, 0])
    b = chrom(CHAIN, [0, 1], [0, 1])
    c1s, c1p, c2s, c2p = splice_batch(
        a.seq[None], a.proc[None], b.seq[None], b.proc[None],
        np.array([0]), CHAIN.block_offsets,
    )
    child1 = Chromosome(CHAIN, c1s[0], c1p[0])
    child2 = Chromosome(CHAIN, c2s[0], c2p[0])
    assert child1.lists() == [["a"], ["b"]]
    assert child2.lists() == [["a", "b"]]


def test_crossover_cut_at_max_height_copies():
    a = chrom(CHAIN, [0, 1], [0, 0])
    b = chrom(CHAIN, [0, 1], [0, 1])
    c1s, c1p, c2s, c2p = splice_batch(
        a.seq[None], a.proc[None], b.seq[None], b.proc[None],
        np.array([CHAIN.max_height]), CHAIN.block_offsets,
    )
    assert Chromosome(CHAIN, c1s[0], c1p[0]) == a
    assert Chromosome(CHAIN, c2s[0], c2p[0]) == b


def test_crossover_equal_parents_identity():
    g = random_dag(12, 0.3, 1, 9, 2)
    pop = init_population(g, 2, 8, np.random.default_rng(4))
    rng = np.random.default_rng(9)
    for i in range(8):
        a = pop.chromosome(i)
        c1, c2 = crossover(a, a.copy(), rng)
        assert c1 == a and c2 == a


def test_crossover_closure_seeded_loop():
    rng = np.random.default_rng(100)
    for seed in range(30):
        g = random_dag(int(rng.integers(2, 25)), 0.3, 1, 9, seed)
        m = int(rng.integers(1, 5))
        pop = init_population(g, m, 10, rng)
        for _ in range(10):
            i, j = rng.integers(0, 10, size=2)
            c1, c2 = crossover(pop.chromosome(int(i)), pop.chromosome(int(j)), rng)
            c1.validate(m)
            c2.validate(m)
            # partition preserved
            assert sorted(sum(c1.lists(), [])) == sorted(g.task_ids)


def test_mutate_chain_is_identity():
    # all heights distinct: nothing to swap
    g = parse_graph("task a 1\ntask b 1\ntask c 1\nedge a b\nedge b c")
    assert g.swap_blocks.shape == (0, 2)
    c = chrom(g, [0, 1, 2], [0, 1, 0])
    out = mutate(c, np.random.default_rng(0))
    assert out == c


def test_mutate_two_independent_swap():
    g = parse_graph("task x 1\ntask y 1")
    c = chrom(g, [0, 1], [0, 1])
    out = mutate(c, np.random.default_rng(0))
    assert out.lists() == [["y"], ["x"]]


def test_mutate_closure_and_height_counts():
    rng = np.random.default_rng(200)
    for seed in range(30):
        g = random_dag(int(rng.integers(2, 25)), 0.25, 1, 9, 1000 + seed)
        m = int(rng.integers(1, 5))
        pop = init_population(g, m, 6, rng)
        for i in range(6):
            c = pop.chromosome(i)
            out = mutate(c, rng)
            out.validate(m)
            # a swap moves at most two tasks and never changes heights
            before = g.heights[c.seq]
            after = g.heights[out.seq]
            assert np.array_equal(before, after)
            assert int((c.seq != out.seq).sum()) in (0, 2)


def test_draw_swaps_equal_height_pairs():
    g = random_dag(15, 0.2, 1, 5, 3)
    drawn = draw_swaps(g, 200, np.random.default_rng(0))
    if drawn is None:
        pytest.skip("degenerate graph: no level with two tasks")
    i, j = drawn
    order_heights = g.heights[g.height_order]
    assert np.all(order_heights[i] == order_heights[j])
    assert np.all(i != j)
