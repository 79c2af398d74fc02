import math
import random

import pytest

import pathforest as pf
from pathforest import Colour
from pathforest.colouring import ExplicitColouring, restrict_to_prefix
from pathforest.oracle import (enumerate_small, longest_mono_path,
                               longest_mono_path_naive,
                               max_pathforest_coverage)
from conftest import mono_path_ok

R, B = Colour.RED, Colour.BLUE


def random_explicit(n, seed, p=0.5):
    rng = random.Random(seed)
    m = n * (n - 1) // 2
    return ExplicitColouring(n, [R if rng.random() < p else B
                                 for _ in range(m)])


def test_triangle_by_hand():
    c = ExplicitColouring(3, [R, R, B])  # red path 2-1-3 spans everything
    red = longest_mono_path(c, R)
    assert red.best == 3
    assert mono_path_ok(c, R, red.witness) and len(red.witness) == 3
    blue = longest_mono_path(c, B)
    assert blue.best == 2
    assert blue.witness in ([2, 3], [3, 2])


def test_all_red_k4():
    c = ExplicitColouring(4, [R] * 6)
    assert longest_mono_path(c, R).best == 4
    # a single vertex is a (degenerate) path in either colour
    assert longest_mono_path(c, B).best == 1


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_dp_matches_exhaustive_search(n):
    for seed in range(20):
        c = random_explicit(n, seed * 31 + n)
        for colour in (R, B):
            fast = longest_mono_path(c, colour)
            slow = longest_mono_path_naive(c, colour)
            assert fast.best == slow.best, (n, seed, colour)
            assert mono_path_ok(c, colour, fast.witness)
            assert len(fast.witness) == fast.best
            assert fast.explored > 0


def test_gg_floor_sampled():
    """Every 2-colouring of K_n has a monochromatic path on >= ceil(2n/3)
    vertices; spot-check the classical floor on random instances."""
    for n in (5, 6, 9):
        need = math.ceil(2 * n / 3)
        for seed in range(60):
            c = random_explicit(n, seed)
            best = longest_mono_path(c, R).best
            if best < need:
                best = max(best, longest_mono_path(c, B).best)
            assert best >= need, (n, seed)


def test_enumerate_small_visits_everything():
    seen = []

    def always_fine(c):
        seen.append(1)
        return True

    assert enumerate_small(4, always_fine) is None
    assert len(seen) == 2 ** 6

    # sampling mode draws exactly the requested number
    seen.clear()
    assert enumerate_small(5, always_fine, samples=37, seed=3) is None
    assert len(seen) == 37


def test_enumerate_small_finds_counterexample():
    # "every colouring of K_4 has a red edge" is false: the all-blue one
    bad = enumerate_small(4, lambda c: any(
        c.edge_colour(u, v) is R
        for u in range(1, 5) for v in range(u + 1, 5)))
    assert bad is not None
    assert all(bad.edge_colour(u, v) is B
               for u in range(1, 5) for v in range(u + 1, 5))


def test_coverage_all_red():
    c = ExplicitColouring(4, [R] * 6)
    red = max_pathforest_coverage(c, lambda v: R, R, 4)
    assert red.best == 4
    # no blue-class vertices exist, so a blue forest covers nothing
    assert max_pathforest_coverage(c, lambda v: R, B, 4).best == 0


def test_coverage_monotone_and_bounded(small_random):
    prefix = restrict_to_prefix(small_random, 12)
    last = 0
    for t in range(1, 13):
        got = max_pathforest_coverage(prefix, small_random.class_of, R, t).best
        assert last <= got <= t
        last = got


def test_engine_never_beats_coverage_oracle():
    for seed in range(5):
        col = pf.generate("random", seed, 64, q=0.3, window=2)
        trace, _ = pf.run(col, 8, 12)
        prefix = restrict_to_prefix(col, 14)
        for row in trace:
            for colour, c_val in ((R, row.c_R), (B, row.c_B)):
                bound = max_pathforest_coverage(
                    prefix, col.class_of, colour, row.t).best
                assert c_val <= bound, (seed, row.t, colour)
