import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from pathforest import Colour
from pathforest.colouring import RestrictedColouring
from pathforest.errors import (AbsorptionError, CycleError, DegreeError,
                               ParameterError, SpareDegreeError)
from pathforest.forest import (ColouredForestConstraints, PathForest,
                               select_sigma)

R, B = Colour.RED, Colour.BLUE


def build(edges, isolated=()):
    f = PathForest()
    for v in isolated:
        f.ensure_vertex(v)
    for u, v in edges:
        f.ensure_vertex(u)
        f.ensure_vertex(v)
        f.add_edge(u, v)
    return f


def test_basic_accounting():
    f = build([(1, 2), (2, 3)], isolated=(7,))
    assert f.n_edges == 2
    assert sorted(f.vertices()) == [1, 2, 3, 7]
    assert f.degree(2) == 2 and f.degree(7) == 0
    assert set(f.neighbours(2)) == {1, 3}
    assert 7 in f and 9 not in f
    assert sorted(map(sorted, f.paths())) == [[1, 2, 3], [7]]


def test_rejects_cycles_and_overload():
    f = build([(1, 2), (2, 3)])
    with pytest.raises(CycleError):
        f.add_edge(1, 3)
    f.ensure_vertex(4)
    with pytest.raises(DegreeError):
        f.add_edge(2, 4)


def test_same_path_ends():
    f = build([(1, 2), (2, 3), (5, 6)])
    assert f.same_path_ends(1, 3)
    assert not f.same_path_ends(1, 5)
    assert not f.same_path_ends(1, 2)  # 2 is interior, not an end


def test_spare_degree():
    f = build([(1, 2)], isolated=(3, 4))
    assert f.spare_degree([1, 2, 3, 4]) == 1 + 1 + 2 + 2


def test_attach_two_prefers_largest_min():
    f = build([(1, 2)], isolated=(3, 4, 5))
    assert f.attach_two(10, [2, 3, 4, 5]) == (4, 5)
    assert f.degree(10) == 2


def test_attach_two_skips_co_path_pairs():
    # 2 and 3 end the same path, so the best usable pair is (1, 3)
    f = build([(2, 3)], isolated=(1,))
    assert f.attach_two(10, [2, 3, 1]) == (1, 3)


def test_attach_two_validation():
    f = build([(1, 2)], isolated=(3, 4, 5))
    with pytest.raises(ParameterError):
        f.attach_two(1, [3, 4, 5])       # x already attached
    with pytest.raises(ParameterError):
        f.attach_two(10, [3, 4])         # too few candidates
    g = build([(1, 2), (2, 3)], isolated=(4, 5))
    with pytest.raises(ParameterError):
        g.attach_two(10, [2, 4, 5])      # saturated candidate


def test_select_sigma_prefix():
    f = build([(1, 2)], isolated=tuple(range(3, 12)))
    # spares in order: 1, 1, 2, 2, 2, ... -> prefix 1..5 reaches 8 exactly
    assert select_sigma(f, list(range(1, 12)), 8) == [1, 2, 3, 4, 5]


def test_select_sigma_drops_redundant():
    f = build([], isolated=tuple(range(1, 8)))
    # prefix 1..4 carries spare 8; removing any member drops below ell
    assert select_sigma(f, list(range(1, 8)), 8) == [1, 2, 3, 4]
    # saturate 2: prefix must stretch and 2 is skipped entirely
    f.add_edge(2, 1)
    f.add_edge(2, 3)
    assert select_sigma(f, list(range(1, 8)), 8) == [1, 3, 4, 5, 6]


def test_select_sigma_spare_window():
    rng = random.Random(5)
    for trial in range(50):
        f = PathForest()
        order = list(range(1, 30))
        for v in order:
            f.ensure_vertex(v)
        for _ in range(rng.randrange(12)):
            u, v = rng.sample(order, 2)
            try:
                f.add_edge(u, v)
            except (CycleError, DegreeError):
                pass
        chosen = select_sigma(f, order, 8)
        total = f.spare_degree(chosen)
        assert total in (8, 9)
        # inclusion-minimal: every member is load-bearing
        for v in chosen:
            assert total - (2 - f.degree(v)) < 8


def test_select_sigma_underflow():
    f = build([], isolated=(1, 2))
    with pytest.raises(SpareDegreeError):
        select_sigma(f, [1, 2], 8)
    with pytest.raises(ParameterError):
        select_sigma(f, [1, 2], 7)  # odd ell


def test_absorb_frozen_example():
    """Deterministic sweep: first open connector pair takes the smallest
    mutually adjacent batch vertex; stops when fewer than 5 remain."""
    f = PathForest()
    xs = list(range(1, 9))
    for x in xs:
        f.ensure_vertex(x)
    ys = list(range(20, 28))
    addition, covered = f.absorb(xs, ys, lambda x, y: (x + y) % 7 != 0)
    assert covered == [20, 21, 22, 24]
    assert sorted(addition.edges()) == [
        (1, 21), (1, 22), (2, 20), (2, 21),
        (3, 22), (3, 24), (4, 20), (5, 24),
    ]
    # the receiving forest was mutated to match and stays a path-forest
    assert f.n_edges == 8
    assert f.is_valid() == []
    assert all(f.degree(y) == 2 for y in covered)


def test_absorb_preconditions():
    def fresh():
        f = PathForest()
        for x in range(1, 9):
            f.ensure_vertex(x)
        return f

    ys = list(range(20, 28))
    with pytest.raises(AbsorptionError):
        fresh().absorb([1, 2, 99], ys, lambda x, y: True)   # x not in forest
    f = fresh()
    f.ensure_vertex(20)
    with pytest.raises(AbsorptionError):
        f.absorb(list(range(1, 9)), ys, lambda x, y: True)  # y already there
    with pytest.raises(AbsorptionError):
        fresh().absorb([1, 2, 3], ys, lambda x, y: True)    # spare too small
    with pytest.raises(AbsorptionError):
        fresh().absorb(list(range(1, 9)), ys,
                       lambda x, y: x != 1)                 # 1 misses all ys


@given(seed=st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_absorb_contract_random(seed):
    """|covered| >= |ys| - 4 and the result stays a valid path-forest."""
    rng = random.Random(seed)
    n_xs = rng.randrange(8, 17)
    f = PathForest()
    xs = list(range(1, n_xs + 1))
    for x in xs:
        f.ensure_vertex(x)
    # pre-attach a few connector pairs, keeping everyone below degree 2
    for _ in range(rng.randrange(3)):
        u, v = rng.sample(xs, 2)
        try:
            f.add_edge(u, v)
        except (CycleError, DegreeError):
            pass
    spare = f.spare_degree(xs)
    n_ys = rng.randrange(5, spare // 2 + 1)
    ys = list(range(100, 100 + n_ys))
    missing = set()
    for x in xs:
        for y in rng.sample(ys, min(len(ys), rng.randrange(3))):
            missing.add((x, y))
    addition, covered = f.absorb(
        xs, ys, lambda x, y: (x, y) not in missing)
    assert len(covered) >= len(ys) - 4
    assert f.is_valid() == []
    assert all(f.degree(y) == 2 for y in covered)
    assert all((x, y) not in missing for x, y in addition.edges() if y >= 100)
    assert set(covered).isdisjoint(set(ys) - set(covered))


def test_coloured_constraints():
    # classes alternate R/B; the exception flips {2,3} to red so that
    # 1-2-3 is a red path with red-class ends and alternating classes
    col = RestrictedColouring(10, [R, B, R, B, R, B, R, B, R, B], {2: [3]})
    ok = build([(1, 2), (2, 3)])
    assert ok.is_valid(ColouredForestConstraints(R, col)) == []
    dangling = build([(1, 2)])  # endpoint 2 is blue-class
    assert any("endpoint 2" in v for v in
               dangling.is_valid(ColouredForestConstraints(R, col)))
    bad = build([(1, 3)])       # red-red pair: classes cannot alternate
    assert bad.is_valid(ColouredForestConstraints(R, col)) != []
    assert any("not B" in v
               for v in bad.is_valid(ColouredForestConstraints(B, col)))


def test_forest_json_roundtrip(tmp_path):
    f = build([(1, 2), (2, 3), (8, 9)], isolated=(5,))
    d = f.to_json_dict()
    g = PathForest.from_json_dict(d)
    assert sorted(g.edges()) == sorted(f.edges())
    assert sorted(g.vertices()) == sorted(f.vertices())
    p = tmp_path / "forest.json"
    f.save(p)
    assert sorted(PathForest.load(p).edges()) == sorted(f.edges())


@given(st.lists(st.tuples(st.integers(1, 15), st.integers(1, 15)),
                max_size=25))
@settings(max_examples=80, deadline=None)
def test_random_growth_keeps_invariants(pairs):
    f = PathForest()
    for u, v in pairs:
        f.ensure_vertex(u)
        f.ensure_vertex(v)
        if u == v:
            continue
        try:
            f.add_edge(u, v)
        except (CycleError, DegreeError, ParameterError):
            continue
    assert f.is_valid() == []
    seen = sorted(itertools.chain.from_iterable(f.paths()))
    assert seen == sorted(f.vertices())
    assert f.spare_degree(f.vertices()) == sum(
        2 - f.degree(v) for v in f.vertices())
