import pytest

import pathforest as pf
from pathforest import Colour
from pathforest.assembly import (AssembledPath, assemble, join_avoiding,
                                 shift_suffix)
from pathforest.colouring import RestrictedColouring
from pathforest.errors import ParameterError
from conftest import mono_path_ok

R, B = Colour.RED, Colour.BLUE


@pytest.fixture(scope="module")
def long_random():
    return pf.generate("random", 3, 1500, q=0.15, window=16)


def test_shift_suffix_relabels(long_random):
    sh = shift_suffix(long_random, 100)
    assert sh.horizon == 1400
    assert sh.class_of(1) is long_random.class_of(101)
    assert sh.edge_colour(2, 5) is long_random.edge_colour(102, 105)
    assert sh.check_restricted() == []


def test_join_direct_edge(long_random):
    cls = long_random.class_of(5)
    path = join_avoiding(long_random, cls, 5, 8, avoid={6, 7},
                         search_bound=300)
    assert path == [5, 8]  # the direct edge already has the right colour


def test_join_needs_connector(long_random):
    """Find a same-class pair whose direct edge is wrong-coloured; the
    joining path must route around it, through permitted vertices only."""
    cls = long_random.class_of(5)
    partner = next(
        v for v in range(6, 200)
        if long_random.class_of(v) is cls
        and long_random.edge_colour(5, v) is not cls)
    avoid = {6, 7, 8}
    path = join_avoiding(long_random, cls, 5, partner, avoid=avoid,
                         search_bound=400)
    assert path is not None
    assert path[0] == 5 and path[-1] == partner
    assert len(path) >= 3
    assert mono_path_ok(long_random, cls, path)
    assert not set(path[1:-1]) & avoid


def test_join_gives_up_when_boxed_in():
    col = RestrictedColouring(5, [R] * 5, {1: [2]})  # edge {1,2} is blue
    assert join_avoiding(col, R, 1, 2, avoid={3, 4, 5},
                         search_bound=5) is None


def test_join_validates_classes(long_random):
    cls = long_random.class_of(5)
    other = next(v for v in range(6, 40)
                 if long_random.class_of(v) is not cls)
    with pytest.raises(ParameterError):
        join_avoiding(long_random, cls, 5, other, avoid=set(),
                      search_bound=100)


def test_assemble_frozen(long_random):
    ap = assemble(long_random, 8, 3, spans=(40, 80, 160))
    assert ap.colour is R
    assert len(ap.path) == 108
    assert ap.markers == [5, 135, 307]
    assert not ap.incomplete
    assert ap.dropped == 0
    assert len(ap.densities) == 3
    assert mono_path_ok(long_random, ap.colour, ap.path)


def test_assemble_deterministic(long_random):
    a = assemble(long_random, 8, 2, spans=(40, 80))
    b = assemble(long_random, 8, 2, spans=(40, 80))
    assert a.to_json_dict() == b.to_json_dict()


def test_assembled_path_roundtrip(long_random):
    ap = assemble(long_random, 8, 2, spans=(40, 80))
    d = ap.to_json_dict()
    back = AssembledPath.from_json_dict(d)
    assert back.to_json_dict() == d
    assert list(back.checkpoints()) == list(ap.checkpoints())
