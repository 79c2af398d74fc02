import pytest

import pathforest as pf


@pytest.fixture(scope="session")
def small_random():
    """200-vertex colouring with a short exception window."""
    return pf.generate("random", 0, 200, q=0.2, window=8)


@pytest.fixture(scope="session")
def medium_random():
    return pf.generate("random", 42, 400, q=0.2, window=16)


def mono_path_ok(colouring, colour, path):
    """True when `path` is a simple path whose edges all carry `colour`."""
    if len(set(path)) != len(path):
        return False
    return all(colouring.edge_colour(a, b) is colour
               for a, b in zip(path, path[1:]))
