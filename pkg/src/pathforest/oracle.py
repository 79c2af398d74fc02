"""Exact small-instance solvers used as ground truth.

Everything here is exponential and capped accordingly; the point is
trustworthiness, not speed.  The engine and its bounds are validated
against these on small prefixes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .colouring import Colour, ExplicitColouring
from .errors import ParameterError

MAX_DP_VERTICES = 20
MAX_COVER_PREFIX = 14
MAX_EXHAUSTIVE = 6


@dataclass
class OracleResult:
    best: int
    witness: list          # vertex sequence, or list of paths
    explored: int

    def to_json_dict(self) -> dict:
        return {"best": self.best, "witness": self.witness,
                "explored": self.explored}


def longest_mono_path(c: ExplicitColouring, colour: Colour) -> OracleResult:
    """Exact maximum vertex count of a path using only edges of one colour.

    Subset dynamic programming: for every vertex subset, keep the bitset of
    vertices at which some path through exactly that subset can end.  An
    isolated vertex is a one-vertex path, so the answer is at least 1.
    """
    n = c.n
    if n > MAX_DP_VERTICES:
        raise ParameterError(
            f"longest-path oracle capped at n = {MAX_DP_VERTICES}, got {n}")
    adj = [0] * n
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if c.edge_colour(u, v) is colour:
                adj[u - 1] |= 1 << (v - 1)
                adj[v - 1] |= 1 << (u - 1)
    full = 1 << n
    ends = [0] * full
    for v in range(n):
        ends[1 << v] = 1 << v
    best_mask = 1
    best_count = 1
    explored = 0
    for mask in range(1, full):
        e = ends[mask]
        if not e:
            continue
        explored += 1
        count = mask.bit_count()
        if count > best_count:
            best_count = count
            best_mask = mask
        rest = (full - 1) & ~mask
        while rest:
            bit = rest & -rest
            rest ^= bit
            if adj[bit.bit_length() - 1] & e:
                ends[mask | bit] |= bit
    witness = _reconstruct_path(best_mask, ends, adj)
    return OracleResult(best_count, witness, explored)


def _reconstruct_path(mask: int, ends: list[int], adj: list[int]) -> list[int]:
    e = ends[mask]
    v = (e & -e).bit_length() - 1
    path = [v + 1]
    while mask != 1 << v:
        prev_mask = mask ^ (1 << v)
        cand = ends[prev_mask] & adj[v]
        v = (cand & -cand).bit_length() - 1
        path.append(v + 1)
        mask = prev_mask
    path.reverse()
    return path


def longest_mono_path_naive(c: ExplicitColouring, colour: Colour) -> OracleResult:
    """Depth-first enumeration of every simple path; cross-check for the DP."""
    n = c.n
    if n > 10:
        raise ParameterError(f"naive search capped at n = 10, got {n}")
    good = {(u, v) for u in range(1, n + 1) for v in range(1, n + 1)
            if u != v and c.edge_colour(u, v) is colour}
    best = [1, [1] if n else []]
    explored = [0]

    def extend(path: list[int], used: set[int]) -> None:
        explored[0] += 1
        if len(path) > best[0]:
            best[0] = len(path)
            best[1] = list(path)
        tip = path[-1]
        for w in range(1, n + 1):
            if w not in used and (tip, w) in good:
                path.append(w)
                used.add(w)
                extend(path, used)
                used.discard(w)
                path.pop()

    for start in range(1, n + 1):
        extend([start], {start})
    return OracleResult(best[0], best[1], explored[0])


class _RollbackUnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.size = {x: 1 for x in items}
        self.trail: list[tuple] = []

    def find(self, x):
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.trail.append((ra, rb))
        return True

    def rollback(self, mark: int) -> None:
        while len(self.trail) > mark:
            ra, rb = self.trail.pop()
            self.parent[rb] = rb
            self.size[ra] -= self.size[rb]


def max_pathforest_coverage(c: ExplicitColouring, classes, forest_colour: Colour,
                            t: int) -> OracleResult:
    """Exact maximum of |V(F) ∩ [t]| over valid coloured path-forests.

    Validity: edges of forest_colour only, endpoints of forest_colour class,
    vertex classes alternating along every path.  Alternation means each
    opposite-class vertex is internal between two forest-class vertices, so
    the search reduces to choosing, per opposite-class vertex within the
    prefix, either nothing or a pair of forest-class "anchors", such that
    the chosen anchor pairs form a simple linear forest.  Forest-class
    vertices count whenever they are within the prefix (isolated vertices
    are valid paths); anchors beyond the prefix are allowed and simply do
    not count.
    """
    if t > MAX_COVER_PREFIX:
        raise ParameterError(
            f"coverage oracle capped at prefix {MAX_COVER_PREFIX}, got {t}")
    if t < 0 or t > c.n:
        raise ParameterError(f"prefix {t} outside [0, {c.n}]")
    cls = classes if callable(classes) else classes.__getitem__
    anchors = [v for v in range(1, c.n + 1) if cls(v) is forest_colour]
    base = sum(1 for v in anchors if v <= t)

    candidates = []
    for o in range(1, t + 1):
        if cls(o) is forest_colour:
            continue
        nbrs = [f for f in anchors
                if f != o and c.edge_colour(o, f) is forest_colour]
        pairs = list(combinations(nbrs, 2))
        if pairs:
            candidates.append((o, pairs))
    candidates.sort(key=lambda item: len(item[1]))

    degree = {f: 0 for f in anchors}
    uf = _RollbackUnionFind(anchors)
    chosen: dict[int, tuple[int, int]] = {}
    best = {"value": 0, "assign": {}}
    explored = [0]

    def free_slots() -> int:
        return sum(2 - d for d in degree.values())

    def search(i: int, placed: int) -> None:
        explored[0] += 1
        if placed > best["value"]:
            best["value"] = placed
            best["assign"] = dict(chosen)
        if i == len(candidates):
            return
        remaining = len(candidates) - i
        if placed + min(remaining, free_slots() // 2) <= best["value"]:
            return
        o, pairs = candidates[i]
        for f, g in pairs:
            if degree[f] < 2 and degree[g] < 2:
                mark = len(uf.trail)
                if uf.union(f, g):
                    degree[f] += 1
                    degree[g] += 1
                    chosen[o] = (f, g)
                    search(i + 1, placed + 1)
                    del chosen[o]
                    degree[f] -= 1
                    degree[g] -= 1
                    uf.rollback(mark)
        search(i + 1, placed)

    search(0, 0)
    witness = _forest_paths(anchors, best["assign"], t)
    return OracleResult(base + best["value"], witness, explored[0])


def _forest_paths(anchors, assign: dict[int, tuple[int, int]], t: int):
    """Materialize chosen anchor pairs into explicit paths."""
    link: dict[int, list[tuple[int, int]]] = {f: [] for f in anchors}
    for o, (f, g) in assign.items():
        link[f].append((o, g))
        link[g].append((o, f))
    seen: set[int] = set()
    paths = []
    for f in anchors:
        if f in seen or len(link[f]) > 1:
            continue
        seen.add(f)
        path = [f]
        prev = None
        cur = f
        while True:
            nxt = [(o, g) for o, g in link[cur] if g != prev]
            if not nxt:
                break
            o, g = nxt[0]
            path.extend([o, g])
            seen.add(g)
            prev, cur = cur, g
        paths.append(path)
    return paths


def enumerate_small(n: int, predicate, samples: int | None = None,
                    seed: int = 0):
    """Run a predicate over colourings of K_n; exhaustively for n <= 6,
    else over a seeded sample.  Returns the first colouring for which the
    predicate is falsy, or None."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    m = n * (n - 1) // 2
    if samples is None:
        if n > MAX_EXHAUSTIVE:
            raise ParameterError(
                f"exhaustive enumeration capped at n = {MAX_EXHAUSTIVE}; "
                f"pass samples= for larger n")
        codes = range(1 << m)
    else:
        rng = random.Random(seed)
        codes = (rng.getrandbits(m) for _ in range(samples))
    for code in codes:
        upper = [Colour.RED if code >> i & 1 else Colour.BLUE
                 for i in range(m)]
        colouring = ExplicitColouring(n, upper)
        if not predicate(colouring):
            return colouring
    return None
