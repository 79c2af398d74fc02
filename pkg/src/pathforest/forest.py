"""Path-forests: vertex-disjoint unions of paths with degree accounting.

The structure keeps, besides an adjacency map, a pairing of each current
path's two endpoints (an isolated vertex is paired with itself).  That makes
"are u and v ends of the same path" an O(1) dictionary probe, which the two
extension procedures below lean on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .colouring import Colour, RestrictedColouring
from .errors import (AbsorptionError, CycleError, DegreeError, FormatError,
                     ParameterError, SpareDegreeError)


@dataclass
class ColouredForestConstraints:
    """What a forest of a given colour must look like on top of being a
    path-forest: edges of that colour, endpoints of that colour's class,
    classes alternating along every path."""
    forest_colour: Colour
    colouring: RestrictedColouring


class PathForest:
    def __init__(self):
        self._adj: dict[int, list[int]] = {}
        # endpoint -> the other endpoint of its path; only vertices of
        # degree <= 1 appear here
        self._other_end: dict[int, int] = {}
        self._n_edges = 0

    # -- queries -----------------------------------------------------------

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    @property
    def n_edges(self) -> int:
        return self._n_edges

    def vertices(self):
        return self._adj.keys()

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u, nbrs in self._adj.items():
            for v in nbrs:
                if u < v:
                    out.append((u, v))
        return out

    def degree(self, v: int) -> int:
        """Degree of v; vertices not present count as degree 0."""
        nbrs = self._adj.get(v)
        return len(nbrs) if nbrs else 0

    def neighbours(self, v: int) -> tuple[int, ...]:
        return tuple(self._adj.get(v, ()))

    def same_path_ends(self, u: int, v: int) -> bool:
        """True iff u and v are the two ends of one path (u != v)."""
        return self._other_end.get(u) == v and u != v

    def spare_degree(self, vs: Iterable[int]) -> int:
        """Sum of (2 - degree(v)) over vs: how many more edge-slots the set
        can still accept."""
        return sum(2 - self.degree(v) for v in vs)

    # -- mutation ----------------------------------------------------------

    def ensure_vertex(self, v: int) -> None:
        if v not in self._adj:
            self._adj[v] = []
            self._other_end[v] = v

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ParameterError("no loops in a path-forest")
        self.ensure_vertex(u)
        self.ensure_vertex(v)
        if len(self._adj[u]) >= 2:
            raise DegreeError(f"vertex {u} already has degree 2")
        if len(self._adj[v]) >= 2:
            raise DegreeError(f"vertex {v} already has degree 2")
        eu = self._other_end[u]
        ev = self._other_end[v]
        if eu == v:
            raise CycleError(f"{u} and {v} are ends of the same path")
        self._adj[u].append(v)
        self._adj[v].append(u)
        self._n_edges += 1
        del self._other_end[u]
        del self._other_end[v]
        self._other_end[eu] = ev
        self._other_end[ev] = eu

    def copy(self) -> "PathForest":
        dup = PathForest()
        dup._adj = {v: list(nbrs) for v, nbrs in self._adj.items()}
        dup._other_end = dict(self._other_end)
        dup._n_edges = self._n_edges
        return dup

    # -- the two extension procedures ---------------------------------------

    def attach_two(self, x: int, js: Sequence[int]) -> tuple[int, int]:
        """Join a fresh vertex x to two members of js, keeping a path-forest.

        js must hold at least three vertices of degree <= 1 (then two of them
        necessarily lie on different paths).  Among the valid pairs the one
        maximising min{j1, j2} is chosen, ties broken by the larger max.
        Returns the chosen pair (ascending).
        """
        if x in self._adj and self.degree(x) > 0:
            raise ParameterError(f"attachment vertex {x} already has edges")
        cand = sorted(set(js))
        if len(cand) < 3:
            raise ParameterError(
                f"need at least 3 candidate neighbours, got {len(cand)}")
        for j in cand:
            if self.degree(j) >= 2:
                raise ParameterError(f"candidate {j} already has degree 2")
        best: tuple[int, int] | None = None
        for i in range(len(cand)):
            for k in range(i + 1, len(cand)):
                a, b = cand[i], cand[k]
                if self.same_path_ends(a, b):
                    continue
                if best is None or (a, b) > best:
                    best = (a, b)
        # cand is ascending, so (a, b) always has a = min and b = max and the
        # tuple comparison realizes "max the min, then max the max".
        if best is None:  # unreachable for >= 3 degree-<=1 vertices
            raise ParameterError("no valid pair among candidates")
        j1, j2 = best
        self.add_edge(x, j1)
        self.add_edge(x, j2)
        return j1, j2

    def absorb(self, xs: Sequence[int], ys: Sequence[int],
               adjacent: Callable[[int, int], bool]
               ) -> tuple["PathForest", list[int]]:
        """Sweep most of ys into the forest via backward edges into xs.

        Preconditions (raised as AbsorptionError when violated): every x is a
        forest vertex and the xs carry spare degree >= 2|ys|; no y is in the
        forest; every x is adjacent to all but at most 2 of ys.  Greedy loop:
        while at least 5 ys are uncovered, take the first (in xs-order) valid
        pair of degree-<2 xs on different paths and hook the smallest
        uncovered y adjacent to both.  Covers all but at most 4 of ys.

        Returns (the forest formed by the new edges alone, covered ys).
        """
        xs = list(xs)
        ys_sorted = sorted(ys)
        for x in xs:
            if x not in self._adj:
                raise AbsorptionError(f"absorption source {x} not in forest")
        if self.spare_degree(xs) < 2 * len(ys_sorted):
            raise AbsorptionError(
                f"spare degree {self.spare_degree(xs)} < 2*|Y| = {2 * len(ys_sorted)}")
        for y in ys_sorted:
            if y in self._adj:
                raise AbsorptionError(f"absorption target {y} already in forest")
        for x in xs:
            misses = sum(1 for y in ys_sorted if not adjacent(x, y))
            if misses > 2:
                raise AbsorptionError(
                    f"source {x} misses {misses} > 2 targets")

        addition = PathForest()
        uncovered = list(ys_sorted)
        covered: list[int] = []
        while len(uncovered) >= 5:
            pair = self._first_open_pair(xs)
            if pair is None:  # impossible while spare >= 2|uncovered| >= 10
                raise AbsorptionError("no two unsaturated sources on distinct paths")
            x1, x2 = pair
            y = next(y for y in uncovered if adjacent(x1, y) and adjacent(x2, y))
            self.add_edge(x1, y)
            self.add_edge(x2, y)
            addition.add_edge(x1, y)
            addition.add_edge(x2, y)
            uncovered.remove(y)
            covered.append(y)
        return addition, sorted(covered)

    def _first_open_pair(self, xs: Sequence[int]) -> tuple[int, int] | None:
        open_xs = [x for x in xs if self.degree(x) < 2]
        for i in range(len(open_xs)):
            for k in range(i + 1, len(open_xs)):
                if not self.same_path_ends(open_xs[i], open_xs[k]):
                    return open_xs[i], open_xs[k]
        return None

    # -- validation and serialization ---------------------------------------

    def paths(self) -> list[list[int]]:
        """Every path as a vertex list, each starting from its smaller end,
        sorted by first vertex.  Isolated vertices are singletons."""
        out = []
        seen = set()
        for a, b in self._other_end.items():
            if a in seen:
                continue
            start = min(a, b)
            seen.add(a)
            seen.add(b)
            walk = [start]
            prev = None
            cur = start
            while True:
                nxt = [w for w in self._adj[cur] if w != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                walk.append(cur)
            out.append(walk)
        return sorted(out)

    def is_valid(self, constraints: ColouredForestConstraints | None = None
                 ) -> list[str]:
        """Recheck everything from the adjacency alone; returns violations."""
        violations: list[str] = []
        edge_count = 0
        for v, nbrs in self._adj.items():
            if len(nbrs) > 2:
                violations.append(f"vertex {v} has degree {len(nbrs)}")
            if len(set(nbrs)) != len(nbrs):
                violations.append(f"vertex {v} has a repeated neighbour")
            for w in nbrs:
                if v not in self._adj.get(w, ()):
                    violations.append(f"edge {v}-{w} not symmetric")
                if v < w:
                    edge_count += 1
        # acyclicity: in a degree-<=2 graph, every component is a path iff
        # #edges = #vertices - #components
        comps = 0
        seen: set[int] = set()
        for v in self._adj:
            if v in seen:
                continue
            comps += 1
            stack = [v]
            seen.add(v)
            while stack:
                cur = stack.pop()
                for w in self._adj[cur]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        if edge_count != len(self._adj) - comps:
            violations.append(
                f"cycle present: {edge_count} edges, {len(self._adj)} vertices, "
                f"{comps} components")
        if violations:
            return violations

        if constraints is not None:
            col = constraints.forest_colour
            colouring = constraints.colouring
            for u, v in self.edges():
                if colouring.edge_colour(u, v) is not col:
                    violations.append(f"edge {u}-{v} is not {col}")
            for path in self.paths():
                if colouring.class_of(path[0]) is not col:
                    violations.append(f"endpoint {path[0]} has class "
                                      f"{colouring.class_of(path[0])}")
                if colouring.class_of(path[-1]) is not col:
                    violations.append(f"endpoint {path[-1]} has class "
                                      f"{colouring.class_of(path[-1])}")
                for a, b in zip(path, path[1:]):
                    if colouring.class_of(a) is colouring.class_of(b):
                        violations.append(
                            f"classes do not alternate at {a}-{b}")
        return violations

    def to_json_dict(self) -> dict:
        return {"paths": self.paths()}

    @classmethod
    def from_json_dict(cls, data: dict) -> "PathForest":
        if "paths" not in data or not isinstance(data["paths"], list):
            raise FormatError("forest object needs a 'paths' list")
        forest = cls()
        for path in data["paths"]:
            if not isinstance(path, list) or not path:
                raise FormatError("each path must be a non-empty list")
            forest.ensure_vertex(path[0])
            for a, b in zip(path, path[1:]):
                forest.add_edge(a, b)
        return forest

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "PathForest":
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise FormatError(
                    f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}"
                ) from exc
        return cls.from_json_dict(data)

    def __repr__(self) -> str:
        return f"PathForest(vertices={len(self._adj)}, edges={self._n_edges})"


def select_sigma(forest: PathForest, ordered: Sequence[int], ell: int) -> list[int]:
    """Reserve an inclusion-minimal chunk of an ordered vertex list whose
    spare degree lands in {ell, ell+1}.

    Take the shortest prefix with spare >= ell, keep its positive-spare
    members, then scan once in order dropping anything whose removal keeps
    the total >= ell.  The result (in input order) is inclusion-minimal, all
    members have degree <= 1, and its spare degree is ell or ell+1.
    """
    if ell < 2 or ell % 2:
        raise ParameterError(f"ell must be an even integer >= 2, got {ell}")
    total = 0
    prefix_end = None
    for i, v in enumerate(ordered):
        total += 2 - forest.degree(v)
        if total >= ell:
            prefix_end = i
            break
    if prefix_end is None:
        raise SpareDegreeError(
            f"spare degree {total} of the full list is below ell={ell}")
    kept = [v for v in ordered[:prefix_end + 1] if forest.degree(v) < 2]
    for v in list(kept):
        spare = 2 - forest.degree(v)
        if total - spare >= ell:
            kept.remove(v)
            total -= spare
    return kept
