"""Stitching engine output into one long monochromatic path.

The two-step idea: any two same-class vertices can be joined by a short
path of their colour avoiding any given finite set (in the infinite graph;
on a finite truncation the search may fail, which is reported, not raised).
Repeatedly running the engine on the suffix beyond everything used so far
yields dense path-forests whose paths are then joined end to end.
"""

from __future__ import annotations

from dataclasses import dataclass

from .colouring import Colour, RestrictedColouring
from .engine import run
from .errors import ConsistencyError, FormatError, ParameterError


def join_avoiding(colouring, colour: Colour, x1: int, x2: int, avoid,
                  search_bound: int):
    """Shortest path of the given colour from x1 to x2 in [search_bound]
    minus the avoided set, by breadth-first search.  Returns the vertex
    list [x1, ..., x2], or None when the truncation disconnects them."""
    if x1 == x2:
        raise ParameterError("endpoints must differ")
    if colouring.class_of(x1) is not colour or colouring.class_of(x2) is not colour:
        raise ParameterError(
            f"endpoints {x1}, {x2} must both be of class {colour}")
    avoid = set(avoid)
    if x1 in avoid or x2 in avoid:
        raise ParameterError("avoided set must exclude both endpoints")
    bound = min(search_bound, colouring.horizon)
    parent = {x1: None}
    frontier = [x1]
    while frontier:
        next_frontier = []
        for v in frontier:
            for w in range(1, bound + 1):
                if w == v or w in parent or w in avoid:
                    continue
                if colouring.edge_colour(v, w) is not colour:
                    continue
                parent[w] = v
                if w == x2:
                    path = [w]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    path.reverse()
                    return path
                next_frontier.append(w)
        frontier = next_frontier
    return None


@dataclass
class AssembledPath:
    colour: Colour
    path: list
    markers: list          # n_i after each iteration
    densities: list        # |V(path) ∩ [n_i]| / n_i, retrospective
    incomplete: bool = False
    dropped: int = 0       # forest paths abandoned after failed joins

    def checkpoints(self):
        return list(zip(self.markers, self.densities))

    def to_json_dict(self) -> dict:
        return {
            "colour": self.colour.value,
            "path": list(self.path),
            "checkpoints": [{"n": n, "density": d}
                            for n, d in self.checkpoints()],
            "incomplete": self.incomplete,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "AssembledPath":
        for key in ("colour", "path", "checkpoints"):
            if key not in data:
                raise FormatError(f"assembled path missing key {key!r}")
        markers = [cp["n"] for cp in data["checkpoints"]]
        densities = [cp["density"] for cp in data["checkpoints"]]
        return cls(colour=Colour(data["colour"]), path=list(data["path"]),
                   markers=markers, densities=densities,
                   incomplete=bool(data.get("incomplete", False)))


def shift_suffix(colouring: RestrictedColouring, offset: int) -> RestrictedColouring:
    """The induced colouring on vertices beyond `offset`, renumbered from 1.

    Edge colours between suffix vertices only depend on the smaller
    endpoint's class and exception list, so shifting both is exact.
    """
    if not 0 <= offset < colouring.horizon:
        raise ParameterError(
            f"offset must be in [0, {colouring.horizon}), got {offset}")
    hor = colouring.horizon - offset
    classes = [colouring.class_of(offset + j) for j in range(1, hor + 1)]
    opp = {}
    for j in range(1, hor + 1):
        ws = [w - offset for w in colouring.opp_list(offset + j)]
        if ws:
            opp[j] = ws
    return RestrictedColouring(hor, classes, opp)


class _Assembler:
    def __init__(self, colouring, ell):
        self.colouring = colouring
        self.ell = ell
        self.paths = {Colour.RED: [], Colour.BLUE: []}
        self.used: set[int] = set()
        self.markers: list[int] = []
        self.choices: list[Colour] = []
        self.incomplete = False
        self.dropped = 0

    def absorb(self, colour: Colour, new_paths: list[list[int]]) -> None:
        """Join the colour's assembled path with each new path in turn."""
        pending = [p for p in new_paths if p]
        for p in pending:
            self.used.update(p)
        current = self.paths[colour]
        for piece in pending:
            if not current:
                current = list(piece)
                continue
            joined = self._join(colour, current, piece)
            if joined is None:
                # the truncation ran out of connectors; leave the piece out
                self.incomplete = True
                self.dropped += 1
                continue
            current = joined
        self.paths[colour] = current
        self.used.update(current)

    def _join(self, colour, current, piece):
        other = set(self.paths[colour.opposite()])
        for target in (piece, list(reversed(piece))):
            x1, x2 = current[-1], target[0]
            avoid = (self.used | other | set(current) | set(target)) - {x1, x2}
            link = join_avoiding(self.colouring, colour, x1, x2, avoid,
                                 self.colouring.horizon)
            if link is not None:
                connectors = link[1:-1]
                self.used.update(connectors)
                return current + connectors + target
        return None


def assemble(colouring: RestrictedColouring, ell: int, iterations: int,
             spans) -> AssembledPath:
    """Run the full finite-scale assembly loop.

    Per iteration i (1-based): everything at or below r = max(used vertex,
    current marker) is set aside; the engine runs on the shifted suffix for
    spans[i-1] rounds; the recorded round t_i maximizing the better
    coverage ratio, restricted to t >= 2*(i+1)*r when possible, fixes the
    new marker n_i = r + t_i; the denser forest's paths are joined into
    that colour's assembled path, the other colour carries over untouched.
    The reported path is the colour selected last; densities at all markers
    are recomputed for it retrospectively.  Join failures on the truncation
    flag the result incomplete instead of raising.
    """
    if iterations < 1:
        raise ParameterError(f"iterations must be >= 1, got {iterations}")
    spans = list(spans)
    if len(spans) < iterations:
        raise ParameterError(
            f"need {iterations} span entries, got {len(spans)}")
    state = _Assembler(colouring, ell)
    n_cur = 1
    for i in range(1, iterations + 1):
        high = max((max(p) if p else 0) for p in state.paths.values())
        r = max(high, n_cur)
        if r >= colouring.horizon - 1:
            state.incomplete = True
            break
        suffix = shift_suffix(colouring, r)
        reach = suffix.max_forward_reach()
        rounds = min(spans[i - 1], suffix.horizon - reach)
        if rounds < 1:
            state.incomplete = True
            break
        trace, eng = run(suffix, ell, rounds)
        lo = max(1, min(2 * (i + 1) * r, rounds))
        best_t, best_cover = lo, -1
        for row in trace[lo - 1:]:
            cover = max(row.c_R, row.c_B)
            # keep the first t maximizing cover/t, compared exactly
            if cover * best_t > best_cover * row.t:
                best_t, best_cover = row.t, cover
        row = trace[best_t - 1]
        colour = Colour.RED if row.c_R >= row.c_B else Colour.BLUE
        forest_paths = [[v + r for v in p] for p in eng.forest[colour].paths()]
        state.absorb(colour, forest_paths)
        state.choices.append(colour)
        n_cur = r + best_t
        state.markers.append(n_cur)
    if not state.choices:
        raise ConsistencyError("assembly finished without any iteration")
    final_colour = state.choices[-1]
    path = state.paths[final_colour]
    vertices = set(path)
    densities = [len([v for v in vertices if v <= n]) / n
                 for n in state.markers]
    return AssembledPath(colour=final_colour, path=path,
                         markers=state.markers, densities=densities,
                         incomplete=state.incomplete, dropped=state.dropped)
