"""Finitely-described two-edge-colourings of a complete graph on 1..horizon.

Two encodings live here.  ``RestrictedColouring`` stores a colour class per
vertex plus a finite forward exception list per vertex; the colour of any
edge is decoded from the smaller endpoint's data, so every vertex has only
finitely many edges of the colour opposite to its class.  ``ExplicitColouring``
is a plain upper-triangular matrix for small complete graphs and exists for
the exact solvers.
"""

from __future__ import annotations

import json
import random
from enum import Enum
from typing import Callable, Iterable, Mapping

from .errors import FormatError, HorizonError, ParameterError


class Colour(Enum):
    RED = "R"
    BLUE = "B"

    def opposite(self) -> "Colour":
        return Colour.BLUE if self is Colour.RED else Colour.RED

    def __str__(self) -> str:
        return self.value


def _parse_colour(ch: str, where: str) -> Colour:
    if ch == "R":
        return Colour.RED
    if ch == "B":
        return Colour.BLUE
    raise FormatError(f"{where}: expected 'R' or 'B', got {ch!r}")


class RestrictedColouring:
    """A two-edge-colouring with per-vertex classes and forward exceptions.

    Vertices are 1-based.  The colour of the edge {u, v} with a = min(u, v)
    is the class of a, flipped iff max(u, v) appears in a's exception list.
    Instances are immutable after construction.
    """

    __slots__ = ("horizon", "_classes", "_opp")

    def __init__(self, horizon: int, classes: Iterable[Colour],
                 opp: Mapping[int, Iterable[int]]):
        if horizon < 1:
            raise ParameterError(f"horizon must be >= 1, got {horizon}")
        self.horizon = horizon
        self._classes = tuple(classes)
        if len(self._classes) != horizon:
            raise ParameterError(
                f"expected {horizon} vertex classes, got {len(self._classes)}")
        cleaned: dict[int, tuple[int, ...]] = {}
        for v, ws in opp.items():
            ws = tuple(sorted(set(ws)))
            if not ws:
                continue
            if not 1 <= v <= horizon:
                raise ParameterError(f"exception list for vertex {v} outside horizon")
            if ws[0] <= v or ws[-1] > horizon:
                raise ParameterError(
                    f"exception list of vertex {v} must lie in ({v}, {horizon}]")
            cleaned[v] = ws
        self._opp = cleaned

    def class_of(self, v: int) -> Colour:
        if not 1 <= v <= self.horizon:
            raise HorizonError(f"vertex {v} outside horizon {self.horizon}")
        return self._classes[v - 1]

    def opp_list(self, v: int) -> tuple[int, ...]:
        """The (possibly empty) sorted exception list of v."""
        if not 1 <= v <= self.horizon:
            raise HorizonError(f"vertex {v} outside horizon {self.horizon}")
        return self._opp.get(v, ())

    def edge_colour(self, u: int, v: int) -> Colour:
        if u == v:
            raise ParameterError("no loops: u and v must differ")
        a, b = (u, v) if u < v else (v, u)
        if b > self.horizon or a < 1:
            raise HorizonError(f"edge {{{u},{v}}} outside horizon {self.horizon}")
        base = self._classes[a - 1]
        return base.opposite() if b in self._opp.get(a, ()) else base

    def forward_opposite_neighbours(self, t: int) -> tuple[int, ...]:
        """Vertices w > t of the class opposite to t joined to t by an
        opposite-coloured edge.  Always finite: only exception-list members
        of t can qualify."""
        target = self.class_of(t).opposite()
        return tuple(w for w in self._opp.get(t, ())
                     if self._classes[w - 1] is target)

    def max_forward_reach(self) -> int:
        """max over v of (max opp(v) - v); how far past a round the engine
        may have to look."""
        if not self._opp:
            return 0
        return max(ws[-1] - v for v, ws in self._opp.items())

    def check_restricted(self) -> list[str]:
        """Structural self-check.  Returns a list of violation messages."""
        violations: list[str] = []
        if len(self._classes) != self.horizon:
            violations.append("class list length differs from horizon")
        for v, ws in sorted(self._opp.items()):
            if any(w <= v for w in ws):
                violations.append(f"opp({v}) contains a vertex <= {v}")
            if any(w > self.horizon for w in ws):
                violations.append(f"opp({v}) exceeds horizon")
        # Within the horizon, v can see an opposite-coloured edge only via
        # its own exception list or via a smaller endpoint's data, so the
        # count is at most |opp(v)| + (v - 1).
        for v in range(1, self.horizon + 1):
            own = self._classes[v - 1]
            bound = len(self._opp.get(v, ())) + (v - 1)
            count = sum(1 for w in range(1, self.horizon + 1)
                        if w != v and self.edge_colour(v, w) is not own)
            if count > bound:
                violations.append(
                    f"vertex {v} has {count} opposite-coloured edges, bound {bound}")
        return violations

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "classes": "".join(c.value for c in self._classes),
            "opp": {str(v): list(ws) for v, ws in sorted(self._opp.items())},
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "RestrictedColouring":
        for key in ("horizon", "classes", "opp"):
            if key not in data:
                raise FormatError(f"colouring object missing key {key!r}")
        horizon = data["horizon"]
        if not isinstance(horizon, int):
            raise FormatError("'horizon' must be an integer")
        raw = data["classes"]
        if not isinstance(raw, str) or len(raw) != horizon:
            raise FormatError(
                f"'classes' must be a string of length {horizon}")
        classes = [_parse_colour(ch, f"classes[{i}]") for i, ch in enumerate(raw)]
        opp: dict[int, list[int]] = {}
        for key, ws in data["opp"].items():
            try:
                v = int(key)
            except ValueError as exc:
                raise FormatError(f"opp key {key!r} is not a vertex") from exc
            if not isinstance(ws, list) or not all(isinstance(w, int) for w in ws):
                raise FormatError(f"opp[{key}] must be a list of integers")
            opp[v] = ws
        try:
            return cls(horizon, classes, opp)
        except ParameterError as exc:
            raise FormatError(str(exc)) from exc

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "RestrictedColouring":
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise FormatError(
                    f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}"
                ) from exc
        return cls.from_json_dict(data)

    def __eq__(self, other) -> bool:
        return (isinstance(other, RestrictedColouring)
                and self.horizon == other.horizon
                and self._classes == other._classes
                and self._opp == other._opp)

    def __repr__(self) -> str:
        return (f"RestrictedColouring(horizon={self.horizon}, "
                f"exceptions={sum(map(len, self._opp.values()))})")


def _pair_index(n: int, u: int, v: int) -> int:
    # row-major over pairs (u, v) with u < v
    return (u - 1) * n - u * (u + 1) // 2 + v - 1


class ExplicitColouring:
    """A full upper-triangular colour matrix for K_n, 1-based vertices."""

    __slots__ = ("n", "_upper")

    def __init__(self, n: int, upper: Iterable[Colour]):
        if n < 1:
            raise ParameterError(f"n must be >= 1, got {n}")
        self.n = n
        self._upper = tuple(upper)
        want = n * (n - 1) // 2
        if len(self._upper) != want:
            raise ParameterError(
                f"expected {want} entries for n={n}, got {len(self._upper)}")

    def edge_colour(self, u: int, v: int) -> Colour:
        if u == v:
            raise ParameterError("no loops: u and v must differ")
        a, b = (u, v) if u < v else (v, u)
        if a < 1 or b > self.n:
            raise HorizonError(f"edge {{{u},{v}}} outside [1, {self.n}]")
        return self._upper[_pair_index(self.n, a, b)]

    def to_json_dict(self) -> dict:
        return {"n": self.n, "upper": "".join(c.value for c in self._upper)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "ExplicitColouring":
        for key in ("n", "upper"):
            if key not in data:
                raise FormatError(f"explicit colouring missing key {key!r}")
        n = data["n"]
        raw = data["upper"]
        if not isinstance(n, int) or not isinstance(raw, str):
            raise FormatError("'n' must be an integer and 'upper' a string")
        if len(raw) != n * (n - 1) // 2:
            raise FormatError(
                f"'upper' must have {n * (n - 1) // 2} characters for n={n}")
        return cls(n, [_parse_colour(ch, f"upper[{i}]") for i, ch in enumerate(raw)])

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ExplicitColouring":
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise FormatError(
                    f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}"
                ) from exc
        return cls.from_json_dict(data)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ExplicitColouring)
                and self.n == other.n and self._upper == other._upper)


def restrict_to_prefix(c: RestrictedColouring, n: int) -> ExplicitColouring:
    """Materialize the first n vertices of a restricted colouring."""
    if n > c.horizon:
        raise HorizonError(f"prefix {n} exceeds horizon {c.horizon}")
    upper = [c.edge_colour(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    return ExplicitColouring(n, upper)


def generate(kind: str, seed: int, horizon: int, *, p: float = 0.5,
             q: float = 0.1, window: int = 32,
             block_lengths: Iterable[int] = (5, 5)) -> RestrictedColouring:
    """Deterministically build a restricted colouring.

    kind 'random': classes i.i.d. red with probability p; each vertex's
    exception list keeps every w in (v, min(v + window, horizon)] with
    probability q.  kind 'block': classes in alternating runs given by
    block_lengths (cycled), no exceptions.  kind 'all_one_colour': all red,
    no exceptions.
    """
    if horizon < 1:
        raise ParameterError(f"horizon must be >= 1, got {horizon}")
    if kind == "all_one_colour":
        return RestrictedColouring(horizon, [Colour.RED] * horizon, {})
    if kind == "block":
        lengths = [int(x) for x in block_lengths]
        if not lengths or any(x < 1 for x in lengths):
            raise ParameterError("block_lengths must be positive integers")
        classes: list[Colour] = []
        col = Colour.RED
        i = 0
        while len(classes) < horizon:
            classes.extend([col] * lengths[i % len(lengths)])
            col = col.opposite()
            i += 1
        return RestrictedColouring(horizon, classes[:horizon], {})
    if kind == "random":
        if not 0.0 <= p <= 1.0 or not 0.0 <= q <= 1.0:
            raise ParameterError("p and q must lie in [0, 1]")
        if window < 0:
            raise ParameterError("window must be >= 0")
        rng = random.Random(seed)
        classes = [Colour.RED if rng.random() < p else Colour.BLUE
                   for _ in range(horizon)]
        opp: dict[int, list[int]] = {}
        for v in range(1, horizon + 1):
            hi = min(v + window, horizon)
            ws = [w for w in range(v + 1, hi + 1) if rng.random() < q]
            if ws:
                opp[v] = ws
        return RestrictedColouring(horizon, classes, opp)
    raise ParameterError(f"unknown generator kind {kind!r}")
