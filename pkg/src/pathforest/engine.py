"""Round-by-round construction of one red and one blue path-forest.

Each round considers the next vertex t.  t always joins the forest of its
own class as a (possibly pre-existing) vertex.  Joining the opposite forest
happens in one of two ways: immediately through two forward edges when t
still has three usable opposite-class neighbours ahead of it, or much later
through backward edges when a reserved batch of opposite-class vertices
(the omega set) absorbs a waiting batch (the gamma set).  The available
list A of each class records vertices whose forward prospects are settled;
phi maps every vertex to the round at which it enters its list.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .colouring import Colour, RestrictedColouring
from .errors import (AbsorptionError, ConsistencyError, HorizonError,
                     ParameterError)
from .forest import PathForest, select_sigma

TYPE_FORWARD = "W"      # attached ahead via two forward edges
TYPE_STRANDED = "X"     # nothing ahead and no reserve to wait for
TYPE_WAITING = "Y"      # may still be absorbed backwards
TYPE_SATURATED = "Z"    # already full when the reserve was formed

EVENT_NONE = "none"
EVENT_FORWARD = "forward_attach"
EVENT_BATCH = "batch_absorb"

_COLOURS = (Colour.RED, Colour.BLUE)


@dataclass
class RoundTrace:
    t: int
    c_R: int
    c_B: int
    rho_R: int
    rho_B: int
    counts: dict          # {"R": {"W":..,"X":..,"Y":..,"Z":..}, "B": {...}}
    type: str             # type assigned to vertex t
    event: str
    len_A_R: int
    len_A_B: int

    def to_json_dict(self) -> dict:
        return {
            "t": self.t,
            "cR": self.c_R,
            "cB": self.c_B,
            "rhoR": self.rho_R,
            "rhoB": self.rho_B,
            "counts": self.counts,
            "type": self.type,
            "event": self.event,
            "lenAR": self.len_A_R,
            "lenAB": self.len_A_B,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "RoundTrace":
        return cls(t=data["t"], c_R=data["cR"], c_B=data["cB"],
                   rho_R=data["rhoR"], rho_B=data["rhoB"],
                   counts=data["counts"], type=data["type"],
                   event=data["event"], len_A_R=data["lenAR"],
                   len_A_B=data["lenAB"])


CSV_COLUMNS = ["t", "cR", "cB", "rhoR", "rhoB",
               "WR", "XR", "YR", "ZR", "WB", "XB", "YB", "ZB",
               "type", "event", "lenAR", "lenAB"]


def trace_csv_row(row: RoundTrace) -> list:
    d = row.to_json_dict()
    return ([d["t"], d["cR"], d["cB"], d["rhoR"], d["rhoB"]]
            + [d["counts"]["R"][k] for k in "WXYZ"]
            + [d["counts"]["B"][k] for k in "WXYZ"]
            + [d["type"], d["event"], d["lenAR"], d["lenAB"]])


def trace_to_jsonl(rows: Iterable[RoundTrace]) -> bytes:
    buf = io.StringIO()
    for row in rows:
        buf.write(json.dumps(row.to_json_dict(), sort_keys=True,
                             separators=(",", ":")))
        buf.write("\n")
    return buf.getvalue().encode("ascii")


class EngineState:
    """Everything the algorithm carries between rounds, per colour where it
    applies.  Mutated in place by step()."""

    def __init__(self, colouring: RestrictedColouring, ell: int):
        if ell < 2 or ell % 2:
            raise ParameterError(f"ell must be an even integer >= 2, got {ell}")
        self.colouring = colouring
        self.ell = ell
        self.t = 0
        self.forest = {c: PathForest() for c in _COLOURS}
        self.A: dict[Colour, list[int]] = {c: [] for c in _COLOURS}
        # vertex -> 1-based position in its A list (A only ever grows)
        self.A_pos: dict[Colour, dict[int, int]] = {c: {} for c in _COLOURS}
        # None when empty, else (members in A-order, creation round)
        self.omega: dict[Colour, Optional[tuple[tuple[int, ...], int]]] = {
            c: None for c in _COLOURS}
        self.gamma: dict[Colour, list[int]] = {c: [] for c in _COLOURS}
        self.phi: dict[int, int] = {}
        self.type_of: dict[int, str] = {}
        self.counts = {c: {"W": 0, "X": 0, "Y": 0, "Z": 0} for c in _COLOURS}
        # incremental trace quantities
        self.c = {c: 0 for c in _COLOURS}
        self.rho = {c: 0 for c in _COLOURS}
        # forest vertices above the current round, counted once reached
        self._pending_cover: dict[Colour, dict[int, int]] = {
            c: {} for c in _COLOURS}
        # round at which each forest edge appeared: (colour, min, max) -> round
        self.edge_round: dict[tuple[Colour, int, int], int] = {}
        # maturation schedule: round -> vertices v with phi(v) = round > v
        self._due: dict[int, list[int]] = {}
        # spare-degree units lost by A members, per colour: (round, position)
        self.spare_events: dict[Colour, list[tuple[int, int]]] = {
            c: [] for c in _COLOURS}

    # -- helpers -----------------------------------------------------------

    def _set_phi(self, v: int, value: int) -> None:
        if v in self.phi:
            raise ConsistencyError(f"phi({v}) assigned twice")
        self.phi[v] = value
        if value > v:
            self._due.setdefault(value, []).append(v)

    def _append_available(self, colour: Colour, v: int) -> None:
        self.A[colour].append(v)
        self.A_pos[colour][v] = len(self.A[colour])
        self.rho[colour] += 2 - self.forest[colour].degree(v)

    def _add_forest_edge(self, colour: Colour, u: int, v: int,
                         round_no: int) -> None:
        """Record bookkeeping for an edge already inserted into the forest."""
        a, b = (u, v) if u < v else (v, u)
        self.edge_round[(colour, a, b)] = round_no
        pos_map = self.A_pos[colour]
        for w in (u, v):
            pos = pos_map.get(w)
            if pos is not None:
                self.rho[colour] -= 1
                self.spare_events[colour].append((round_no, pos))

    def _cover(self, colour: Colour, v: int, round_no: int) -> None:
        """v just joined the colour's forest; count it now or when reached."""
        if v <= round_no:
            self.c[colour] += 1
        else:
            pending = self._pending_cover[colour]
            pending[v] = pending.get(v, 0) + 1

    def degree_at(self, colour: Colour, v: int, round_no: int) -> int:
        """Degree of v in the colour's forest as of the end of a past round."""
        return sum(1 for w in self.forest[colour].neighbours(v)
                   if self.edge_round[(colour, min(v, w), max(v, w))] <= round_no)

    def omega_members(self, colour: Colour) -> tuple[int, ...]:
        entry = self.omega[colour]
        return entry[0] if entry else ()

    def classify(self, t: int) -> str:
        """Type of the current round's vertex, given steps 1-2 are done."""
        own = self.colouring.class_of(t)
        opp = own.opposite()
        opp_forest = self.forest[opp]
        j_set = [w for w in self.colouring.forward_opposite_neighbours(t)
                 if opp_forest.degree(w) < 2]
        if len(j_set) >= 3:
            return TYPE_FORWARD
        entry = self.omega[opp]
        if entry is None:
            return TYPE_STRANDED
        _, created = entry
        if self.degree_at(own, t, created) < 2:
            return TYPE_WAITING
        return TYPE_SATURATED

    def _refresh_omega(self, colour: Colour, round_no: int,
                       require_empty: bool) -> None:
        """Create (or, after a batch, recreate-or-drop) the reserve set.

        The stored round is the first round at which the reserve equalled its
        current member set; a re-pick that selects the same members keeps it.
        """
        if require_empty:
            if self.omega[colour] is None and self.rho[colour] >= self.ell:
                members = select_sigma(self.forest[colour], self.A[colour],
                                       self.ell)
                self.omega[colour] = (tuple(members), round_no)
        else:
            if self.rho[colour] >= self.ell:
                members = tuple(select_sigma(self.forest[colour],
                                             self.A[colour], self.ell))
                prev = self.omega[colour]
                if prev is not None and prev[0] == members:
                    return
                self.omega[colour] = (members, round_no)
            else:
                self.omega[colour] = None

    # -- one round ----------------------------------------------------------

    def step(self) -> RoundTrace:
        t = self.t + 1
        if t > self.colouring.horizon:
            raise HorizonError(f"round {t} beyond horizon {self.colouring.horizon}")
        own = self.colouring.class_of(t)
        opp = own.opposite()
        own_forest = self.forest[own]
        opp_forest = self.forest[opp]

        for colour in _COLOURS:
            self.c[colour] += self._pending_cover[colour].pop(t, 0)

        # step 1: t joins its own forest (it may already be there through an
        # earlier forward attachment)
        if t not in own_forest:
            own_forest.ensure_vertex(t)
            self.c[own] += 1

        # step 2: vertices maturing this round join the opposite list,
        # ascending; then the opposite reserve may form
        for v in sorted(self._due.pop(t, ())):
            self._append_available(opp, v)
        self._refresh_omega(opp, t, require_empty=True)

        # step 3
        kind = self.classify(t)
        self.type_of[t] = kind
        self.counts[own][kind] += 1

        # step 4
        event = EVENT_NONE
        if kind == TYPE_FORWARD:
            j_set = [w for w in self.colouring.forward_opposite_neighbours(t)
                     if opp_forest.degree(w) < 2]
            already = {w for w in j_set if w in opp_forest}
            j1, j2 = opp_forest.attach_two(t, j_set)
            self._add_forest_edge(opp, t, j1, t)
            self._add_forest_edge(opp, t, j2, t)
            self._cover(opp, t, t)
            for w in (j1, j2):
                if w not in already:
                    self._cover(opp, w, t)
            self._set_phi(t, j1)
            event = EVENT_FORWARD
        else:
            self._set_phi(t, t)
            self._append_available(own, t)
            self._refresh_omega(own, t, require_empty=True)
            if kind == TYPE_WAITING:
                batch = self.gamma[own] + [t]
                if len(batch) < self.ell // 2:
                    self.gamma[own] = batch
                else:
                    self._run_batch(t, own, opp, batch)
                    event = EVENT_BATCH

        self.t = t
        return RoundTrace(
            t=t,
            c_R=self.c[Colour.RED],
            c_B=self.c[Colour.BLUE],
            rho_R=self.rho[Colour.RED],
            rho_B=self.rho[Colour.BLUE],
            counts={"R": dict(self.counts[Colour.RED]),
                    "B": dict(self.counts[Colour.BLUE])},
            type=kind,
            event=event,
            len_A_R=len(self.A[Colour.RED]),
            len_A_B=len(self.A[Colour.BLUE]),
        )

    def _run_batch(self, t: int, own: Colour, opp: Colour,
                   batch: list[int]) -> None:
        """Absorb the waiting batch into the opposite forest backwards."""
        opp_forest = self.forest[opp]
        xs = self.omega_members(opp)
        adjacent = lambda x, y: self.colouring.edge_colour(x, y) is opp
        try:
            addition, covered = opp_forest.absorb(xs, batch, adjacent)
        except AbsorptionError as exc:
            raise ConsistencyError(f"round {t}: {exc}") from exc
        for u, v in addition.edges():
            self._add_forest_edge(opp, u, v, t)
        for y in covered:
            self._cover(opp, y, t)
        self._refresh_omega(opp, t, require_empty=False)
        self.gamma[own] = []


def init(colouring: RestrictedColouring, ell: int) -> EngineState:
    return EngineState(colouring, ell)


def run(colouring: RestrictedColouring, ell: int, rounds: int,
        checks: str = "none", progress=None):
    """Run the engine for a number of rounds.

    checks: "none" just runs; "full" re-verifies the documented invariants
    while running (per-round incremental checks, periodic deep audits, and
    end-of-run two-round facts) and raises InvariantViolation on the first
    failure.  Returns (trace row list, final state).
    """
    if rounds < 1:
        raise ParameterError(f"rounds must be >= 1, got {rounds}")
    if checks not in ("none", "full"):
        raise ParameterError(f"unknown checks level {checks!r}")
    reach = colouring.max_forward_reach()
    if rounds + reach > colouring.horizon:
        raise HorizonError(
            f"{rounds} rounds with forward reach {reach} exceed horizon "
            f"{colouring.horizon}")
    checker = None
    if checks == "full":
        from .invariants import RunChecker
        checker = RunChecker(ell, rounds)
    state = init(colouring, ell)
    trace: list[RoundTrace] = []
    for _ in range(rounds):
        row = state.step()
        trace.append(row)
        if checker is not None:
            checker.after_round(state, row)
        if progress is not None and state.t % 100 == 0:
            progress(state.t)
    if checker is not None:
        checker.after_run(state, trace)
    return trace, state


def write_trace_jsonl(path, rows: Iterable[RoundTrace]) -> None:
    with open(path, "wb") as fh:
        fh.write(trace_to_jsonl(rows))


def write_trace_csv(path, rows: Iterable[RoundTrace]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(trace_csv_row(row))


def read_trace_jsonl(path) -> list[RoundTrace]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append(RoundTrace.from_json_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError) as exc:
                from .errors import FormatError
                raise FormatError(f"{path}:{lineno}: bad trace row: {exc}") from exc
    return rows
