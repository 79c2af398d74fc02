"""Executable checkers for the run-time guarantees of the engine.

Most checks are per-round facts about one engine state; the interesting ones
compare two rounds t <= t', where the spare degree of the *older* round's
available list, re-measured in the *newer* round's forest, drives the
statement.  A list member only ever loses spare degree through batch
absorptions, so the engine logs one (round, list position) unit per lost
slot and this module reconstructs any historical spare degree from those
events instead of storing forest snapshots.

Property identifiers ("L4.2(i)" ...) are stable rule names used in reports
and by the acceptance suite; see each checking function for what a rule
means operationally.
"""

from __future__ import annotations

import bisect
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .colouring import Colour
from .engine import EVENT_BATCH
from .errors import InvariantViolation, ParameterError

RED = Colour.RED
BLUE = Colour.BLUE


@dataclass
class CheckReport:
    property_id: str
    round_no: int          # the (later) round the check anchors to
    passed: bool
    lhs: object = None
    rhs: object = None
    note: str = ""


def _fail(reports: list[CheckReport], prop: str, t: int, lhs, rhs, note="") -> None:
    reports.append(CheckReport(prop, t, False, lhs, rhs, note))


def _raise_first(reports: list[CheckReport]) -> None:
    for rep in reports:
        if not rep.passed:
            raise InvariantViolation(rep.property_id, rep.round_no,
                                     rep.lhs, rep.rhs, rep.note)


# ---------------------------------------------------------------------------
# frozen spare degree
# ---------------------------------------------------------------------------

class _Fenwick:
    def __init__(self, n: int):
        self.n = n
        self.tree = [0] * (n + 1)

    def add(self, i: int) -> None:
        while i <= self.n:
            self.tree[i] += 1
            i += i & -i

    def prefix(self, i: int) -> int:
        total = 0
        i = min(i, self.n)
        while i > 0:
            total += self.tree[i]
            i -= i & -i
        return total


class FrozenRho:
    """Historical spare degrees of frozen available-list prefixes.

    Given the engine's unit log for one colour and the per-round live spare
    degree / list length, rho_s(A_t) — the spare degree of the list as of
    round t, measured in the forest as of round s — equals

        rho_live[t] - (units(round <= s, pos <= len_t) - units(round <= t, pos <= len_t))

    for any s (before or after t).
    """

    def __init__(self, events: Sequence[tuple[int, int]],
                 rho_live: Sequence[int], len_a: Sequence[int]):
        self._events = sorted(events)
        self._rho_live = rho_live
        self._len_a = len_a

    def _counts(self, queries: list[tuple[int, int]]) -> list[int]:
        """#events with round <= s and pos <= cap, for each (s, cap)."""
        out = [0] * len(queries)
        if not self._events:
            return out
        maxpos = max(p for _, p in self._events)
        fen = _Fenwick(maxpos)
        order = sorted(range(len(queries)), key=lambda i: queries[i][0])
        j = 0
        for qi in order:
            s, cap = queries[qi]
            while j < len(self._events) and self._events[j][0] <= s:
                fen.add(self._events[j][1])
                j += 1
            out[qi] = fen.prefix(cap)
        return out

    def at_pairs(self, pairs: list[tuple[int, int]]) -> list[int]:
        """rho_s(A_t) for each (t, s); rounds are 1-based."""
        queries = []
        for t, s in pairs:
            cap = self._len_a[t - 1]
            queries.append((s, cap))
            queries.append((t, cap))
        counts = self._counts(queries)
        out = []
        for i, (t, s) in enumerate(pairs):
            drop = counts[2 * i] - counts[2 * i + 1]
            out.append(self._rho_live[t - 1] - drop)
        return out

    def series_from(self, t: int, horizon: int) -> list[int]:
        """rho_s(A_t) for s = t .. horizon as a list (index 0 is s = t)."""
        cap = self._len_a[t - 1]
        series = [self._rho_live[t - 1]] * (horizon - t + 1)
        val = self._rho_live[t - 1]
        by_round: dict[int, int] = {}
        for r, p in self._events:
            if t < r <= horizon and p <= cap:
                by_round[r] = by_round.get(r, 0) + 1
        for s in range(t + 1, horizon + 1):
            val -= by_round.get(s, 0)
            series[s - t] = val
        return series


def sample_round_pairs(rounds: int, cap: int = 10_000,
                       seed: int = 20_240_817) -> list[tuple[int, int]]:
    """Deterministic (t, t') pairs with t <= t'.

    All pairs when they number at most `cap`; otherwise a stratified sample:
    the t-axis is cut into 100 slices and pairs are drawn per slice, plus the
    boundary pairs (1, rounds) and (t, t) probes.
    """
    total = rounds * (rounds + 1) // 2
    if total <= cap:
        return [(t, s) for t in range(1, rounds + 1)
                for s in range(t, rounds + 1)]
    rng = random.Random(seed)
    strata = 100
    per = cap // strata
    pairs = {(1, rounds), (1, 1), (rounds, rounds)}
    for k in range(strata):
        lo = 1 + (rounds * k) // strata
        hi = max(lo, (rounds * (k + 1)) // strata)
        for _ in range(per):
            t = rng.randint(lo, hi)
            s = rng.randint(t, rounds)
            pairs.add((t, s))
    return sorted(pairs)


# ---------------------------------------------------------------------------
# per-state structural checks
# ---------------------------------------------------------------------------

def structural_check(state) -> list[CheckReport]:
    """Full recomputation of the structural invariants of one state.

    L4.2(i): every vertex's maturation round is at or after the vertex.
    L4.2(ii): a maturation round that is strictly later has opposite class.
    L4.2(iii): available/reserved/waiting sets stay inside their class and
               the processed prefix, and the reserve sits inside the list.
    L4.2(iv): everything in the available list has already matured.
    L4.2(v): a non-empty reserve keeps spare degree ell or ell+1.
    L4.2(vi): the waiting batch stays below ell/2.
    L4.2(vii): forest vertices beyond the current round are of the forest's
               class.
    L4.2(viii): a reserve and the opposite waiting batch never interleave,
               and each reserve member has at most two forest-coloured edges
               into that batch.
    Also: L4.3(iv)/(v) forest-membership facts.
    """
    reports: list[CheckReport] = []
    t = state.t
    ell = state.ell
    colouring = state.colouring

    for v, ph in state.phi.items():
        if ph < v:
            _fail(reports, "L4.2(i)", t, ph, v, f"phi({v}) below vertex")
        if ph > v and colouring.class_of(ph) is colouring.class_of(v):
            _fail(reports, "L4.2(ii)", t, str(colouring.class_of(ph)), v,
                  f"phi({v}) lands on its own class")

    for colour in (RED, BLUE):
        a_list = state.A[colour]
        a_set = set(a_list)
        omega = state.omega_members(colour)
        gamma = state.gamma[colour]
        for v in a_list:
            if colouring.class_of(v) is not colour or v > t:
                _fail(reports, "L4.2(iii)", t, v, str(colour),
                      "available list member outside class or prefix")
            if state.phi.get(v, 10 ** 9) > t:
                _fail(reports, "L4.2(iv)", t, state.phi.get(v), t,
                      f"unmatured vertex {v} in available list")
        if not set(omega) <= a_set:
            _fail(reports, "L4.2(iii)", t, sorted(set(omega) - a_set), None,
                  "reserve not inside available list")
        for v in gamma:
            if colouring.class_of(v) is not colour or v > t:
                _fail(reports, "L4.2(iii)", t, v, str(colour),
                      "waiting vertex outside class or prefix")
        if omega:
            spare = state.forest[colour].spare_degree(omega)
            if spare not in (ell, ell + 1):
                _fail(reports, "L4.2(v)", t, spare, (ell, ell + 1))
        if len(gamma) >= ell // 2:
            _fail(reports, "L4.2(vi)", t, len(gamma), ell // 2)

        forest = state.forest[colour]
        opp = colour.opposite()
        for v in forest.vertices():
            if v > t:
                if colouring.class_of(v) is not colour:
                    _fail(reports, "L4.2(vii)", t, v, str(colour),
                          "forward vertex of the wrong class")
                for w in forest.neighbours(v):
                    if w > t or state.type_of.get(w) != "W":
                        _fail(reports, "L4.3(iv)", t, w, "W",
                              f"forward vertex {v} hangs on a non-W vertex")
            elif colouring.class_of(v) is opp and forest.degree(v) > 0:
                if state.type_of.get(v) not in ("W", "Y"):
                    _fail(reports, "L4.3(v)", t, state.type_of.get(v),
                          ("W", "Y"), f"opposite-class vertex {v} in forest")

    for colour in (RED, BLUE):
        entry = state.omega[colour]
        gamma_opp = state.gamma[colour.opposite()]
        if entry and gamma_opp:
            omega, created = entry
            max_omega = max(omega)
            max_phi = max(state.phi[v] for v in omega)
            min_gamma = min(gamma_opp)
            # non-strict at the right end: the reserve may form in the same
            # round whose vertex then joins the opposite waiting batch
            if not (max_omega <= max_phi <= created <= min_gamma):
                _fail(reports, "L4.2(viii)", t, (max_omega, max_phi, created),
                      min_gamma, "reserve/waiting order broken")
            # the batch is absorbed with edges of `colour`, so what must be
            # rare are the opposite-coloured pairs a reserve member cannot use
            miss = colour.opposite()
            for v in omega:
                deg = sum(1 for y in gamma_opp
                          if colouring.edge_colour(v, y) is miss)
                if deg > 2:
                    _fail(reports, "L4.2(viii)", t, deg, 2,
                          f"reserve member {v} misses too much of the batch")
    return reports


def audit_state(state) -> list[CheckReport]:
    """Cross-check every incrementally maintained quantity from scratch."""
    reports: list[CheckReport] = []
    t = state.t
    colouring = state.colouring
    from .forest import ColouredForestConstraints

    for colour in (RED, BLUE):
        forest = state.forest[colour]
        c_direct = sum(1 for v in forest.vertices() if v <= t)
        if c_direct != state.c[colour]:
            _fail(reports, "audit:c", t, state.c[colour], c_direct,
                  f"coverage count of {colour} drifted")
        rho_direct = forest.spare_degree(state.A[colour])
        if rho_direct != state.rho[colour]:
            _fail(reports, "audit:rho", t, state.rho[colour], rho_direct,
                  f"spare degree of {colour} available list drifted")
        for issue in forest.is_valid(ColouredForestConstraints(colour, colouring)):
            _fail(reports, "audit:forest", t, issue, None)
        for pos, v in enumerate(state.A[colour], start=1):
            if state.A_pos[colour].get(v) != pos:
                _fail(reports, "audit:positions", t, v, pos)
        for u, v in forest.edges():
            if (colour, min(u, v), max(u, v)) not in state.edge_round:
                _fail(reports, "audit:edge-rounds", t, (u, v), None)

    tallies = {RED: Counter(), BLUE: Counter()}
    for v, kind in state.type_of.items():
        tallies[colouring.class_of(v)][kind] += 1
    for colour in (RED, BLUE):
        got = {k: state.counts[colour][k] for k in "WXYZ"}
        want = {k: tallies[colour].get(k, 0) for k in "WXYZ"}
        if got != want:
            _fail(reports, "audit:counts", t, got, want)
    return reports


def check_state_partition(state) -> list[CheckReport]:
    """L4.3(i): the four types partition each class's processed prefix."""
    reports: list[CheckReport] = []
    t = state.t
    by_class = Counter(state.colouring.class_of(v) for v in range(1, t + 1))
    for colour in (RED, BLUE):
        total = sum(state.counts[colour].values())
        if total != by_class.get(colour, 0):
            _fail(reports, "L4.3(i)", t, total, by_class.get(colour, 0),
                  f"type tallies of {colour} do not partition the class")
    return reports


# ---------------------------------------------------------------------------
# per-round trace facts
# ---------------------------------------------------------------------------

def _row_fields(row, colour: Colour):
    d = row.to_json_dict()
    suffix = "R" if colour is RED else "B"
    counts = d["counts"][suffix]
    return {
        "c": d["c" + suffix],
        "rho": d["rho" + suffix],
        "lenA": d["lenA" + suffix],
        "W": counts["W"], "X": counts["X"], "Y": counts["Y"], "Z": counts["Z"],
        "D": d["lenA" + suffix] - counts["X"] - counts["Z"],
    }


def check_row_facts(row, ell: int) -> list[CheckReport]:
    """Single-round trace facts, in exact integer arithmetic.

    L4.3(vii): ell*c >= (ell-8)(t - |Z_opp| - |X_opp|) - ell^2/2.
    L4.4(ii): 2|D_opp| >= 2|A| - rho  (D := available minus stranded and
              saturated members).
    L4.4(iv): 2*ell*(cR + cB) + ell*(rhoR + rhoB) >= 4(ell-8)t - 2*ell^2.
    """
    reports: list[CheckReport] = []
    t = row.t
    f = {col: _row_fields(row, col) for col in (RED, BLUE)}
    for colour in (RED, BLUE):
        own, opp = f[colour], f[colour.opposite()]
        lhs = ell * own["c"]
        rhs = (ell - 8) * (t - opp["Z"] - opp["X"]) - ell * ell // 2
        if lhs < rhs:
            _fail(reports, "L4.3(vii)", t, lhs, rhs,
                  f"coverage bound for {colour}")
        lhs = 2 * opp["D"]
        rhs = 2 * own["lenA"] - own["rho"]
        if lhs < rhs:
            _fail(reports, "L4.4(ii)", t, lhs, rhs,
                  f"degree count for {colour}")
    lhs = 2 * ell * (f[RED]["c"] + f[BLUE]["c"]) + ell * (f[RED]["rho"] + f[BLUE]["rho"])
    rhs = 4 * (ell - 8) * t - 2 * ell * ell
    if lhs < rhs:
        _fail(reports, "L4.4(iv)", t, lhs, rhs)
    return reports


def check_row_shape(row, prev, n_red=None) -> list[CheckReport]:
    """Bookkeeping facts every trace must satisfy row to row.

    L4.3(i) (both classes summed): type tallies partition [t]; when the
    number of red vertices among [t] is known, each class is compared
    exactly.
    L4.3(ii): tallies and coverage never shrink.
    """
    reports: list[CheckReport] = []
    t = row.t
    f = {col: _row_fields(row, col) for col in (RED, BLUE)}
    total = sum(f[col][k] for col in (RED, BLUE) for k in "WXYZ")
    if total != t:
        _fail(reports, "L4.3(i)", t, total, t, "tallies do not sum to t")
    if n_red is not None:
        mine = sum(f[RED][k] for k in "WXYZ")
        if mine != n_red:
            _fail(reports, "L4.3(i)", t, mine, n_red)
    if prev is not None:
        g = {col: _row_fields(prev, col) for col in (RED, BLUE)}
        for colour in (RED, BLUE):
            for k in "WXYZ":
                if f[colour][k] < g[colour][k]:
                    _fail(reports, "L4.3(ii)", t, f[colour][k], g[colour][k],
                          f"{k} tally of {colour} shrank")
            if f[colour]["c"] < g[colour]["c"]:
                _fail(reports, "L4.3(ii)", t, f[colour]["c"], g[colour]["c"],
                      "coverage shrank")
            if f[colour]["lenA"] < g[colour]["lenA"]:
                _fail(reports, "L4.3(ii)", t, f[colour]["lenA"],
                      g[colour]["lenA"], "available list shrank")
    return reports


# ---------------------------------------------------------------------------
# two-round facts
# ---------------------------------------------------------------------------

def _series_of(rows, colour: Colour):
    rho, len_a, c = [], [], []
    w, x, y, z = [], [], [], []
    suffix = "R" if colour is RED else "B"
    for row in rows:
        d = row.to_json_dict()
        rho.append(d["rho" + suffix])
        len_a.append(d["lenA" + suffix])
        c.append(d["c" + suffix])
        counts = d["counts"][suffix]
        w.append(counts["W"])
        x.append(counts["X"])
        y.append(counts["Y"])
        z.append(counts["Z"])
    return {"rho": rho, "lenA": len_a, "c": c, "W": w, "X": x, "Y": y, "Z": z,
            "D": [a - b - cc for a, b, cc in zip(len_a, x, z)]}


def _gamma_sizes(rows) -> dict[Colour, list[int]]:
    """Waiting-batch size per colour after each round, rebuilt from the rows
    (a Y round grows its own colour's batch; a batch event empties it)."""
    out = {RED: [], BLUE: []}
    size = {RED: 0, BLUE: 0}
    prev_y = {RED: 0, BLUE: 0}
    for row in rows:
        for colour, key in ((RED, "R"), (BLUE, "B")):
            y_now = row.counts[key]["Y"]
            if y_now > prev_y[colour]:
                if row.event == EVENT_BATCH:
                    size[colour] = 0
                else:
                    size[colour] += 1
            prev_y[colour] = y_now
            out[colour].append(size[colour])
    return out


def _batch_rounds(rows) -> dict[Colour, list[int]]:
    """Rounds whose waiting batch fired, keyed by the batch's own colour."""
    out = {RED: [], BLUE: []}
    prev_y = {RED: 0, BLUE: 0}
    for row in rows:
        for colour, key in ((RED, "R"), (BLUE, "B")):
            y_now = row.counts[key]["Y"]
            if y_now > prev_y[colour] and row.event == EVENT_BATCH:
                out[colour].append(row.t)
            prev_y[colour] = y_now
    return out


def _last_in_window(rounds_list: list[int], t: int, tp: int) -> int:
    """Largest listed round in (t, tp], or t when there is none."""
    i = bisect.bisect_right(rounds_list, tp)
    if i and rounds_list[i - 1] > t:
        return rounds_list[i - 1]
    return t


def check_pair_facts(rows, events, ell: int,
                     pairs: Optional[list[tuple[int, int]]] = None
                     ) -> tuple[list[CheckReport], Counter]:
    """Two-round facts needing frozen spare degrees.

    For each ordered pair t <= t' and each colour (colour named for its
    available list; the opposite colour's Y/Z/W tallies appear on the other
    side):

    L4.3(viii): 2|Y_opp(t') - Y_opp(t)| + 2|Gamma_opp(t)| >=
                rho_t(A_t) - rho_t'(A_t).  The waiting-batch term covers
                vertices typed before t but only absorbed inside (t, t'].
    L4.3(ix):   rho_{t'-1}(A_t) >= ell  implies  |Z_opp(t')| <= |W(t*)|,
                where t* is the last round in (t, t'] whose batch re-picked
                this colour's reserve (t when none did).  A Z vertex's two
                typing edges predate its reserve incarnation, hence t*, and
                every W vertex supports at most two of them.
    L4.4(iii):  rho^opp_{t'-1}(A^opp_t) >= ell  implies
                2|D_opp(t*)| + 2|pend_opp(t*)| >=
                2|D(t)| + |X(t')| + |Z(t')| - rho_{t*}(A_t*),
                with t* now the last round in (t, t'] whose batch re-picked
                the *opposite* reserve: the bipartite edge count runs in the
                forest of round t*, where late Z vertices already carry full
                degree, and pend_opp(t*) = W_opp - (D_opp - Y_opp) counts the
                opposite forward vertices not yet matured at t*, whose edges
                reach those late Z vertices.

    Both conditional facts reduce to their plain t* = t forms whenever no
    batch intervenes.  Returns (reports, hypothesis fire counter).
    """
    rounds = len(rows)
    if pairs is None:
        pairs = sample_round_pairs(rounds)
    fire: Counter = Counter()
    reports: list[CheckReport] = []
    series = {col: _series_of(rows, col) for col in (RED, BLUE)}
    gammas = _gamma_sizes(rows)
    batches = _batch_rounds(rows)
    frozen = {col: FrozenRho(events[col], series[col]["rho"],
                             series[col]["lenA"]) for col in (RED, BLUE)}
    for colour in (RED, BLUE):
        own = series[colour]
        opp = series[colour.opposite()]
        rho_at_tp = frozen[colour].at_pairs([(t, s) for t, s in pairs])
        rho_before_tp = frozen[colour].at_pairs([(t, s - 1) for t, s in pairs])
        opp_rho_before_tp = frozen[colour.opposite()].at_pairs(
            [(t, s - 1) for t, s in pairs])
        suffix = "R" if colour is RED else "B"
        gamma_opp = gammas[colour.opposite()]
        for i, (t, tp) in enumerate(pairs):
            lhs = (2 * (opp["Y"][tp - 1] - opp["Y"][t - 1])
                   + 2 * gamma_opp[t - 1])
            rhs = own["rho"][t - 1] - rho_at_tp[i]
            if lhs < rhs:
                _fail(reports, "L4.3(viii)", tp, lhs, rhs,
                      f"t={t}, list colour {suffix}")
            if rho_before_tp[i] >= ell:
                fire["L4.3(ix)"] += 1
                # this colour's reserve is re-picked by opposite-colour batches
                t_star = _last_in_window(batches[colour.opposite()], t, tp)
                if opp["Z"][tp - 1] > own["W"][t_star - 1]:
                    _fail(reports, "L4.3(ix)", tp, opp["Z"][tp - 1],
                          own["W"][t_star - 1],
                          f"t={t}, t*={t_star}, list colour {suffix}")
            if opp_rho_before_tp[i] >= ell:
                fire["L4.4(iii)"] += 1
                # the opposite reserve is re-picked by this colour's batches
                t_star = _last_in_window(batches[colour], t, tp)
                pend = (opp["W"][t_star - 1] - opp["D"][t_star - 1]
                        + opp["Y"][t_star - 1])
                lhs = 2 * opp["D"][t_star - 1] + 2 * pend
                rhs = (2 * own["D"][t - 1]
                       + own["X"][tp - 1] + own["Z"][tp - 1]
                       - own["rho"][t_star - 1])
                if lhs < rhs:
                    _fail(reports, "L4.4(iii)", tp, lhs, rhs,
                          f"t={t}, t*={t_star}, list colour {suffix}")
    return reports, fire


def check_rho_accounting(rows, ell: int, events=None,
                         pairs: Optional[list[tuple[int, int]]] = None
                         ) -> tuple[list[CheckReport], Counter]:
    """Spare-degree growth accounting.

    L4.4(i): rho_{t'}(A_{t'}) - rho_t(A_t) <= 2|D(t')-D(t)| + 2|X(t')-X(t)|
             per colour, over sampled pairs (live quantities only).
    L4.4(ii) at every round (via check_row_facts' integer form).
    L4.4(iii) when events are available (see check_pair_facts).
    """
    rounds = len(rows)
    if pairs is None:
        pairs = sample_round_pairs(rounds)
    reports: list[CheckReport] = []
    fire: Counter = Counter()
    series = {col: _series_of(rows, col) for col in (RED, BLUE)}
    for colour in (RED, BLUE):
        own = series[colour]
        suffix = "R" if colour is RED else "B"
        for t, tp in pairs:
            lhs = own["rho"][tp - 1] - own["rho"][t - 1]
            rhs = (2 * (own["D"][tp - 1] - own["D"][t - 1])
                   + 2 * (own["X"][tp - 1] - own["X"][t - 1]))
            if lhs > rhs:
                _fail(reports, "L4.4(i)", tp, lhs, rhs,
                      f"t={t}, colour {suffix}")
    for row in rows:
        reports.extend(rep for rep in check_row_facts(row, ell)
                       if rep.property_id == "L4.4(ii)")
    if events is not None:
        pair_reports, pair_fire = check_pair_facts(rows, events, ell, pairs)
        reports.extend(r for r in pair_reports
                       if r.property_id == "L4.4(iii)")
        fire["L4.4(iii)"] = pair_fire["L4.4(iii)"]
    return reports, fire


def check_round(state, rows) -> list[CheckReport]:
    """All facts checkable at the current round of a live run: structural
    set, partition, row facts, and the two-round facts against a sample of
    earlier reference rounds."""
    reports = structural_check(state)
    reports += check_state_partition(state)
    row = rows[-1]
    n_red = sum(1 for v in range(1, state.t + 1)
                if state.colouring.class_of(v) is RED)
    reports += check_row_shape(row, rows[-2] if len(rows) > 1 else None,
                               n_red)
    reports += check_row_facts(row, state.ell)
    t = state.t
    refs = sorted({1, max(1, t // 2), max(1, t - 1)}
                  | set(range(1, t + 1, max(1, t // 16))))
    pairs = [(r, t) for r in refs if r <= t]
    pair_reports, _ = check_pair_facts(rows, state.spare_events, state.ell,
                                       pairs)
    reports += pair_reports
    acc_reports, _ = check_rho_accounting(rows, state.ell,
                                          events=state.spare_events,
                                          pairs=pairs)
    reports += acc_reports
    return reports


# ---------------------------------------------------------------------------
# live run checker
# ---------------------------------------------------------------------------

class RunChecker:
    """Verifies a live run round by round and offline at the end.

    Cheap incremental forms of the structural invariants run every round;
    the full recomputations run on a cadence (every round for short runs)
    and always at the end; the two-round facts run offline over sampled
    pairs once the run finishes.  The first failure raises
    InvariantViolation.  Hypothesis counts of the conditional facts are
    collected in .fire_counts so vacuous suites are visible.
    """

    def __init__(self, ell: int, rounds: int):
        self.ell = ell
        self.rounds = rounds
        self.cadence = 1 if rounds <= 300 else max(1, rounds // 50)
        self.fire_counts: Counter = Counter()
        self._prev_row = None
        self._prev_len_a = {RED: 0, BLUE: 0}
        self._prev_omega = {RED: None, BLUE: None}
        self._prev_gamma_len = {RED: 0, BLUE: 0}
        self._n_red = 0

    def after_round(self, state, row) -> None:
        reports: list[CheckReport] = []
        t = state.t
        ell = self.ell
        colouring = state.colouring
        if colouring.class_of(t) is RED:
            self._n_red += 1
        sets_moved = (row.event == EVENT_BATCH or any(
            state.omega[c] is not self._prev_omega[c]
            or len(state.gamma[c]) != self._prev_gamma_len[c]
            for c in (RED, BLUE)))

        if t in state.phi:
            ph = state.phi[t]
            if ph < t:
                _fail(reports, "L4.2(i)", t, ph, t)
            if ph > t and colouring.class_of(ph) is colouring.class_of(t):
                _fail(reports, "L4.2(ii)", t, str(colouring.class_of(ph)), t)
        else:
            _fail(reports, "L4.2(i)", t, None, t, "round vertex has no phi")

        for colour in (RED, BLUE):
            a_list = state.A[colour]
            for v in a_list[self._prev_len_a[colour]:]:
                if colouring.class_of(v) is not colour or v > t:
                    _fail(reports, "L4.2(iii)", t, v, str(colour))
                if state.phi.get(v, 10 ** 9) > t:
                    _fail(reports, "L4.2(iv)", t, state.phi.get(v), t)
            if len(a_list) < self._prev_len_a[colour]:
                _fail(reports, "L4.2(iii)", t, len(a_list),
                      self._prev_len_a[colour], "available list shrank")
            self._prev_len_a[colour] = len(a_list)

            omega_entry = state.omega[colour]
            if omega_entry:
                members, _created = omega_entry
                spare = state.forest[colour].spare_degree(members)
                if spare not in (ell, ell + 1):
                    _fail(reports, "L4.2(v)", t, spare, (ell, ell + 1))
                self.fire_counts["L4.2(v)"] += 1
                if omega_entry is not self._prev_omega[colour]:
                    pos = state.A_pos[colour]
                    if not all(v in pos for v in members):
                        _fail(reports, "L4.2(iii)", t, members, None,
                              "reserve outside available list")
            self._prev_omega[colour] = omega_entry

            gamma = state.gamma[colour]
            if len(gamma) >= ell // 2:
                _fail(reports, "L4.2(vi)", t, len(gamma), ell // 2)
            for v in gamma[self._prev_gamma_len[colour]:]:
                if state.type_of.get(v) != "Y" or colouring.class_of(v) is not colour:
                    _fail(reports, "L4.2(iii)", t, v, "Y",
                          "waiting batch holds a non-Y vertex")
            self._prev_gamma_len[colour] = len(gamma)

            if state.rho[colour] >= ell:
                self.fire_counts["L4.3(vi)"] += 1
                if state.omega[colour] is None:
                    _fail(reports, "L4.3(vi)", t, state.rho[colour], ell,
                          f"spare degree high but no reserve for {colour}")

        own = colouring.class_of(t)
        opp = own.opposite()
        if row.type == "W":
            for w in state.forest[opp].neighbours(t):
                if w <= t or colouring.class_of(w) is not opp:
                    _fail(reports, "L4.2(vii)", t, w, str(opp),
                          "forward attachment to the past or wrong class")
        if sets_moved:
            reports += self._cross_order_checks(state)

        reports += check_row_shape(row, self._prev_row, self._n_red)
        reports += check_row_facts(row, ell)
        self._prev_row = row

        if t % self.cadence == 0 or t == self.rounds:
            reports += structural_check(state)
            reports += check_state_partition(state)
        if t == self.rounds or (t % max(1, self.rounds // 2) == 0):
            reports += audit_state(state)
        _raise_first(reports)

    def _cross_order_checks(self, state) -> list[CheckReport]:
        reports: list[CheckReport] = []
        t = state.t
        colouring = state.colouring
        for colour in (RED, BLUE):
            entry = state.omega[colour]
            gamma_opp = state.gamma[colour.opposite()]
            if not entry or not gamma_opp:
                continue
            omega, created = entry
            self.fire_counts["L4.2(viii)"] += 1
            max_omega = max(omega)
            max_phi = max(state.phi[v] for v in omega)
            min_gamma = min(gamma_opp)
            if not (max_omega <= max_phi <= created <= min_gamma):
                _fail(reports, "L4.2(viii)", t,
                      (max_omega, max_phi, created), min_gamma)
            miss = colour.opposite()
            for v in omega:
                deg = sum(1 for y in gamma_opp
                          if colouring.edge_colour(v, y) is miss)
                if deg > 2:
                    _fail(reports, "L4.2(viii)", t, deg, 2,
                          f"reserve member {v}")
        return reports

    def after_run(self, state, rows) -> None:
        reports = structural_check(state)
        reports += check_state_partition(state)
        reports += audit_state(state)
        _raise_first(reports)
        pairs = sample_round_pairs(len(rows))
        pair_reports, fire = check_pair_facts(rows, state.spare_events,
                                              self.ell, pairs)
        self.fire_counts.update(fire)
        _raise_first(pair_reports)
        acc_reports, acc_fire = check_rho_accounting(
            rows, self.ell, events=None, pairs=pairs)
        self.fire_counts.update(acc_fire)
        _raise_first(acc_reports)


# ---------------------------------------------------------------------------
# existence monitors
# ---------------------------------------------------------------------------

@dataclass
class MonitorReport:
    """Resolution tally for the two escape lemmas.

    Instances are rounds whose live spare degree reaches ell.  Each either
    resolves (the predicted later round exists inside the horizon) or stays
    inconclusive; a finite run can never refute the prediction, so there is
    no failure state.
    """
    checked: dict = field(default_factory=dict)
    resolved: dict = field(default_factory=dict)
    inconclusive: dict = field(default_factory=dict)

    def record(self, name: str, outcome: Optional[str]) -> None:
        self.checked[name] = self.checked.get(name, 0) + 1
        if outcome is None:
            self.inconclusive[name] = self.inconclusive.get(name, 0) + 1
        else:
            key = f"{name}:{outcome}"
            self.resolved[key] = self.resolved.get(key, 0) + 1


def monitor_escape_lemmas(rows, events, ell: int, eps: float = 0.25,
                          max_instances: int = 200) -> MonitorReport:
    """Watch the two "there exists a later round" statements.

    Saturation monitor: once a list's live spare degree is >= ell at t,
    some t' > t should see the frozen spare of that very list drop below
    ell, or coverage c_{t'} >= (1 - 9/ell) t'.

    Density monitor: once live spare is >= ell at t0, some t' > t0 should
    see live spare < ell or max coverage ratio >= 2*sqrt(2) - 2 - eps.
    """
    report = MonitorReport()
    rounds = len(rows)
    series = {col: _series_of(rows, col) for col in (RED, BLUE)}
    threshold = 2 * math.sqrt(2) - 2 - eps
    for colour in (RED, BLUE):
        own = series[colour]
        frozen = FrozenRho(events[colour], own["rho"], own["lenA"])
        instances = [t for t in range(1, rounds + 1)
                     if own["rho"][t - 1] >= ell]
        if len(instances) > max_instances:
            stride = len(instances) / max_instances
            instances = [instances[int(i * stride)]
                         for i in range(max_instances)]
        name_sat = f"saturation[{'R' if colour is RED else 'B'}]"
        name_den = f"density[{'R' if colour is RED else 'B'}]"
        for t in instances:
            outcome = None
            frozen_series = frozen.series_from(t, rounds)
            for tp in range(t + 1, rounds + 1):
                if frozen_series[tp - t] < ell:
                    outcome = "spare_exhausted"
                    break
                if ell * own["c"][tp - 1] >= (ell - 9) * tp:
                    outcome = "coverage"
                    break
            report.record(name_sat, outcome)
            outcome = None
            for tp in range(t + 1, rounds + 1):
                if own["rho"][tp - 1] < ell:
                    outcome = "spare_exhausted"
                    break
                best = max(series[RED]["c"][tp - 1], series[BLUE]["c"][tp - 1])
                if best >= threshold * tp:
                    outcome = "density"
                    break
            report.record(name_den, outcome)
    return report


# ---------------------------------------------------------------------------
# numeric certificate
# ---------------------------------------------------------------------------

#: least real root of 8x^2 - 7x + 1; the limiting uncovered fraction
ALPHA = (7 - math.sqrt(17)) / 16
#: 1 - ALPHA = (9 + sqrt(17))/16, the density the construction achieves
DENSITY_THRESHOLD = (9 + math.sqrt(17)) / 16


@dataclass
class CertificateReport:
    """Numeric verification of the closing linear-programming argument.

    The argument: were the density claim false, the four key inequalities
    in the unused-vertex counts x = (a, b, c, d) would give A x <= 0 for
    the matrix below, yet the explicit certificate vector y >= 0 has every
    component of y^T A at least delta > 0 — impossible for x >= 0, x != 0.
    """
    epsilon: float
    alpha: float
    threshold: float
    delta: float
    rho: float
    matrix: list
    y: list
    yTA: list
    closed_forms: list
    residuals: dict


def _certify(residuals: dict, name: str, value: float, tol: float) -> None:
    residuals[name] = value
    if not (abs(value) <= tol):
        raise InvariantViolation(f"certificate:{name}", 0, value, tol)


def verify_certificate(eps: float) -> CertificateReport:
    """Check every numeric fact the closing argument relies on.

    With alpha = (7 - sqrt(17))/16, delta = eps/2, rho = alpha + delta:
    alpha is a root of 8x^2 - 7x + 1 (1e-12); the density threshold is
    1 - alpha and approximates 0.82019 (1e-5); 7*rho - 8*rho^2 >= 1;
    y = (7-12a, 2-4a, 1, 3-4a) is non-negative and y^T A matches
    ((81-120a)d, (54-80a)d, 4d, (31-40a)d) to 1e-10 with every component
    at least delta; and 3 - 2*sqrt(2) is a root of x^2 - 6x + 1 (the
    escape-monitor constant).
    """
    if not 0 < eps < 0.5:
        raise ParameterError(f"eps must lie in (0, 1/2), got {eps}")
    alpha = ALPHA
    delta = eps / 2
    rho = alpha + delta
    residuals: dict = {}
    _certify(residuals, "least_root", 8 * alpha * alpha - 7 * alpha + 1, 1e-12)
    _certify(residuals, "threshold_sum", alpha + DENSITY_THRESHOLD - 1, 1e-12)
    _certify(residuals, "threshold_value", DENSITY_THRESHOLD - 0.82019, 1e-5)

    matrix = [
        [8 * rho - 4, 2.0, 0.0, 1.0],
        [3.0, 8 * rho - 5, 0.0, 1.0],
        [7 * rho - 2, 1 + 2 * rho, 4 * rho - 3, 1 + rho],
        [3 + 6 * rho, 12 * rho - 5, 1.0, 10 * rho - 5],
    ]
    y = [7 - 12 * alpha, 2 - 4 * alpha, 1.0, 3 - 4 * alpha]
    if min(y) <= 0:
        raise InvariantViolation("certificate:y_positive", 0, min(y), 0.0)
    yTA = [sum(y[i] * matrix[i][j] for i in range(4)) for j in range(4)]
    closed_forms = [(81 - 120 * alpha) * delta, (54 - 80 * alpha) * delta,
                    4 * delta, (31 - 40 * alpha) * delta]
    _certify(residuals, "column_forms",
             max(abs(p - q) for p, q in zip(yTA, closed_forms)), 1e-10)
    worst = min(yTA)
    residuals["column_floor"] = worst - delta
    if worst < delta - 1e-12:
        raise InvariantViolation("certificate:column_floor", 0, worst, delta)
    margin = 7 * rho - 8 * rho * rho
    residuals["quadratic_margin"] = margin - 1
    if margin < 1 - 1e-12:
        raise InvariantViolation("certificate:quadratic_margin", 0, margin, 1.0)
    escape_root = 3 - 2 * math.sqrt(2)
    _certify(residuals, "escape_root",
             1 - 6 * escape_root + escape_root * escape_root, 1e-12)
    return CertificateReport(epsilon=eps, alpha=alpha,
                             threshold=DENSITY_THRESHOLD, delta=delta,
                             rho=rho, matrix=matrix, y=y, yTA=yTA,
                             closed_forms=closed_forms, residuals=residuals)


# ---------------------------------------------------------------------------
# difference-inequality checker
# ---------------------------------------------------------------------------

@dataclass
class RecurrenceReport:
    hypothesis_holds: bool
    conclusion_holds: bool
    first_violation: Optional[int] = None


def recurrence_check(s: Sequence[int], tau1: float, tau2: float,
                     c0: float, n0: int = 1) -> RecurrenceReport:
    """Evaluate s_{n+1} <= tau1*s_n - tau2*s_{n-1} + c0 for n >= n0 against
    the conclusion tau1^2 >= 4*tau2.

    The hypothesis of the underlying statement quantifies over an infinite
    tail, so on a finite window it can hold spuriously; callers who rely on
    "hypothesis implies conclusion" must supply windows long enough for the
    contradiction to materialize (see the fuzz suite).
    """
    if tau1 <= 0 or tau2 <= 0:
        raise ParameterError("tau1 and tau2 must be positive")
    if c0 < 0:
        raise ParameterError("c0 must be non-negative")
    s = list(s)
    if len(s) < 3:
        raise ParameterError("need at least three terms")
    if s[0] < 0 or any(b <= a for a, b in zip(s, s[1:])):
        raise ParameterError("sequence must be strictly increasing and non-negative")
    first = None
    for n in range(max(n0, 1), len(s) - 1):
        if s[n + 1] > tau1 * s[n] - tau2 * s[n - 1] + c0:
            first = n
            break
    return RecurrenceReport(hypothesis_holds=first is None,
                            conclusion_holds=tau1 * tau1 >= 4 * tau2,
                            first_violation=first)


def hypothesis_window_bound(tau1: float, tau2: float, c0: float) -> int:
    """A window length beyond which no strictly increasing integer sequence
    can satisfy the recurrence hypothesis when tau1^2 < 4*tau2.

    Ratios b_n = s_{n+1}/s_n stay below tau1 + c0 and, once the terms
    outgrow the additive slack, must drop by at least
    (tau2 - tau1^2/4) / (2*(tau1 + c0)) per step while staying above 1 —
    which caps the number of steps.
    """
    margin = tau2 - tau1 * tau1 / 4
    if margin <= 0:
        raise ParameterError("bound only exists when tau1^2 < 4*tau2")
    top = tau1 + c0
    growth_phase = 2 * c0 * top / margin
    decay_phase = 2 * top * top / margin
    return int(growth_phase + decay_phase) + 8
