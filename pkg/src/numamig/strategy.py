"""Migration strategies: interchange with a ticket lottery, plus the adaptive variant.

The base strategy picks the thread with the worst normalized score, awards
lottery tickets to candidate destination cores on other nodes (using the
per-node score history to reward nodes where the victim, and the resident
thread it would displace, did well), draws one entry, and swaps the two
threads. The adaptive variant wraps that in a feedback controller: if total
performance holds up the period is halved and another migration is tried,
otherwise the period is doubled and the last migration is undone.
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass

import numpy as np

from .metrics import PerfRecord
from .placement import Placement, ThreadId
from .topology import Topology


class NoFeasibleMigration(Exception):
    """No destination core can be offered; the interval is skipped."""


@dataclass(frozen=True)
class TicketParams:
    """Lottery ticket counts.

    b1..b3 score the destination node against the victim's history there
    (worse / unknown / at-least-as-good); b4..b6 do the same for the thread
    that would be displaced, looking at its history on the victim's node;
    b7 is the bonus for a core with spare capacity (no displacement needed).
    """

    b1: int = 1
    b2: int = 2
    b3: int = 4
    b4: int = 1
    b5: int = 2
    b6: int = 4
    b7: int = 3

    def __post_init__(self):
        vals = (self.b1, self.b2, self.b3, self.b4, self.b5, self.b6, self.b7)
        if any(not isinstance(v, int) or v < 0 for v in vals):
            raise ValueError("ticket counts must be non-negative integers")
        if not any(vals):
            raise ValueError("at least one ticket count must be positive")


@dataclass(frozen=True)
class TicketEntry:
    core: int
    swap: ThreadId | None
    tickets: int


@dataclass(frozen=True)
class TicketTable:
    entries: tuple[TicketEntry, ...]
    total: int


@dataclass(frozen=True)
class MigrationDecision:
    """One planned interchange, with both pre-migration cores pinned down."""

    victim: ThreadId
    victim_core: int
    dest_core: int
    swap: ThreadId | None

    def __post_init__(self):
        if self.dest_core == self.victim_core:
            raise ValueError("destination must differ from the victim's core")

    def inverse(self) -> MigrationDecision:
        """The decision that undoes this one (same swap pair, cores reversed)."""
        return MigrationDecision(
            victim=self.victim,
            victim_core=self.dest_core,
            dest_core=self.victim_core,
            swap=self.swap,
        )


def select_victim(
    phat: dict[ThreadId, float], rng: np.random.Generator
) -> ThreadId:
    """Thread with the lowest normalized score; exact ties drawn uniformly.

    The rng is only consulted when there is an actual tie, so callers can
    rely on the draw sequence otherwise.
    """
    if not phat:
        raise ValueError("no candidate threads")
    lowest = min(phat.values())
    tied = sorted(t for t, v in phat.items() if v == lowest)
    if len(tied) == 1:
        return tied[0]
    return tied[int(rng.integers(len(tied)))]


def distribute_tickets(
    record: PerfRecord,
    victim: ThreadId,
    placement: Placement,
    topology: Topology,
    params: TicketParams,
) -> TicketTable:
    """Build the lottery table over cores outside the victim's current node.

    Each resident thread of a candidate core gets its own entry (node-side
    plus thread-side tickets); a core with spare capacity gets one extra
    entry with the b7 bonus and no swap thread. Zero-ticket entries are
    dropped.
    """
    if topology.num_nodes < 2:
        raise NoFeasibleMigration("single-node topology, nowhere to go")
    n_cur = topology.node_of(placement.core_of(victim))
    p_cur = record.current(victim)
    entries: list[TicketEntry] = []
    for node in range(topology.num_nodes):
        if node == n_cur:
            continue
        p_there = record.get(victim, node)
        if p_there is None:
            node_side = params.b2
        elif p_there < p_cur:
            node_side = params.b1
        else:
            node_side = params.b3
        for core in topology.cores_of(node):
            for g in placement.threads_on(core):
                p_g_dest = record.get(g, n_cur)
                p_g_own = record.current(g)
                if p_g_dest is None:
                    thread_side = params.b5
                elif p_g_dest < p_g_own:
                    thread_side = params.b4
                else:
                    thread_side = params.b6
                if node_side + thread_side > 0:
                    entries.append(TicketEntry(core, g, node_side + thread_side))
            if placement.has_space(core) and node_side + params.b7 > 0:
                entries.append(TicketEntry(core, None, node_side + params.b7))
    return TicketTable(tuple(entries), sum(e.tickets for e in entries))


def lottery(
    table: TicketTable, rng: np.random.Generator
) -> tuple[int, ThreadId | None]:
    """Draw one entry with probability tickets/total; returns (core, swap)."""
    if table.total <= 0:
        raise NoFeasibleMigration("empty ticket table")
    draw = int(rng.integers(table.total))
    acc = 0
    for entry in table.entries:
        acc += entry.tickets
        if draw < acc:
            return entry.core, entry.swap
    raise AssertionError("draw exceeded ticket total")  # unreachable


def decision_applies(placement: Placement, decision: MigrationDecision) -> bool:
    """Whether the decision still matches the placement it was made against."""
    if decision.victim not in placement:
        return False
    if placement.core_of(decision.victim) != decision.victim_core:
        return False
    if decision.swap is None:
        return placement.has_space(decision.dest_core)
    return (
        decision.swap in placement
        and placement.core_of(decision.swap) == decision.dest_core
    )


def apply_interchange(
    placement: Placement, decision: MigrationDecision
) -> Placement:
    """Swap the two threads of a decision; returns a new placement.

    Raises on stale decisions (a referenced thread has moved or finished).
    """
    if not decision_applies(placement, decision):
        raise ValueError(f"stale decision {decision}")
    new = placement.copy()
    new.move(decision.victim, decision.dest_core)
    if decision.swap is not None:
        new.move(decision.swap, decision.victim_core)
    return new


def imar_step(
    record: PerfRecord,
    phat: dict[ThreadId, float],
    placement: Placement,
    topology: Topology,
    params: TicketParams,
    rng: np.random.Generator,
) -> MigrationDecision | None:
    """One migration attempt: pick victim, run the lottery, plan the swap.

    ``phat`` holds normalized scores for the threads eligible as victims
    (the engine passes live threads of processes with at least two live
    threads). Returns None when no victim or destination is available.
    """
    if not phat:
        return None
    victim = select_victim(phat, rng)
    try:
        table = distribute_tickets(record, victim, placement, topology, params)
        dest_core, swap = lottery(table, rng)
    except NoFeasibleMigration:
        return None
    return MigrationDecision(
        victim=victim,
        victim_core=placement.core_of(victim),
        dest_core=dest_core,
        swap=swap,
    )


@dataclass(frozen=True)
class ControllerState:
    """Adaptive-period controller state carried between intervals."""

    t: float
    t_min: float
    t_max: float
    omega: float
    pt_last: float | None = None
    last_decision: MigrationDecision | None = None

    def __post_init__(self):
        if not 0 < self.t_min <= self.t_max:
            raise ValueError("need 0 < t_min <= t_max")
        if not self.t_min <= self.t <= self.t_max:
            raise ValueError(f"period {self.t} outside [{self.t_min}, {self.t_max}]")
        if not 0 < self.omega <= 1:
            raise ValueError("omega must be in (0, 1]")


@dataclass(frozen=True)
class StrategyAction:
    kind: str  # none | migrate | rollback
    decision: MigrationDecision | None = None  # ready to apply as-is


def imar2_step(
    ctrl: ControllerState,
    pt_current: float,
    record: PerfRecord,
    phat: dict[ThreadId, float],
    placement: Placement,
    topology: Topology,
    params: TicketParams,
    rng: np.random.Generator,
) -> tuple[StrategyAction, ControllerState]:
    """Adaptive step: judge the last interval by total performance.

    Held up (pt_current >= omega * previous total): halve the period, clamped
    below, and attempt a fresh migration. Dropped: double the period, clamped
    above, and undo the last migration instead; nothing new is migrated that
    interval. The first call has no reference total and counts as held up.
    A rollback whose threads have since moved or finished is skipped, but the
    period still doubles.
    """
    pt_ref = ctrl.pt_last if ctrl.pt_last is not None else pt_current
    if pt_current >= ctrl.omega * pt_ref:
        t_new = max(ctrl.t_min, ctrl.t / 2.0)
        decision = imar_step(record, phat, placement, topology, params, rng)
        if decision is None:
            action = StrategyAction("none")
        else:
            action = StrategyAction("migrate", decision)
        next_last = decision
    else:
        t_new = min(ctrl.t_max, ctrl.t * 2.0)
        if ctrl.last_decision is not None:
            undo = ctrl.last_decision.inverse()
            if decision_applies(placement, undo):
                action = StrategyAction("rollback", undo)
            else:
                action = StrategyAction("none")
        else:
            action = StrategyAction("none")
        next_last = None
    ctrl_new = dataclasses.replace(
        ctrl, t=t_new, pt_last=pt_current, last_decision=next_last
    )
    return action, ctrl_new


@dataclass(frozen=True)
class StrategySpec:
    """Which strategy to run, with its numeric knobs."""

    kind: str  # none | imar | imar2
    t: float = 1.0
    t_min: float = 1.0
    t_max: float = 4.0
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0
    omega: float = 0.97

    def __post_init__(self):
        if self.kind not in ("none", "imar", "imar2"):
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.t <= 0:
            raise ValueError("period must be > 0")
        if not 0 < self.t_min <= self.t_max:
            raise ValueError("need 0 < t_min <= t_max")
        if not 0 < self.omega <= 1:
            raise ValueError("omega must be in (0, 1]")
        for name in ("alpha", "beta", "gamma"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    def score_params(self):
        from .metrics import ScoreParams

        return ScoreParams(self.alpha, self.beta, self.gamma)


def _fmt_num(x: float) -> str:
    # repr round-trips exactly; drop a trailing ".0" for compactness
    r = repr(float(x))
    return r[:-2] if r.endswith(".0") else r


def parse_strategy(text: str) -> StrategySpec:
    """Parse the compact strategy notation.

    Accepted forms: "none", "imar[T;alpha,beta,gamma]" and
    "imar2[Tmin,Tmax;alpha,beta,gamma;omega]". The superscript-2 spelling
    of the adaptive variant is accepted too. Case-insensitive.
    """
    s = text.strip().replace("\N{SUPERSCRIPT TWO}", "2").lower()
    if s == "none":
        return StrategySpec("none")
    m = re.fullmatch(r"(imar2|imar)\[([^\[\]]*)\]", s)
    if m is None:
        raise ValueError(f"unrecognized strategy {text!r}")
    kind, body = m.group(1), m.group(2)
    parts = body.split(";")
    try:
        if kind == "imar":
            if len(parts) != 2:
                raise ValueError("expected imar[T;alpha,beta,gamma]")
            t = float(parts[0])
            a, b, g = (float(x) for x in parts[1].split(","))
            return StrategySpec("imar", t=t, alpha=a, beta=b, gamma=g)
        if len(parts) != 3:
            raise ValueError("expected imar2[Tmin,Tmax;alpha,beta,gamma;omega]")
        t_min, t_max = (float(x) for x in parts[0].split(","))
        a, b, g = (float(x) for x in parts[1].split(","))
        omega = float(parts[2])
        return StrategySpec(
            "imar2",
            t=t_min,
            t_min=t_min,
            t_max=t_max,
            alpha=a,
            beta=b,
            gamma=g,
            omega=omega,
        )
    except ValueError as exc:
        raise ValueError(f"bad strategy {text!r}: {exc}") from None


def render_strategy(spec: StrategySpec) -> str:
    """Inverse of parse_strategy; parse(render(s)) == s for valid specs."""
    if spec.kind == "none":
        return "none"
    abg = f"{_fmt_num(spec.alpha)},{_fmt_num(spec.beta)},{_fmt_num(spec.gamma)}"
    if spec.kind == "imar":
        return f"imar[{_fmt_num(spec.t)};{abg}]"
    return (
        f"imar2[{_fmt_num(spec.t_min)},{_fmt_num(spec.t_max)};"
        f"{abg};{_fmt_num(spec.omega)}]"
    )
