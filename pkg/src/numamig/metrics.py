"""Aggregate performance score, the per-node record table, and trace rows."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

from .placement import ThreadId


@dataclass(frozen=True)
class ScoreParams:
    """Exponents of the aggregate score P = gips^beta * instb^gamma / latency^alpha."""

    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v}")


def compute_p(sample, params: ScoreParams) -> float:
    """Collapse one sample into the scalar score used for all migration decisions."""
    if sample.gips <= 0 or sample.instb <= 0 or sample.latency <= 0:
        raise ValueError("sample components must be strictly positive")
    return (
        sample.gips**params.beta
        * sample.instb**params.gamma
        / sample.latency**params.alpha
    )


class PerfRecord:
    """Latest score per (thread, node), plus the node each thread last ran on.

    New observations replace old ones; entries for nodes a thread has left are
    kept as history for the ticket rules. Keys are never removed.
    """

    def __init__(self):
        self._table: dict[tuple[ThreadId, int], float] = {}
        self._last_node: dict[ThreadId, int] = {}

    def update(self, thread: ThreadId, node: int, p: float) -> None:
        if p <= 0:
            raise ValueError(f"P must be > 0, got {p}")
        self._table[(thread, node)] = p
        self._last_node[thread] = node

    def get(self, thread: ThreadId, node: int) -> float | None:
        """Stored score for thread on node, or None if never observed there."""
        return self._table.get((thread, node))

    def last_node(self, thread: ThreadId) -> int:
        return self._last_node[thread]

    def current(self, thread: ThreadId) -> float:
        """Score at the thread's last-executed node."""
        return self._table[(thread, self._last_node[thread])]

    def threads_of(self, pid: int) -> list[ThreadId]:
        """Sampled threads of a process, in thread-index order."""
        return sorted(t for t in self._last_node if t.pid == pid)

    def __contains__(self, thread: ThreadId) -> bool:
        return thread in self._last_node

    def __len__(self) -> int:
        return len(self._table)


def normalized_p(
    record: PerfRecord, pid: int, threads: list[ThreadId] | None = None
) -> dict[ThreadId, float]:
    """Current scores of one process divided by their mean.

    ``threads`` restricts the normalization to a subset (the engine passes the
    still-live threads); default is every sampled thread of the process. The
    mean of the returned values is 1 by construction.
    """
    if threads is None:
        threads = record.threads_of(pid)
    else:
        threads = [t for t in threads if t.pid == pid]
    if not threads:
        raise ValueError(f"process {pid} has no sampled threads")
    current = {t: record.current(t) for t in threads}
    mean = sum(current.values()) / len(current)
    return {t: p / mean for t, p in current.items()}


def total_performance(
    record: PerfRecord, threads: list[ThreadId] | None = None
) -> float:
    """Sum of current scores, over ``threads`` or every sampled thread."""
    if threads is None:
        threads = sorted(record._last_node)
    return sum(record.current(t) for t in threads)


@dataclass(slots=True)
class TraceRow:
    interval: int
    time_ms: float
    pid: int
    tid: int
    core: int
    node: int
    gips: float
    instb: float
    latency: float
    p: float
    p_hat: float
    event: str = ""  # "" | migrate | swap | rollback


TRACE_COLUMNS = (
    "interval",
    "time_ms",
    "pid",
    "tid",
    "core",
    "node",
    "gips",
    "instb",
    "latency",
    "p",
    "p_hat",
    "event",
)

_FLOAT_COLUMNS = ("time_ms", "gips", "instb", "latency", "p", "p_hat")


def write_trace(path, rows: list[TraceRow], comment: str | None = None) -> None:
    """Write rows as CSV with the fixed column order; repr floats round-trip."""
    with open(path, "w", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        writer = csv.writer(fh)
        writer.writerow(TRACE_COLUMNS)
        for r in rows:
            # float() strips numpy scalar wrappers so repr stays the plain
            # shortest round-trip form
            writer.writerow(
                [
                    r.interval,
                    repr(float(r.time_ms)),
                    r.pid,
                    r.tid,
                    r.core,
                    r.node,
                    repr(float(r.gips)),
                    repr(float(r.instb)),
                    repr(float(r.latency)),
                    repr(float(r.p)),
                    repr(float(r.p_hat)),
                    r.event,
                ]
            )


def read_trace(path) -> list[TraceRow]:
    rows = []
    with open(path) as fh:
        lines = (ln for ln in fh if not ln.startswith("#"))
        reader = csv.DictReader(lines)
        for rec in reader:
            rows.append(
                TraceRow(
                    interval=int(rec["interval"]),
                    time_ms=float(rec["time_ms"]),
                    pid=int(rec["pid"]),
                    tid=int(rec["tid"]),
                    core=int(rec["core"]),
                    node=int(rec["node"]),
                    gips=float(rec["gips"]),
                    instb=float(rec["instb"]),
                    latency=float(rec["latency"]),
                    p=float(rec["p"]),
                    p_hat=float(rec["p_hat"]),
                    event=rec["event"],
                )
            )
    return rows


def frame_average(rows: list[TraceRow], window: int = 50) -> list[TraceRow]:
    """Collapse each thread's rows into non-overlapping blocks of ``window``.

    Numeric columns are block means; core and node are taken from the last row
    of the block (where the thread ended up); interval and time from the first.
    Event tags within a block are joined with '+'. A short tail block is
    averaged over the rows it has.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    by_thread: dict[tuple[int, int], list[TraceRow]] = {}
    for r in rows:
        by_thread.setdefault((r.pid, r.tid), []).append(r)
    out: list[TraceRow] = []
    for (pid, tid), series in sorted(by_thread.items()):
        for start in range(0, len(series), window):
            block = series[start : start + window]
            n = len(block)
            events = [r.event for r in block if r.event]
            out.append(
                TraceRow(
                    interval=block[0].interval,
                    time_ms=block[0].time_ms,
                    pid=pid,
                    tid=tid,
                    core=block[-1].core,
                    node=block[-1].node,
                    gips=sum(r.gips for r in block) / n,
                    instb=sum(r.instb for r in block) / n,
                    latency=sum(r.latency for r in block) / n,
                    p=sum(r.p for r in block) / n,
                    p_hat=sum(r.p_hat for r in block) / n,
                    event="+".join(events),
                )
            )
    out.sort(key=lambda r: (r.interval, r.pid, r.tid))
    return out
