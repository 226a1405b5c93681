"""Discrete-time simulation loop driving a strategy over a synthetic workload.

Each interval: sample every live thread, fold scores into the record, let the
strategy decide, apply the decision, then credit the interval's work. A
migration decided in interval k therefore changes where threads run from
interval k+1 on. Threads that finish release their cores; a process's
completion time is the exact sub-interval finish time of its slowest thread.
"""

from __future__ import annotations

import dataclasses
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .metrics import (
    PerfRecord,
    TraceRow,
    compute_p,
    normalized_p,
    total_performance,
)
from .placement import Placement, ThreadId
from .strategy import (
    ControllerState,
    StrategySpec,
    TicketParams,
    apply_interchange,
    imar2_step,
    imar_step,
    parse_strategy,
    render_strategy,
)
from .topology import Topology, build_topology
from .workload import (
    DEFAULT_LOCAL_LATENCY,
    DataPlacement,
    ProcessSpec,
    WorkTracker,
    sample,
)

DATA_POLICIES = ("free", "direct", "interleave", "crossed")


@dataclass
class Scenario:
    """Everything needed to reproduce one run."""

    topology: Topology
    processes: list[ProcessSpec]
    strategy: StrategySpec
    thread_placement: str | dict[int, list[int]] = "free"
    data_placement: str | dict[int, list[float]] = "free"
    crossed_pairing: list[int] | None = None
    tickets: TicketParams = field(default_factory=TicketParams)
    seed: int = 0
    time_limit_ms: float | None = None
    local_latency: float = DEFAULT_LOCAL_LATENCY
    core_capacity: int = 1


def _validate(sc: Scenario) -> None:
    if not sc.processes:
        raise ValueError("scenario needs at least one process")
    pids = [p.pid for p in sc.processes]
    if len(set(pids)) != len(pids):
        raise ValueError(f"duplicate pids: {pids}")
    if sc.core_capacity < 1:
        raise ValueError("core_capacity must be >= 1")
    if sc.local_latency <= 0:
        raise ValueError("local_latency must be > 0")
    if sc.time_limit_ms is not None and sc.time_limit_ms <= 0:
        raise ValueError("time_limit_ms must be > 0")
    total = sum(p.num_threads for p in sc.processes)
    room = sc.topology.num_cores * sc.core_capacity
    if total > room:
        raise ValueError(f"{total} threads do not fit on {room} core slots")
    if isinstance(sc.thread_placement, dict):
        for p in sc.processes:
            cores = sc.thread_placement.get(p.pid)
            if not cores:
                raise ValueError(f"no pinned cores for process {p.pid}")
            for c in cores:
                sc.topology.node_of(c)  # range check
    elif sc.thread_placement != "free":
        raise ValueError(f"unknown thread placement {sc.thread_placement!r}")
    if isinstance(sc.data_placement, dict):
        for p in sc.processes:
            if p.pid not in sc.data_placement:
                raise ValueError(f"no data weights for process {p.pid}")
    elif sc.data_placement not in DATA_POLICIES:
        raise ValueError(f"unknown data placement {sc.data_placement!r}")
    if sc.data_placement == "crossed" or sc.crossed_pairing is not None:
        _crossed_pairing(sc)  # validates


def _crossed_pairing(sc: Scenario) -> list[int]:
    n = sc.topology.num_nodes
    pairing = sc.crossed_pairing
    if pairing is None:
        if n % 2:
            raise ValueError("crossed placement needs an even node count")
        pairing = [i ^ 1 for i in range(n)]
    if sorted(pairing) != list(range(n)):
        raise ValueError(f"pairing {pairing} is not a permutation of 0..{n - 1}")
    for i, j in enumerate(pairing):
        if j == i or pairing[j] != i:
            raise ValueError(f"pairing {pairing} must swap nodes in pairs")
    return pairing


def initial_state(sc: Scenario) -> tuple[Placement, dict[int, DataPlacement]]:
    """Place threads and resolve each process's data weights.

    Free thread placement round-robins over nodes: thread i of the process at
    list position p prefers node (p + i) mod N, taking the lowest free core
    there and falling over to later nodes when full. A process's home node is
    wherever its first thread landed; free and direct data both concentrate
    on the home node, interleave spreads evenly, crossed puts it on the home
    node's paired partner.
    """
    _validate(sc)
    topo = sc.topology
    placement = Placement(capacity=sc.core_capacity)
    for pos, proc in enumerate(sc.processes):
        for thread in proc.threads():
            if isinstance(sc.thread_placement, dict):
                cores = sc.thread_placement[proc.pid]
                core = cores[thread.index % len(cores)]
                placement.assign(thread, core)
                continue
            preferred = (pos + thread.index) % topo.num_nodes
            for step in range(topo.num_nodes):
                node = (preferred + step) % topo.num_nodes
                free = [c for c in topo.cores_of(node) if placement.has_space(c)]
                if free:
                    placement.assign(thread, min(free))
                    break
            else:
                raise ValueError(f"no free core for {thread}")
    data: dict[int, DataPlacement] = {}
    n = topo.num_nodes
    for proc in sc.processes:
        if isinstance(sc.data_placement, dict):
            data[proc.pid] = DataPlacement(sc.data_placement[proc.pid])
            continue
        home = topo.node_of(placement.core_of(ThreadId(proc.pid, 0)))
        weights = np.zeros(n)
        if sc.data_placement == "interleave":
            weights[:] = 1.0 / n
        elif sc.data_placement == "crossed":
            weights[_crossed_pairing(sc)[home]] = 1.0
        else:  # free, direct
            weights[home] = 1.0
        data[proc.pid] = DataPlacement(weights)
    return placement, data


@dataclass
class RunResult:
    completion_ms: dict[int, float]
    finished: dict[int, bool]
    trace: list[TraceRow]
    migrations: int
    swaps: int
    rollbacks: int
    pt_series: list[tuple[float, float]]  # (interval start ms, Pt)
    completed_work: dict[int, float]
    intervals: int
    end_time_ms: float
    time_limit_ms: float


def default_time_limit(processes: list[ProcessSpec]) -> float:
    """Ten times the slowest process's all-local estimate."""
    return 10.0 * max(1000.0 * p.total_work / p.base_gips for p in processes)


def run(sc: Scenario, collect_trace: bool = True) -> RunResult:
    _validate(sc)
    topo = sc.topology
    strat = sc.strategy
    rng = np.random.default_rng(sc.seed)
    placement, data = initial_state(sc)
    record = PerfRecord()
    work = WorkTracker(sc.processes)
    score = strat.score_params()
    ctrl = None
    if strat.kind == "imar2":
        # migrate aggressively at first: start at the shortest period
        ctrl = ControllerState(
            t=strat.t_min, t_min=strat.t_min, t_max=strat.t_max, omega=strat.omega
        )
    limit = (
        sc.time_limit_ms
        if sc.time_limit_ms is not None
        else default_time_limit(sc.processes)
    )
    specs = {p.pid: p for p in sc.processes}
    live = [t for p in sc.processes for t in p.threads()]
    trace: list[TraceRow] = []
    pt_series: list[tuple[float, float]] = []
    done_at: dict[ThreadId, float] = {}
    migrations = swaps = rollbacks = 0
    time_ms = 0.0
    interval = 0
    while live:
        t_cur = ctrl.t if ctrl is not None else strat.t
        if time_ms + t_cur > limit + 1e-9:
            break
        obs: dict[ThreadId, tuple] = {}  # thread -> (core, node, sample, p)
        for thread in live:
            core = placement.core_of(thread)
            node = topo.node_of(core)
            s = sample(
                specs[thread.pid],
                thread,
                core,
                data[thread.pid],
                topo,
                rng,
                sc.local_latency,
            )
            p = compute_p(s, score)
            record.update(thread, node, p)
            obs[thread] = (core, node, s, p)
        pt = total_performance(record, live)
        pt_series.append((time_ms, pt))
        live_count = Counter(t.pid for t in live)
        phat: dict[ThreadId, float] = {}
        for proc in sc.processes:
            mine = [t for t in live if t.pid == proc.pid]
            if mine:
                phat.update(normalized_p(record, proc.pid, mine))
        # lone survivors have nothing to rebalance against
        pool = {t: v for t, v in phat.items() if live_count[t.pid] >= 2}
        events: dict[ThreadId, str] = {}
        if strat.kind == "imar":
            decision = imar_step(record, pool, placement, topo, sc.tickets, rng)
            if decision is not None:
                placement = apply_interchange(placement, decision)
                migrations += 1
                events[decision.victim] = "migrate"
                if decision.swap is not None:
                    events[decision.swap] = "swap"
                    swaps += 1
        elif strat.kind == "imar2":
            action, ctrl = imar2_step(
                ctrl, pt, record, pool, placement, topo, sc.tickets, rng
            )
            if action.kind == "migrate":
                placement = apply_interchange(placement, action.decision)
                migrations += 1
                events[action.decision.victim] = "migrate"
                if action.decision.swap is not None:
                    events[action.decision.swap] = "swap"
                    swaps += 1
            elif action.kind == "rollback":
                placement = apply_interchange(placement, action.decision)
                rollbacks += 1
                events[action.decision.victim] = "rollback"
                if action.decision.swap is not None:
                    events[action.decision.swap] = "rollback"
        finished_now = []
        for thread in live:
            s = obs[thread][2]
            before = work.remaining(thread)
            if work.advance(thread, s.gips, t_cur) == 0.0:
                exact = time_ms + 1000.0 * before / s.gips
                done_at[thread] = min(exact, time_ms + t_cur)
                finished_now.append(thread)
        if collect_trace:
            for thread in live:
                core, node, s, p = obs[thread]
                trace.append(
                    TraceRow(
                        interval,
                        time_ms,
                        thread.pid,
                        thread.index,
                        core,
                        node,
                        s.gips,
                        s.instb,
                        s.latency,
                        p,
                        phat[thread],
                        events.get(thread, ""),
                    )
                )
        if finished_now:
            gone = set(finished_now)
            for thread in finished_now:
                placement.remove(thread)
            live = [t for t in live if t not in gone]
        time_ms += t_cur
        interval += 1
    completion: dict[int, float] = {}
    finished: dict[int, bool] = {}
    for proc in sc.processes:
        times = [done_at.get(t) for t in proc.threads()]
        if all(t is not None for t in times):
            completion[proc.pid] = max(times)
            finished[proc.pid] = True
        else:
            completion[proc.pid] = limit
            finished[proc.pid] = False
    return RunResult(
        completion_ms=completion,
        finished=finished,
        trace=trace,
        migrations=migrations,
        swaps=swaps,
        rollbacks=rollbacks,
        pt_series=pt_series,
        completed_work={p.pid: work.completed_work(p.pid) for p in sc.processes},
        intervals=interval,
        end_time_ms=time_ms,
        time_limit_ms=limit,
    )


def compare(
    sc: Scenario,
    baseline: StrategySpec | str,
    test: StrategySpec | str,
    collect_trace: bool = False,
) -> dict[int, float]:
    """Per-process completion time of test as a percentage of baseline.

    Both runs share the scenario's seed and workload; only the strategy
    differs. 100 means parity, below 100 is an improvement.
    """
    if isinstance(baseline, str):
        baseline = parse_strategy(baseline)
    if isinstance(test, str):
        test = parse_strategy(test)
    base = run(dataclasses.replace(sc, strategy=baseline), collect_trace)
    probe = run(dataclasses.replace(sc, strategy=test), collect_trace)
    return {
        pid: 100.0 * probe.completion_ms[pid] / base.completion_ms[pid]
        for pid in base.completion_ms
    }


def scenario_to_dict(sc: Scenario) -> dict:
    """Plain-data form of a scenario, suitable for YAML/JSON round-trips."""
    out: dict = {
        "topology": {
            "num_nodes": sc.topology.num_nodes,
            "cores_per_node": sc.topology.cores_per_node,
            "distance": sc.topology.distance.tolist(),
        },
        "processes": [dataclasses.asdict(p) for p in sc.processes],
        "strategy": render_strategy(sc.strategy),
        "thread_placement": sc.thread_placement,
        "data_placement": sc.data_placement,
        "seed": sc.seed,
        "local_latency": sc.local_latency,
        "core_capacity": sc.core_capacity,
    }
    if sc.crossed_pairing is not None:
        out["crossed_pairing"] = list(sc.crossed_pairing)
    if sc.time_limit_ms is not None:
        out["time_limit_ms"] = sc.time_limit_ms
    if sc.tickets != TicketParams():
        out["tickets"] = dataclasses.asdict(sc.tickets)
    return out


def _int_keyed(mapping: dict) -> dict:
    # YAML configs may carry pid keys as strings
    return {int(k): v for k, v in mapping.items()}


def scenario_from_dict(raw: dict) -> Scenario:
    data = dict(raw)
    topo_raw = data.pop("topology")
    if "distance" in topo_raw:
        topology = build_topology(
            topo_raw["num_nodes"],
            topo_raw["cores_per_node"],
            distance=topo_raw["distance"],
        )
    else:
        topology = build_topology(
            topo_raw["num_nodes"],
            topo_raw["cores_per_node"],
            remote_factor=topo_raw.get("remote_factor", 2.0),
        )
    processes = [ProcessSpec(**p) for p in data.pop("processes")]
    strategy = data.pop("strategy", "none")
    if isinstance(strategy, str):
        strategy = parse_strategy(strategy)
    else:
        strategy = StrategySpec(**strategy)
    tickets = data.pop("tickets", None)
    tickets = TicketParams(**tickets) if tickets else TicketParams()
    thread_placement = data.pop("thread_placement", "free")
    if isinstance(thread_placement, dict):
        thread_placement = _int_keyed(thread_placement)
    data_placement = data.pop("data_placement", "free")
    if isinstance(data_placement, dict):
        data_placement = _int_keyed(data_placement)
    known = {
        k: data[k]
        for k in ("crossed_pairing", "seed", "time_limit_ms", "local_latency", "core_capacity")
        if k in data
    }
    unknown = set(data) - set(known)
    if unknown:
        raise ValueError(f"unknown scenario keys: {sorted(unknown)}")
    return Scenario(
        topology=topology,
        processes=processes,
        strategy=strategy,
        thread_placement=thread_placement,
        data_placement=data_placement,
        tickets=tickets,
        **known,
    )
