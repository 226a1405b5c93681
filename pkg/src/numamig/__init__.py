"""Thread migration strategies on a simulated NUMA machine."""

from .engine import (
    RunResult,
    Scenario,
    compare,
    initial_state,
    run,
    scenario_from_dict,
    scenario_to_dict,
)
from .metrics import (
    PerfRecord,
    ScoreParams,
    TraceRow,
    compute_p,
    frame_average,
    normalized_p,
    total_performance,
    write_trace,
)
from .placement import Placement, ThreadId
from .presets import PRESETS, WORKLOADS, build_preset, mixed_processes, uniform_processes
from .strategy import (
    ControllerState,
    MigrationDecision,
    NoFeasibleMigration,
    StrategyAction,
    StrategySpec,
    TicketParams,
    TicketTable,
    apply_interchange,
    distribute_tickets,
    imar2_step,
    imar_step,
    lottery,
    parse_strategy,
    render_strategy,
    select_victim,
)
from .topology import Topology, build_topology
from .workload import DataPlacement, PerfSample, ProcessSpec, WorkTracker, sample

__version__ = "0.1.0"

__all__ = [
    "ControllerState",
    "DataPlacement",
    "MigrationDecision",
    "NoFeasibleMigration",
    "PRESETS",
    "PerfRecord",
    "PerfSample",
    "Placement",
    "ProcessSpec",
    "RunResult",
    "Scenario",
    "ScoreParams",
    "StrategyAction",
    "StrategySpec",
    "ThreadId",
    "TicketParams",
    "TicketTable",
    "Topology",
    "TraceRow",
    "WORKLOADS",
    "WorkTracker",
    "apply_interchange",
    "build_preset",
    "build_topology",
    "compare",
    "compute_p",
    "distribute_tickets",
    "frame_average",
    "imar2_step",
    "imar_step",
    "initial_state",
    "lottery",
    "mixed_processes",
    "normalized_p",
    "parse_strategy",
    "render_strategy",
    "run",
    "sample",
    "scenario_from_dict",
    "scenario_to_dict",
    "select_victim",
    "total_performance",
    "uniform_processes",
    "write_trace",
]
