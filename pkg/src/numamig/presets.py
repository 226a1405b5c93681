"""Canned scenarios: four 8-thread processes on a 4-node, 32-core machine.

The four presets differ in where threads start and where their data lives:
free lets the engine round-robin threads and keep data at each process's home
node, direct pins each process to its own node with local data, interleave
pins threads but spreads data evenly over all nodes, and crossed pins threads
while placing data on the paired remote node (node 0 with node 1, node 2 with
node 3). Crossed is the pathological case migration is supposed to fix.
"""

from __future__ import annotations

from .engine import Scenario
from .strategy import StrategySpec, TicketParams, parse_strategy
from .topology import build_topology
from .workload import ProcessSpec

PRESETS = ("free", "direct", "interleave", "crossed")
WORKLOADS = ("uniform", "mixed")

NUM_NODES = 4
CORES_PER_NODE = 8
PIDS = (100, 200, 300, 400)
DEFAULT_REMOTE_FACTOR = 3.0
# kept well below the ~5% total-performance dip of one harmful interchange,
# so the adaptive controller's omega test sees signal, not noise
DEFAULT_NOISE = 0.005


def uniform_processes(
    mem_intensity: float = 1.0,
    noise_sigma: float = DEFAULT_NOISE,
    total_work: float = 4.0,
) -> list[ProcessSpec]:
    """Four identical memory-bound processes."""
    return [
        ProcessSpec(
            pid=pid,
            num_threads=CORES_PER_NODE,
            mem_intensity=mem_intensity,
            base_gips=2.0,
            base_instb=1.0,
            total_work=total_work,
            noise_sigma=noise_sigma,
        )
        for pid in PIDS
    ]


def mixed_processes(noise_sigma: float = DEFAULT_NOISE) -> list[ProcessSpec]:
    """Two memory-hungry processes and two compute-leaning ones."""
    hungry = [
        ProcessSpec(
            pid=pid,
            num_threads=CORES_PER_NODE,
            mem_intensity=0.95,
            base_gips=1.6,
            base_instb=0.5,
            total_work=3.2,
            noise_sigma=noise_sigma,
        )
        for pid in PIDS[:2]
    ]
    leaning = [
        ProcessSpec(
            pid=pid,
            num_threads=CORES_PER_NODE,
            mem_intensity=0.35,
            base_gips=2.4,
            base_instb=3.0,
            total_work=4.8,
            noise_sigma=noise_sigma,
        )
        for pid in PIDS[2:]
    ]
    return hungry + leaning


def build_preset(
    name: str,
    strategy: StrategySpec | str = "none",
    seed: int = 0,
    workload: str = "uniform",
    remote_factor: float = DEFAULT_REMOTE_FACTOR,
    mem_intensity: float | None = None,
    noise_sigma: float | None = None,
    total_work: float | None = None,
    time_limit_ms: float | None = None,
    tickets: TicketParams | None = None,
) -> Scenario:
    """Assemble one of the named scenarios, with optional workload overrides."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}, expected one of {PRESETS}")
    if workload not in WORKLOADS:
        raise ValueError(f"unknown workload {workload!r}, expected one of {WORKLOADS}")
    if isinstance(strategy, str):
        strategy = parse_strategy(strategy)
    topology = build_topology(NUM_NODES, CORES_PER_NODE, remote_factor=remote_factor)
    if workload == "mixed":
        if mem_intensity is not None or total_work is not None:
            raise ValueError("mem_intensity/total_work overrides only apply to uniform")
        kwargs = {} if noise_sigma is None else {"noise_sigma": noise_sigma}
        processes = mixed_processes(**kwargs)
    else:
        kwargs = {}
        if mem_intensity is not None:
            kwargs["mem_intensity"] = mem_intensity
        if noise_sigma is not None:
            kwargs["noise_sigma"] = noise_sigma
        if total_work is not None:
            kwargs["total_work"] = total_work
        processes = uniform_processes(**kwargs)
    if name == "free":
        thread_placement = "free"
    else:
        thread_placement = {
            pid: list(topology.cores_of(node)) for node, pid in enumerate(PIDS)
        }
    return Scenario(
        topology=topology,
        processes=processes,
        strategy=strategy,
        thread_placement=thread_placement,
        data_placement=name,
        tickets=tickets if tickets is not None else TicketParams(),
        seed=seed,
        time_limit_ms=time_limit_ms,
    )
