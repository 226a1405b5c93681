"""Synthetic per-interval performance model standing in for hardware-counter sampling.

Each live thread yields one (gips, instb, latency) sample per interval. The
model couples performance to placement through the latency ratio:

    wd      = sum_d w_d * distance[node][d]          (aggregate weighted distance)
    latency = L_local * wd * eps
    gips    = base_gips / (1 + mem_intensity * (latency / L_local - 1)) * eps'
    instb   = base_instb * eps''

where w is the process's data-placement weight vector over memory cells,
L_local is the local access latency in cycles (default 200), and eps are
independent lognormal noise factors with parameter ``noise_sigma`` (sigma = 0
gives exactly the closed form). instB is treated as a property of the code,
independent of placement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .placement import ThreadId
from .topology import Topology

DEFAULT_LOCAL_LATENCY = 200.0


@dataclass(frozen=True)
class ProcessSpec:
    """Static description of one simulated multi-threaded process."""

    pid: int
    num_threads: int
    mem_intensity: float
    base_gips: float
    base_instb: float
    total_work: float  # giga-instructions per thread
    noise_sigma: float = 0.0

    def __post_init__(self):
        if self.num_threads < 1:
            raise ValueError("num_threads must be >= 1")
        if not 0.0 <= self.mem_intensity <= 1.0:
            raise ValueError("mem_intensity must be in [0, 1]")
        if self.base_gips <= 0 or self.base_instb <= 0 or self.total_work <= 0:
            raise ValueError("base_gips, base_instb and total_work must be > 0")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")

    def threads(self) -> list[ThreadId]:
        return [ThreadId(self.pid, i) for i in range(self.num_threads)]


class DataPlacement:
    """Weights over memory cells describing where a process's data lives."""

    def __init__(self, weights):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1:
            raise ValueError("weights must be a flat vector")
        if np.any(w < 0.0):
            raise ValueError("weights must be non-negative")
        if abs(w.sum() - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {w.sum()}")
        w.flags.writeable = False
        self.weights = w
        # one-slot cache: per-node weighted distance for the topology last seen
        self._wd_topology: Topology | None = None
        self._wd: np.ndarray | None = None

    def weighted_distance(self, topology: Topology, node: int) -> float:
        """Aggregate distance factor seen from ``node``, sum_d w_d * distance[node][d]."""
        if self._wd_topology is not topology:
            if len(self.weights) != topology.num_nodes:
                raise ValueError(
                    f"weights cover {len(self.weights)} cells, topology has "
                    f"{topology.num_nodes} nodes"
                )
            self._wd = topology.distance @ self.weights
            self._wd_topology = topology
        return float(self._wd[node])

    def __repr__(self) -> str:
        return f"DataPlacement({self.weights.tolist()})"


@dataclass(frozen=True)
class PerfSample:
    """One interval's measurement for one thread."""

    gips: float
    instb: float
    latency: float

    def __post_init__(self):
        if self.gips <= 0 or self.instb <= 0 or self.latency <= 0:
            raise ValueError("sample components must be strictly positive")


def sample(
    spec: ProcessSpec,
    thread: ThreadId,
    core: int,
    data_placement: DataPlacement,
    topology: Topology,
    rng: np.random.Generator,
    local_latency: float = DEFAULT_LOCAL_LATENCY,
) -> PerfSample:
    """Draw one performance sample for ``thread`` running on ``core``.

    With noise_sigma = 0 this is a pure function of placement and data
    placement; noise draws are taken from ``rng`` in call order, three per
    sample, so runs are reproducible for a fixed seed.
    """
    if thread.pid != spec.pid or not 0 <= thread.index < spec.num_threads:
        raise ValueError(f"{thread} does not belong to process {spec.pid}")
    node = topology.node_of(core)
    latency = local_latency * data_placement.weighted_distance(topology, node)
    if spec.noise_sigma > 0.0:
        eps_lat, eps_gips, eps_instb = rng.lognormal(0.0, spec.noise_sigma, 3)
        latency *= eps_lat
    else:
        eps_gips = eps_instb = 1.0
    gips = spec.base_gips / (
        1.0 + spec.mem_intensity * (latency / local_latency - 1.0)
    )
    return PerfSample(gips * eps_gips, spec.base_instb * eps_instb, latency)


class WorkTracker:
    """Remaining work per thread, in giga-instructions."""

    def __init__(self, processes: list[ProcessSpec]):
        self._spec = {p.pid: p for p in processes}
        self._remaining: dict[ThreadId, float] = {}
        for proc in processes:
            for thread in proc.threads():
                self._remaining[thread] = proc.total_work

    def remaining(self, thread: ThreadId) -> float:
        return self._remaining[thread]

    def is_finished(self, thread: ThreadId) -> bool:
        return self._remaining[thread] == 0.0

    def advance(self, thread: ThreadId, gips: float, interval_ms: float) -> float:
        """Credit ``gips * interval_ms / 1000`` of work; returns the remainder.

        Overshoot is clamped to zero, which marks the thread finished.
        """
        if interval_ms < 0:
            raise ValueError("interval must be non-negative")
        left = self._remaining[thread]
        if left == 0.0:
            raise ValueError(f"{thread} already finished")
        left = max(0.0, left - gips * interval_ms / 1000.0)
        self._remaining[thread] = left
        return left

    def process_finished(self, pid: int) -> bool:
        return all(
            self._remaining[t] == 0.0 for t in self._spec[pid].threads()
        )

    def completed_work(self, pid: int) -> float:
        spec = self._spec[pid]
        return sum(spec.total_work - self._remaining[t] for t in spec.threads())
