"""Shared fixtures: a small worked example with a fully populated record.

Three two-thread processes on a 3-node, 2-cores-per-node machine. The record
holds a current entry for every thread plus a scattering of stale entries
from earlier placements, giving known normalized scores and a known ticket
table for victim (3, 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import pytest

from numamig import PerfRecord, Placement, ThreadId, Topology, build_topology


@dataclass
class WorkedExample:
    topology: Topology
    placement: Placement
    record: PerfRecord
    threads: dict[str, ThreadId]
    current: dict[str, float]
    expected_phat: dict[str, float]
    expected_pt: float
    victim: ThreadId
    # (core, swap thread key, tickets) in table order
    expected_entries: list[tuple[int, str, int]]
    expected_total: int


def build_worked_example() -> WorkedExample:
    topology = build_topology(3, 2, remote_factor=2.0)
    threads = {
        key: ThreadId(int(key[0]), int(key[2]))
        for key in ("1.0", "1.1", "2.0", "2.1", "3.0", "3.1")
    }
    placement = Placement()
    for key, core in (
        ("1.0", 2),
        ("1.1", 4),
        ("2.0", 0),
        ("2.1", 5),
        ("3.0", 1),
        ("3.1", 3),
    ):
        placement.assign(threads[key], core)
    record = PerfRecord()
    stale = {
        ("1.0", 0): 2.5,
        ("1.0", 2): 2.9,
        ("1.1", 0): 2.7,
        ("1.1", 1): 1.8,
        ("2.0", 1): 1.4,
        ("2.1", 1): 1.6,
        ("3.0", 2): 6.3,
        ("3.1", 2): 5.7,
    }
    for (key, node), p in stale.items():
        record.update(threads[key], node, p)
    current = {"1.0": 1.9, "1.1": 3.1, "2.0": 0.9, "2.1": 2.1, "3.0": 3.3, "3.1": 8.1}
    # current entries last, so last_node lands on the occupied node
    for key, p in current.items():
        node = topology.node_of(placement.core_of(threads[key]))
        record.update(threads[key], node, p)
    return WorkedExample(
        topology=topology,
        placement=placement,
        record=record,
        threads=threads,
        current=current,
        expected_phat={
            "1.0": 0.76,
            "1.1": 1.24,
            "2.0": 0.6,
            "2.1": 1.4,
            "3.0": 0.58,
            "3.1": 1.42,
        },
        expected_pt=19.4,
        victim=threads["3.0"],
        expected_entries=[(2, "1.0", 6), (3, "3.1", 4), (4, "1.1", 5), (5, "2.1", 6)],
        expected_total=21,
    )


@pytest.fixture
def worked() -> WorkedExample:
    return build_worked_example()
