"""Simulated NUMA machine: nodes, cores, and the inter-node distance matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class Topology:
    """A NUMA machine with one memory cell per node.

    Cores are numbered densely: node k owns cores
    [k * cores_per_node, (k + 1) * cores_per_node). ``distance[a][b]`` is a
    dimensionless latency multiplier for a core on node ``a`` touching memory
    in cell ``b``; local access is the unit, so the diagonal is 1.0.
    """

    num_nodes: int
    cores_per_node: int
    distance: np.ndarray

    def __post_init__(self):
        if self.num_nodes < 1 or self.cores_per_node < 1:
            raise ValueError("num_nodes and cores_per_node must be >= 1")
        matrix = np.asarray(self.distance, dtype=float)
        if matrix.shape != (self.num_nodes, self.num_nodes):
            raise ValueError(
                f"distance matrix must be {self.num_nodes}x{self.num_nodes}, "
                f"got {matrix.shape}"
            )
        if not np.all(matrix > 0.0):
            raise ValueError("distance factors must be strictly positive")
        if not np.allclose(np.diag(matrix), 1.0, rtol=0.0, atol=1e-12):
            raise ValueError("local distance (diagonal) must be 1.0")
        if not np.array_equal(matrix, matrix.T):
            raise ValueError("distance matrix must be symmetric")
        matrix.flags.writeable = False
        object.__setattr__(self, "distance", matrix)

    @property
    def num_cores(self) -> int:
        return self.num_nodes * self.cores_per_node

    def node_of(self, core: int) -> int:
        """Node that owns ``core``."""
        if not 0 <= core < self.num_cores:
            raise ValueError(f"core {core} out of range [0, {self.num_cores})")
        return core // self.cores_per_node

    def cores_of(self, node: int) -> range:
        """Cores owned by ``node``, in ascending order."""
        if not 0 <= node < self.num_nodes:
            raise ValueError(f"node {node} out of range [0, {self.num_nodes})")
        start = node * self.cores_per_node
        return range(start, start + self.cores_per_node)


def build_topology(
    num_nodes: int,
    cores_per_node: int,
    remote_factor: float | None = None,
    distance: np.ndarray | list | None = None,
) -> Topology:
    """Build a validated topology.

    Either pass a full ``distance`` matrix, or a single ``remote_factor`` r,
    which expands to 1.0 on the diagonal and r everywhere else.
    """
    if distance is None:
        if remote_factor is None:
            if num_nodes != 1:
                raise ValueError("either remote_factor or a distance matrix is required")
            remote_factor = 1.0  # single node, value never used
        if num_nodes < 1 or cores_per_node < 1:
            raise ValueError("num_nodes and cores_per_node must be >= 1")
        matrix = np.full((num_nodes, num_nodes), float(remote_factor))
        np.fill_diagonal(matrix, 1.0)
    else:
        matrix = np.asarray(distance, dtype=float)
    return Topology(num_nodes, cores_per_node, matrix)
