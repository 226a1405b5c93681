import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from numamig import build_topology


def test_remote_factor_expansion():
    topo = build_topology(3, 2, remote_factor=4.0)
    assert topo.distance.shape == (3, 3)
    assert np.all(np.diag(topo.distance) == 1.0)
    off = topo.distance[~np.eye(3, dtype=bool)]
    assert np.all(off == 4.0)


def test_explicit_matrix_kept_verbatim():
    m = [[1.0, 2.0, 5.0], [2.0, 1.0, 3.0], [5.0, 3.0, 1.0]]
    topo = build_topology(3, 1, distance=m)
    assert topo.distance.tolist() == m


def test_single_node_needs_no_remote_factor():
    topo = build_topology(1, 4)
    assert topo.distance.tolist() == [[1.0]]
    assert topo.num_cores == 4


def test_multi_node_requires_distances():
    with pytest.raises(ValueError):
        build_topology(2, 2)


@pytest.mark.parametrize(
    "matrix",
    [
        [[1.0, 2.0], [2.0, 2.0]],  # diagonal not 1
        [[1.0, 2.0], [3.0, 1.0]],  # asymmetric
        [[1.0, -2.0], [-2.0, 1.0]],  # non-positive
        [[1.0]],  # wrong shape
    ],
)
def test_bad_matrices_rejected(matrix):
    with pytest.raises(ValueError):
        build_topology(2, 1, distance=matrix)


def test_counts_validated():
    with pytest.raises(ValueError):
        build_topology(0, 2, remote_factor=2.0)
    with pytest.raises(ValueError):
        build_topology(2, 0, remote_factor=2.0)


def test_distance_is_frozen():
    topo = build_topology(2, 1, remote_factor=2.0)
    with pytest.raises(ValueError):
        topo.distance[0, 1] = 9.0


def test_node_of_and_cores_of():
    topo = build_topology(3, 4, remote_factor=2.0)
    assert topo.node_of(0) == 0
    assert topo.node_of(3) == 0
    assert topo.node_of(4) == 1
    assert topo.node_of(11) == 2
    assert list(topo.cores_of(1)) == [4, 5, 6, 7]
    with pytest.raises(ValueError):
        topo.node_of(12)
    with pytest.raises(ValueError):
        topo.node_of(-1)
    with pytest.raises(ValueError):
        topo.cores_of(3)


@given(
    num_nodes=st.integers(1, 6),
    cores_per_node=st.integers(1, 6),
    core_frac=st.floats(0.0, 1.0, exclude_max=True),
)
def test_core_numbering_round_trips(num_nodes, cores_per_node, core_frac):
    topo = build_topology(num_nodes, cores_per_node, remote_factor=2.0)
    core = int(core_frac * topo.num_cores)
    node = topo.node_of(core)
    assert core in topo.cores_of(node)
    assert sum(len(topo.cores_of(n)) for n in range(num_nodes)) == topo.num_cores
