import collections
import itertools
import math

import numpy as np
import pytest

from r2csim import GridNetwork, InvalidParameterError, shortest_paths


def bfs_hops(net, source):
    """Independent hop-count oracle: breadth-first search on the lattice."""
    dist = {source: 0}
    queue = collections.deque([source])
    while queue:
        u = queue.popleft()
        for v in net.neighbors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return [dist[i] for i in range(net.node_count)]


def bfs_path_counts(net, source):
    """Number of distinct shortest paths from source, by dynamic programming."""
    hops = bfs_hops(net, source)
    counts = [0] * net.node_count
    counts[source] = 1
    for node in sorted(range(net.node_count), key=hops.__getitem__):
        if node == source:
            continue
        counts[node] = sum(
            counts[v] for v in net.neighbors(node) if hops[v] == hops[node] - 1
        )
    return counts


def test_coordinates_and_node_at():
    net = GridNetwork(side=3, spacing_m=10.0)
    assert net.node_count == 9
    assert net.node_at(0, 0) == 0
    assert net.node_at(2, 1) == 5
    np.testing.assert_allclose(net.coords[5], [20.0, 10.0])
    with pytest.raises(InvalidParameterError):
        net.node_at(3, 0)


def test_corner_and_center():
    net = GridNetwork(side=9, spacing_m=10.0)
    assert net.corner_node == 0
    assert net.center_node == 40
    np.testing.assert_allclose(net.coords[net.center_node], [40.0, 40.0])


def test_from_node_count():
    net = GridNetwork.from_node_count(81, 10.0)
    assert net.side == 9
    with pytest.raises(InvalidParameterError):
        GridNetwork.from_node_count(80, 10.0)


def test_invalid_construction():
    with pytest.raises(InvalidParameterError):
        GridNetwork(side=0, spacing_m=10.0)
    with pytest.raises(InvalidParameterError):
        GridNetwork(side=3, spacing_m=0.0)


def test_distances():
    net = GridNetwork(side=3, spacing_m=10.0)
    assert net.distance(0, 8) == pytest.approx(20.0 * math.sqrt(2))
    assert net.distance(0, 1) == pytest.approx(10.0)
    d = net.distances_from(0)
    assert d[0] == 0.0
    for k in range(net.node_count):
        assert d[k] == pytest.approx(net.distance(0, k))
        assert net.distance(0, k) == pytest.approx(net.distance(k, 0))


@pytest.mark.parametrize("side", [2, 3, 4, 5])
def test_hop_counts_match_bfs(side):
    net = GridNetwork(side=side, spacing_m=7.5)
    for source in range(net.node_count):
        assert net.hop_counts_from(source).tolist() == bfs_hops(net, source)


def test_neighbors_and_adjacency():
    net = GridNetwork(side=3, spacing_m=10.0)
    assert sorted(net.neighbors(4)) == [1, 3, 5, 7]   # interior: 4 neighbors
    assert sorted(net.neighbors(0)) == [1, 3]         # corner: 2 neighbors
    adj = net.adjacency()
    assert adj.shape == (9, 9)
    np.testing.assert_array_equal(adj, adj.T)
    assert adj.trace() == 0.0
    assert adj.sum() == 2 * 12  # 12 undirected lattice edges on a 3x3 grid


@pytest.mark.parametrize("side", [2, 3, 4, 5])
def test_shortest_paths_against_bfs(side):
    net = GridNetwork(side=side, spacing_m=10.0)
    for source in range(net.node_count):
        hops = bfs_hops(net, source)
        counts = bfs_path_counts(net, source)
        for k in range(net.node_count):
            if k == source:
                continue
            stats = shortest_paths(net, source, k)
            assert stats.edges == hops[k]
            assert stats.count == counts[k]


def test_shortest_paths_same_node_rejected():
    net = GridNetwork(side=3, spacing_m=10.0)
    with pytest.raises(InvalidParameterError):
        shortest_paths(net, 2, 2)


def test_lattice_steps():
    net = GridNetwork(side=4, spacing_m=2.5)
    assert net.lattice_steps(0, 15) == (3, 3)
    assert net.lattice_steps(0, 3) == (3, 0)
