"""Square-grid network topology and lattice shortest-path combinatorics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class InvalidParameterError(ValueError):
    """Raised when a model parameter is outside its valid range."""


@dataclass(frozen=True)
class PathStats:
    """Shortest-path statistics between two lattice nodes.

    edges: number of lattice hops on any shortest path.
    count: number of distinct shortest paths (monotone lattice paths).
    """

    edges: int
    count: int


@dataclass(frozen=True)
class GridNetwork:
    """Nodes on a square lattice, `side` per edge, `spacing_m` meters apart.

    Node i sits at (spacing_m * (i % side), spacing_m * (i // side)).
    """

    side: int
    spacing_m: float
    coords: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.side < 1:
            raise InvalidParameterError(f"grid side must be >= 1, got {self.side}")
        if self.spacing_m <= 0:
            raise InvalidParameterError(f"spacing must be positive, got {self.spacing_m}")
        xs, ys = np.meshgrid(np.arange(self.side), np.arange(self.side))
        coords = np.column_stack([xs.ravel(), ys.ravel()]) * float(self.spacing_m)
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_node_count(cls, node_count: int, spacing_m: float) -> "GridNetwork":
        """Build a grid from a total node count, which must be a perfect square."""
        side = math.isqrt(node_count)
        if side * side != node_count:
            raise InvalidParameterError(
                f"node count must be a perfect square, got {node_count}"
            )
        return cls(side=side, spacing_m=spacing_m)

    @property
    def node_count(self) -> int:
        return self.side * self.side

    @property
    def corner_node(self) -> int:
        return 0

    @property
    def center_node(self) -> int:
        """Node closest to the grid center (exact for odd side)."""
        half = self.side // 2
        return half * self.side + half

    def node_at(self, col: int, row: int) -> int:
        if not (0 <= col < self.side and 0 <= row < self.side):
            raise InvalidParameterError(f"({col},{row}) outside {self.side}x{self.side} grid")
        return row * self.side + col

    def distance(self, i: int, k: int) -> float:
        """Euclidean distance between nodes i and k, in meters."""
        d = self.coords[i] - self.coords[k]
        return float(np.hypot(d[0], d[1]))

    def distances_from(self, i: int) -> np.ndarray:
        """Euclidean distances from node i to every node (self included, = 0)."""
        d = self.coords - self.coords[i]
        return np.hypot(d[:, 0], d[:, 1])

    def lattice_steps(self, i: int, k: int) -> tuple[int, int]:
        """(horizontal, vertical) hop counts between nodes i and k."""
        d = np.rint(np.abs(self.coords[i] - self.coords[k]) / self.spacing_m)
        return int(d[0]), int(d[1])

    def hop_counts_from(self, i: int) -> np.ndarray:
        """Manhattan hop count from node i to every node."""
        d = np.rint(np.abs(self.coords - self.coords[i]) / self.spacing_m)
        return d.sum(axis=1).astype(int)

    def neighbors(self, i: int) -> list[int]:
        """4-neighborhood of node i (nodes one lattice step away)."""
        col, row = i % self.side, i // self.side
        out = []
        for dc, dr in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            c, r = col + dc, row + dr
            if 0 <= c < self.side and 0 <= r < self.side:
                out.append(r * self.side + c)
        return out

    def adjacency(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix of the 4-neighborhood lattice."""
        n = self.node_count
        adj = np.zeros((n, n), dtype=np.float64)
        for i in range(n):
            for k in self.neighbors(i):
                adj[i, k] = 1.0
        return adj


def shortest_paths(net: GridNetwork, i: int, k: int) -> PathStats:
    """Hop count and number of distinct shortest lattice paths from i to k."""
    if i == k:
        raise InvalidParameterError("shortest_paths requires distinct nodes")
    x, y = net.lattice_steps(i, k)
    return PathStats(edges=x + y, count=math.comb(x + y, x))
