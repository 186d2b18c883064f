"""Weighted directed graphs and the matrices built from them.

The adjacency matrix A holds w_ij for each directed link i -> j, the degree
matrix D the weighted out-degrees on its diagonal, and the Laplacian is
L = D - A.  Two rescaled forms matter for dynamics: the semi-normalized
Laplacian H = sqrt(D^-1) L, which divides each row by the square root of its
out-degree and therefore keeps the link pattern of L, and the symmetric
normalization N = sqrt(D^-1) L sqrt(D^-1).  Both are undefined on nodes with
zero out-degree.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DuplicateEdge,
    IndexOutOfRange,
    InvalidSize,
    InvalidSubset,
    NonPositiveWeight,
    SelfLoop,
    ZeroOutDegree,
)

__all__ = [
    "Edge",
    "WeightedDigraph",
    "DetachmentResult",
    "LaplacianSet",
    "build_graph",
    "complete_graph",
    "detach_cluster",
    "laplacian_set",
]

Edge = tuple[int, int, float]


def _validate_edges(n: int, edges: tuple[Edge, ...]) -> None:
    seen: set[tuple[int, int]] = set()
    for src, dst, w in edges:
        if not (0 <= src < n and 0 <= dst < n):
            raise IndexOutOfRange(
                f"edge ({src}, {dst}) outside node range 0..{n - 1}"
            )
        if src == dst:
            raise SelfLoop(f"self-loop at node {src}")
        if not (np.isfinite(w) and w > 0):
            raise NonPositiveWeight(
                f"edge ({src}, {dst}) has weight {w!r}; weights must be "
                "positive finite reals"
            )
        if (src, dst) in seen:
            raise DuplicateEdge(f"edge ({src}, {dst}) listed more than once")
        seen.add((src, dst))


@dataclass(frozen=True)
class WeightedDigraph:
    """Immutable weighted directed graph on nodes 0..n-1.

    Edges are (source, destination, weight) triples; at most one edge per
    ordered pair, no self-loops, strictly positive weights.
    """

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or self.n < 0:
            raise InvalidSize(f"node count must be a non-negative int, got {self.n!r}")
        norm = tuple((int(s), int(d), float(w)) for s, d, w in self.edges)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", norm)
        _validate_edges(self.n, norm)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        """Dense adjacency matrix, A[i, j] = w_ij."""
        a = np.zeros((self.n, self.n))
        for src, dst, w in self.edges:
            a[src, dst] = w
        return a

    def out_degrees(self) -> np.ndarray:
        """Weighted out-degree of each node.

        Summed with math.fsum, so each degree is the correctly rounded sum
        of its outgoing weights regardless of edge order.
        """
        per_node: list[list[float]] = [[] for _ in range(self.n)]
        for src, _, w in self.edges:
            per_node[src].append(w)
        return np.array([math.fsum(ws) for ws in per_node], dtype=np.float64)

    def fingerprint(self) -> str:
        """Short content hash; stable across runs for identical graphs."""
        parts = [f"n={self.n}"]
        parts += [f"{s}>{d}:{w!r}" for s, d, w in sorted(self.edges)]
        digest = hashlib.sha256(";".join(parts).encode()).hexdigest()
        return digest[:16]


def build_graph(n: int, edges) -> WeightedDigraph:
    """Validate and build a graph on n >= 1 nodes from edge triples."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidSize(f"node count must be a positive int, got {n!r}")
    return WeightedDigraph(int(n), tuple(edges))


def complete_graph(n: int, w: float) -> WeightedDigraph:
    """Complete graph on n >= 2 nodes with uniform weight w in both directions."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidSize(f"complete graph needs n >= 2, got {n!r}")
    if not (np.isfinite(w) and w > 0):
        raise NonPositiveWeight(f"weight must be a positive finite real, got {w!r}")
    edges = tuple(
        (i, j, float(w)) for i in range(n) for j in range(n) if i != j
    )
    return WeightedDigraph(int(n), edges)


@dataclass(frozen=True)
class DetachmentResult:
    """Outcome of cutting a cluster out of a larger graph.

    isolated is the cluster rebuilt as a complete graph with the saturated
    weight; residual is the original graph restricted to the remaining nodes
    (renumbered in increasing original order); node_map[k] gives the original
    index of isolated node k.
    """

    isolated: WeightedDigraph
    residual: WeightedDigraph
    node_map: tuple[int, ...]


def detach_cluster(g: WeightedDigraph, nodes, w_sat: float) -> DetachmentResult:
    """Detach a cluster: cluster becomes complete with weight w_sat.

    Mirrors the saturation of a tightly knit community whose internal links
    have all reached the same strength while links to the outside have
    dropped away.  Requires 2 <= len(nodes) <= g.n, distinct in-range nodes.
    """
    subset = [int(i) for i in nodes]
    if len(subset) != len(set(subset)):
        raise InvalidSubset("cluster nodes must be distinct")
    if not 2 <= len(subset) <= g.n:
        raise InvalidSubset(
            f"cluster size must be between 2 and {g.n}, got {len(subset)}"
        )
    for i in subset:
        if not 0 <= i < g.n:
            raise InvalidSubset(f"cluster node {i} outside node range 0..{g.n - 1}")

    cluster = sorted(subset)
    isolated = complete_graph(len(cluster), w_sat)

    keep = [i for i in range(g.n) if i not in set(cluster)]
    index = {orig: new for new, orig in enumerate(keep)}
    residual_edges = tuple(
        (index[s], index[d], w)
        for s, d, w in g.edges
        if s in index and d in index
    )
    residual = WeightedDigraph(len(keep), residual_edges)
    return DetachmentResult(isolated, residual, tuple(cluster))


class LaplacianSet:
    """Adjacency, degree, Laplacian, and normalized Laplacians of one graph.

    A, D, L are computed eagerly; H and N lazily, raising ZeroOutDegree
    (naming the offending nodes) if any out-degree vanishes.
    """

    def __init__(self, graph: WeightedDigraph):
        self.graph = graph
        a = graph.adjacency()
        degrees = graph.out_degrees()
        d = np.diag(degrees)
        lap = d - a
        for m in (a, d, lap, degrees):
            m.setflags(write=False)
        self.A = a
        self.D = d
        self.L = lap
        self.degrees = degrees

    @property
    def n(self) -> int:
        return self.graph.n

    def _sqrt_inv_degrees(self) -> np.ndarray:
        bad = np.flatnonzero(self.degrees <= 0)
        if bad.size:
            raise ZeroOutDegree(bad)
        return 1.0 / np.sqrt(self.degrees)

    @cached_property
    def H(self) -> np.ndarray:
        """Semi-normalized Laplacian sqrt(D^-1) L; same link pattern as L."""
        h = self.L * self._sqrt_inv_degrees()[:, None]
        h.setflags(write=False)
        return h

    @cached_property
    def N(self) -> np.ndarray:
        """Normalized Laplacian sqrt(D^-1) L sqrt(D^-1)."""
        s = self._sqrt_inv_degrees()
        m = self.L * s[:, None] * s[None, :]
        m.setflags(write=False)
        return m


def laplacian_set(g: WeightedDigraph) -> LaplacianSet:
    """All graph matrices of g in one bundle."""
    return LaplacianSet(g)
