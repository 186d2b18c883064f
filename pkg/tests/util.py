"""Graph generators and oracles shared across the test modules."""

from __future__ import annotations

import numpy as np

from oscnet import WeightedDigraph, build_graph


def path_graph(n: int, w: float = 1.0) -> WeightedDigraph:
    edges = []
    for i in range(n - 1):
        edges += [(i, i + 1, w), (i + 1, i, w)]
    return build_graph(n, edges)


def star_graph(n: int, w: float = 1.0) -> WeightedDigraph:
    edges = []
    for i in range(1, n):
        edges += [(0, i, w), (i, 0, w)]
    return build_graph(n, edges)


def random_digraph(rng, n: int, p: float = 0.35) -> WeightedDigraph:
    """Random directed graph in which every node has at least one out-edge."""
    edges = []
    for i in range(n):
        targets = [j for j in range(n) if j != i and rng.random() < p]
        if not targets:
            j = int(rng.integers(0, n - 1))
            targets = [j if j < i else j + 1]
        for j in targets:
            edges.append((i, j, float(rng.uniform(0.5, 2.0))))
    return build_graph(n, edges)


def random_undirected(rng, n: int, p: float = 0.4) -> WeightedDigraph:
    """Random connected undirected graph: spanning tree plus extra links."""
    weights: dict[tuple[int, int], float] = {}
    order = rng.permutation(n)
    for k in range(1, n):
        i, j = int(order[k]), int(order[int(rng.integers(0, k))])
        weights[(min(i, j), max(i, j))] = float(rng.uniform(0.5, 1.5))
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in weights and rng.random() < p:
                weights[(i, j)] = float(rng.uniform(0.5, 1.5))
    edges = []
    for (i, j), w in weights.items():
        edges += [(i, j, w), (j, i, w)]
    return build_graph(n, edges)


def row_scaled_digraph(rng, n: int, p: float = 0.4) -> WeightedDigraph:
    """Directed graph whose Laplacian has a real non-negative spectrum.

    Scaling row i of a symmetric graph's weights by c_i > 0 gives the
    Laplacian C (D - A), similar to the symmetric positive-semidefinite
    C^(1/2) (D - A) C^(1/2); the spectrum stays real and non-negative while
    the graph itself becomes directed (w_ij != w_ji).
    """
    base = random_undirected(rng, n, p)
    c = rng.uniform(0.5, 2.0, n)
    edges = [(s, d, float(c[s] * w)) for s, d, w in base.edges]
    return build_graph(n, edges)


def eig_sqrt_oracle(m: np.ndarray) -> np.ndarray:
    """Independent square root V sqrt(W) V^-1 from a plain eigendecomposition."""
    w, v = np.linalg.eig(np.asarray(m, dtype=float))
    w = np.where(np.abs(w) < 1e-12, 0.0, w)
    root = v @ np.diag(np.sqrt(w.astype(complex))) @ np.linalg.inv(v)
    return root.real


def wave_block(lap: np.ndarray) -> np.ndarray:
    """First-order form [[0, I], [-L, 0]] of x'' = -L x."""
    n = lap.shape[0]
    block = np.zeros((2 * n, 2 * n))
    block[:n, n:] = np.eye(n)
    block[n:, :n] = -lap
    return block
