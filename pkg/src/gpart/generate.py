"""Seeded random-graph generators used by the benchmark harness and tests."""

from __future__ import annotations

import numpy as np

from .graph import Graph, Partition


def _pair_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    # Row-major upper-triangle order keeps edge draws reproducible.
    return np.triu_indices(n, k=1)


def generate_er(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p) with unit weights, deterministic per seed."""
    if n < 2:
        raise ValueError(f"need at least 2 nodes, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must be in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    us, vs = _pair_indices(n)
    keep = rng.random(len(us)) < p
    return Graph(n, zip(us[keep].tolist(), vs[keep].tolist()))


def generate_planted(
    n: int, p_in: float, p_out: float, seed: int
) -> tuple[Graph, Partition]:
    """Two-community planted-partition graph plus its ground-truth labeling.

    Nodes 0..n/2-1 form community 0 and the rest community 1. Pairs inside
    a community connect with probability p_in, pairs across with p_out.
    """
    if n < 2 or n % 2 != 0:
        raise ValueError(f"node count must be even and >= 2, got {n}")
    if not (0.0 <= p_out < p_in <= 1.0):
        raise ValueError(f"need 0 <= p_out < p_in <= 1, got p_in={p_in}, p_out={p_out}")
    rng = np.random.default_rng(seed)
    us, vs = _pair_indices(n)
    half = n // 2
    same = (us < half) == (vs < half)
    threshold = np.where(same, p_in, p_out)
    keep = rng.random(len(us)) < threshold
    graph = Graph(n, zip(us[keep].tolist(), vs[keep].tolist()))
    planted = Partition([0] * half + [1] * half)
    return graph, planted


def two_clique_bridge(n: int) -> Graph:
    """Two K_{n/2} cliques joined by the single bridge edge (0, n/2).

    The minimum balanced cut is the bridge, which makes this family a
    convenient optimum-known instance (n=8 gives two K4's plus a bridge).
    """
    if n < 4 or n % 2 != 0:
        raise ValueError(f"node count must be even and >= 4, got {n}")
    half = n // 2
    edges = [(u, v) for u in range(half) for v in range(u + 1, half)]
    edges += [(u, v) for u in range(half, n) for v in range(u + 1, n)]
    edges.append((0, half))
    return Graph(n, edges)
