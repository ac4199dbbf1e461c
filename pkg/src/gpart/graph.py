"""Weighted undirected graphs, two-way partitions, and cut metrics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import GraphTooLargeError

# Exhaustive enumeration walks 2^(n-1) bipartitions; 20 nodes is the cap.
BRUTE_FORCE_MAX_NODES = 20


class Graph:
    """Immutable weighted undirected graph.

    Edges are stored once in canonical form (u < v, sorted
    lexicographically). Construction rejects self-loops, duplicate
    undirected edges, out-of-range endpoints, and negative weights.
    Instances are safe to share across threads.
    """

    __slots__ = ("n", "_us", "_vs", "_ws", "_adj")

    def __init__(self, n: int, edges: Iterable[Sequence]) -> None:
        n = int(n)
        if n < 1:
            raise ValueError(f"node count must be >= 1, got {n}")
        us: list[int] = []
        vs: list[int] = []
        ws: list[float] = []
        for edge in edges:
            if len(edge) == 2:
                u, v = edge
                w = 1.0
            elif len(edge) == 3:
                u, v, w = edge
            else:
                raise ValueError(f"edge must be (u, v) or (u, v, w), got {edge!r}")
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n) or not (0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not np.isfinite(w) or w < 0:
                raise ValueError(f"edge ({u}, {v}) has invalid weight {w}")
            if u > v:
                u, v = v, u
            us.append(u)
            vs.append(v)
            ws.append(w)

        u_arr = np.asarray(us, dtype=np.int64)
        v_arr = np.asarray(vs, dtype=np.int64)
        w_arr = np.asarray(ws, dtype=np.float64)
        if len(u_arr):
            order = np.lexsort((v_arr, u_arr))
            u_arr, v_arr, w_arr = u_arr[order], v_arr[order], w_arr[order]
            same = (u_arr[1:] == u_arr[:-1]) & (v_arr[1:] == v_arr[:-1])
            if same.any():
                i = int(np.flatnonzero(same)[0])
                raise ValueError(
                    f"duplicate undirected edge ({u_arr[i]}, {v_arr[i]})"
                )
        for arr in (u_arr, v_arr, w_arr):
            arr.setflags(write=False)

        self.n = n
        self._us = u_arr
        self._vs = v_arr
        self._ws = w_arr
        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for u, v, w in zip(u_arr.tolist(), v_arr.tolist(), w_arr.tolist()):
            adj[u].append((v, w))
            adj[v].append((u, w))
        self._adj = adj

    @property
    def edge_count(self) -> int:
        return len(self._us)

    @property
    def total_weight(self) -> float:
        return float(self._ws.sum())

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Yield (u, v, w) with u < v, in canonical order."""
        for u, v, w in zip(self._us.tolist(), self._vs.tolist(), self._ws.tolist()):
            yield u, v, w

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Canonical (us, vs, ws) arrays. Read-only views, zero copy."""
        return self._us, self._vs, self._ws

    def neighbors(self, u: int) -> list[tuple[int, float]]:
        return self._adj[u]

    def degree_counts(self) -> np.ndarray:
        """Number of incident edges per node (weights ignored)."""
        deg = np.bincount(self._us, minlength=self.n)
        deg += np.bincount(self._vs, minlength=self.n)
        return deg

    def weighted_degrees(self) -> np.ndarray:
        deg = np.bincount(self._us, weights=self._ws, minlength=self.n)
        deg += np.bincount(self._vs, weights=self._ws, minlength=self.n)
        return deg

    def weight_matrix(self) -> np.ndarray:
        """Dense symmetric weight matrix. Intended for n up to a few thousand."""
        w = np.zeros((self.n, self.n))
        w[self._us, self._vs] = self._ws
        w[self._vs, self._us] = self._ws
        return w

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self._us, other._us)
            and np.array_equal(self._vs, other._vs)
            and np.array_equal(self._ws, other._ws)
        )

    def __hash__(self) -> int:
        return hash((self.n, self._us.tobytes(), self._vs.tobytes(), self._ws.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count}, weight={self.total_weight:g})"


class Partition:
    """Hard two-way node labeling: one value in {0, 1} per node."""

    __slots__ = ("labels",)

    def __init__(self, labels) -> None:
        arr = np.asarray(labels, dtype=np.int64).copy()
        if arr.ndim != 1 or len(arr) < 1:
            raise ValueError("labels must be a non-empty 1-d sequence")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("labels must be 0 or 1")
        arr.setflags(write=False)
        self.labels = arr

    @property
    def n(self) -> int:
        return len(self.labels)

    def sizes(self) -> tuple[int, int]:
        n1 = int(self.labels.sum())
        return self.n - n1, n1

    def flipped(self) -> "Partition":
        return Partition(1 - self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)

    def __hash__(self) -> int:
        return hash(self.labels.tobytes())

    def __repr__(self) -> str:
        return f"Partition(sizes={self.sizes()})"


@dataclass(frozen=True)
class Metrics:
    """Cut and balance quality of a partition.

    cut_percent counts edges, cut_weight sums their weights; both are
    reported because generators emit unit weights but loaded graphs may not.
    """

    cut_percent: float
    imbalance_percent: float
    cut_weight: float


def cut_metrics(g: Graph, part: Partition) -> Metrics:
    """Percent of edges cut, percent size imbalance, and total cut weight."""
    if part.n != g.n:
        raise ValueError(f"partition length {part.n} != node count {g.n}")
    if g.edge_count == 0:
        raise ValueError("cut metrics are undefined for a graph with no edges")
    us, vs, ws = g.edge_arrays()
    labels = part.labels
    cut = labels[us] != labels[vs]
    n0, n1 = part.sizes()
    return Metrics(
        cut_percent=100.0 * float(cut.sum()) / g.edge_count,
        imbalance_percent=100.0 * abs(n0 - n1) / g.n,
        cut_weight=float(ws[cut].sum()),
    )


def is_connected(g: Graph) -> bool:
    """Breadth-first reachability from node 0."""
    if g.n == 1:
        return True
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    frontier = [0]
    count = 1
    while frontier:
        nxt: list[int] = []
        for u in frontier:
            for v, _ in g.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    count += 1
                    nxt.append(v)
        frontier = nxt
    return count == g.n


def brute_force_min_cut(
    g: Graph, max_imbalance_nodes: int
) -> tuple[Partition, float]:
    """Exhaustive minimum-weight bipartition under a node-imbalance bound.

    Enumerates all 2^(n-1) label-symmetric bipartitions (node 0 pinned to
    side 0) and returns the minimum cut weight among those with
    |n0 - n1| <= max_imbalance_nodes. Ties break to the lexicographically
    smallest label sequence, so results are reproducible.
    """
    if g.n > BRUTE_FORCE_MAX_NODES:
        raise GraphTooLargeError(
            f"exhaustive search is capped at {BRUTE_FORCE_MAX_NODES} nodes, got {g.n}"
        )
    if max_imbalance_nodes < 0:
        raise ValueError("max_imbalance_nodes must be >= 0")
    n = g.n
    us, vs, ws = g.edge_arrays()
    total = 1 << (n - 1)
    # Bit n-1-j of the enumeration index is node j's label, so ascending
    # index order is lexicographic order of the label sequence.
    shifts = np.arange(n - 2, -1, -1, dtype=np.uint32)
    best_weight = np.inf
    best_index = -1
    chunk = 1 << 15
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.uint32)
        rest = (idx[:, None] >> shifts[None, :]) & 1
        labels = np.concatenate(
            [np.zeros((len(idx), 1), dtype=np.uint32), rest], axis=1
        )
        n1 = labels.sum(axis=1)
        feasible = np.abs(n - 2 * n1.astype(np.int64)) <= max_imbalance_nodes
        if not feasible.any():
            continue
        if len(us):
            cut = (labels[:, us] != labels[:, vs]) @ ws
        else:
            cut = np.zeros(len(idx))
        cut = np.where(feasible, cut, np.inf)
        k = int(np.argmin(cut))
        if cut[k] < best_weight:
            best_weight = float(cut[k])
            best_index = start + k
    if best_index < 0:
        raise ValueError(
            f"no bipartition of {n} nodes satisfies |n0 - n1| <= {max_imbalance_nodes}"
        )
    bits = [(best_index >> (n - 1 - j)) & 1 for j in range(1, n)]
    return Partition([0] + bits), best_weight
