"""Two-layer graph convolution producing per-node side probabilities.

Input graphs carry no node features, so the first layer reads learnable
per-node embeddings. Edge weights stay out of the convolution (the loss
consumes them); the aggregation operator is the standard symmetric
normalization of the adjacency with self-loops.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .graph import Graph
from .loss import SoftAssignment


@dataclass(frozen=True)
class ModelConfig:
    embed_dim: int = 16
    hidden_dim: int = 16
    seed: int = 0

    def __post_init__(self) -> None:
        if self.embed_dim < 1 or self.hidden_dim < 1:
            raise ValueError("embed_dim and hidden_dim must be >= 1")


@dataclass(frozen=True)
class NormalizedAdjacency:
    """Sparse A_hat = D^{-1/2} (A + I) D^{-1/2}, symmetric and nonnegative."""

    matrix: sp.csr_array

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass
class GnnModel:
    """Learnable state: node embeddings plus two dense layers."""

    embeddings: np.ndarray  # (n, embed_dim)
    w1: np.ndarray  # (embed_dim, hidden_dim)
    b1: np.ndarray  # (hidden_dim,)
    w2: np.ndarray  # (hidden_dim, 2)
    b2: np.ndarray  # (2,)

    def params(self) -> dict[str, np.ndarray]:
        return {
            "embeddings": self.embeddings,
            "w1": self.w1,
            "b1": self.b1,
            "w2": self.w2,
            "b2": self.b2,
        }

    @classmethod
    def from_params(cls, params: dict[str, np.ndarray]) -> "GnnModel":
        return cls(**params)


def normalized_adjacency(g: Graph) -> NormalizedAdjacency:
    """Symmetrically normalized binary adjacency with self-loops.

    The self-loop keeps zero-degree nodes well defined: their row is the
    unit vector e_i.
    """
    us, vs, _ = g.edge_arrays()
    loops = np.arange(g.n)
    rows = np.concatenate([us, vs, loops])
    cols = np.concatenate([vs, us, loops])
    deg = 1.0 + g.degree_counts()
    dinv = 1.0 / np.sqrt(deg)
    data = dinv[rows] * dinv[cols]
    matrix = sp.csr_array((data, (rows, cols)), shape=(g.n, g.n))
    return NormalizedAdjacency(matrix)


def init_model(g: Graph, cfg: ModelConfig, rng: np.random.Generator | None = None) -> GnnModel:
    """Uniform init scaled by 1/sqrt(fan-in), deterministic per seed."""
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    d0, d = cfg.embed_dim, cfg.hidden_dim
    b_in = 1.0 / np.sqrt(d0)
    b_hid = 1.0 / np.sqrt(d)
    return GnnModel(
        embeddings=rng.uniform(-b_in, b_in, size=(g.n, d0)),
        w1=rng.uniform(-b_in, b_in, size=(d0, d)),
        b1=rng.uniform(-b_in, b_in, size=d),
        w2=rng.uniform(-b_hid, b_hid, size=(d, 2)),
        b2=rng.uniform(-b_hid, b_hid, size=2),
    )


def _softmax_rows(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _forward_internals(
    model: GnnModel, adj: NormalizedAdjacency
) -> tuple[SoftAssignment, dict[str, np.ndarray]]:
    if model.embeddings.shape[0] != adj.n:
        raise ValueError(
            f"embeddings rows {model.embeddings.shape[0]} != graph size {adj.n}"
        )
    a = adj.matrix
    z1 = a @ (model.embeddings @ model.w1) + model.b1
    h1 = np.maximum(z1, 0.0)
    logits = a @ (h1 @ model.w2) + model.b2
    p = _softmax_rows(logits)
    cache = {"z1": z1, "h1": h1, "p": p}
    return SoftAssignment.from_probabilities(p), cache


def forward(model: GnnModel, adj: NormalizedAdjacency) -> SoftAssignment:
    """Deterministic soft assignment for the current parameters."""
    assignment, _ = _forward_internals(model, adj)
    return assignment


def backward(
    model: GnnModel,
    adj: NormalizedAdjacency,
    upstream: np.ndarray,
    cache: dict[str, np.ndarray] | None = None,
) -> dict[str, np.ndarray]:
    """Exact parameter gradients given d(loss)/d(f) per node.

    Recomputes the forward pass unless a cache from _forward_internals is
    supplied. Relies on A_hat being symmetric.
    """
    upstream = np.asarray(upstream, dtype=np.float64)
    if upstream.shape != (adj.n,):
        raise ValueError(f"upstream must have shape ({adj.n},), got {upstream.shape}")
    if cache is None:
        _, cache = _forward_internals(model, adj)
    a = adj.matrix
    z1, h1, p = cache["z1"], cache["h1"], cache["p"]

    # f = p[:, 1]; the softmax Jacobian collapses to +-f(1-f) per row.
    pf = p[:, 1]
    coef = upstream * pf * (1.0 - pf)
    g_logits = np.column_stack((-coef, coef))

    ag2 = a @ g_logits
    g_w2 = h1.T @ ag2
    g_b2 = g_logits.sum(axis=0)

    g_h1 = ag2 @ model.w2.T
    g_z1 = np.where(z1 > 0.0, g_h1, 0.0)
    ag1 = a @ g_z1
    g_w1 = model.embeddings.T @ ag1
    g_b1 = g_z1.sum(axis=0)
    g_x = ag1 @ model.w1.T

    return {"embeddings": g_x, "w1": g_w1, "b1": g_b1, "w2": g_w2, "b2": g_b2}
