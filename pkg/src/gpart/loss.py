"""Differentiable bisection losses over soft node assignments.

Every operation comes in two formulations. "literal" keeps the published
algebra as printed, including its quirks (the cut term rewards cut edges,
the balance term is a per-endpoint pull toward 0.5, the centrality bump
is centered at f_u + f_v = 0). "corrected" is the trainable variant:
nonnegative cut term that is zero for confident same-side endpoints,
balance measured on the mean assignment, centrality bump recentered at
f_u + f_v = 1. Corrected is the default everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Graph

MODES = ("literal", "corrected")


class SoftAssignment:
    """Per-node probabilities over the two sides.

    f[i] is the probability that node i sits on side 1; the pair
    (1 - f[i], f[i]) is the full distribution. The family of independent
    per-node draws from these pairs is the product distribution that the
    cut-cost expectation and the tail bound refer to.
    """

    __slots__ = ("f",)

    def __init__(self, f) -> None:
        arr = np.asarray(f, dtype=np.float64).copy()
        if arr.ndim != 1 or len(arr) < 1:
            raise ValueError("f must be a non-empty 1-d sequence")
        if not np.isfinite(arr).all():
            raise ValueError("f must be finite")
        if (arr < 0).any() or (arr > 1).any():
            raise ValueError("f must lie in [0, 1]")
        arr.setflags(write=False)
        self.f = arr

    @classmethod
    def from_probabilities(cls, p) -> "SoftAssignment":
        """Build from per-node (p0, p1) rows; rows must sum to 1 within 1e-9."""
        arr = np.asarray(p, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError(f"expected shape (n, 2), got {arr.shape}")
        if np.abs(arr.sum(axis=1) - 1.0).max() > 1e-9:
            raise ValueError("probability rows must sum to 1 within 1e-9")
        return cls(np.clip(arr[:, 1], 0.0, 1.0))

    @property
    def n(self) -> int:
        return len(self.f)

    @property
    def p(self) -> np.ndarray:
        return np.column_stack((1.0 - self.f, self.f))

    @property
    def m(self) -> np.ndarray:
        """Per-node soft argmax; for two classes this is f itself."""
        return self.f

    def __repr__(self) -> str:
        return f"SoftAssignment(n={self.n})"


def soft_argmax(p: Sequence[float]) -> float:
    """Expectation of the class index, sum_k k*p[k]; equals p[1] here."""
    if len(p) != 2:
        raise ValueError(f"expected a probability pair, got length {len(p)}")
    if abs(p[0] + p[1] - 1.0) > 1e-9:
        raise ValueError(f"probabilities must sum to 1, got {p[0] + p[1]}")
    return float(p[1])


@dataclass(frozen=True)
class LossConfig:
    alpha: float = 2.0
    xi: float = 0.25
    z: float = 0.0
    mode: str = "corrected"
    lambda_cut: float = 1.0
    lambda_bal: float = 1.0
    lambda_cen: float = 1.0

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.xi <= 0:
            raise ValueError(f"xi must be > 0, got {self.xi}")
        if not 0.0 <= self.z < 1.0:
            raise ValueError(f"z must be in [0, 1), got {self.z}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        for name in ("lambda_cut", "lambda_bal", "lambda_cen"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class LossBreakdown:
    l_cuts: float
    l_balance: float
    l_centrality: float
    total: float


def _check_lengths(g: Graph, a: SoftAssignment) -> None:
    if a.n != g.n:
        raise ValueError(f"assignment length {a.n} != node count {g.n}")


def _cut_scores(m: np.ndarray, alpha: float, mode: str) -> np.ndarray:
    if mode == "literal":
        return np.tanh(alpha * m) - 0.5
    # Odd around m = 0.5 and normalized so that m = 0 and m = 1 land on
    # -0.5 and +0.5 exactly. Keeps each per-edge term in [0, 0.5*w] and
    # makes the cut loss invariant under swapping the two side labels.
    return 0.5 * np.tanh(alpha * (m - 0.5)) / math.tanh(alpha / 2.0)


def _cut_scores_deriv(m: np.ndarray, alpha: float, mode: str) -> np.ndarray:
    if mode == "literal":
        t = np.tanh(alpha * m)
        return alpha * (1.0 - t * t)
    t = np.tanh(alpha * (m - 0.5))
    return 0.5 * alpha * (1.0 - t * t) / math.tanh(alpha / 2.0)


def loss_cuts(g: Graph, a: SoftAssignment, cfg: LossConfig) -> float:
    """Edge-separation term of the training objective."""
    _check_lengths(g, a)
    us, vs, ws = g.edge_arrays()
    s = _cut_scores(a.m, cfg.alpha, cfg.mode)
    prod = s[us] * s[vs]
    if cfg.mode == "literal":
        return float(np.dot(ws, prod))
    return float(np.dot(ws, 0.25 - prod))


def loss_balance(g: Graph, a: SoftAssignment, cfg: LossConfig) -> float:
    """Partition-size term of the training objective."""
    _check_lengths(g, a)
    f = a.f
    if cfg.mode == "literal":
        us, vs, _ = g.edge_arrays()
        t2 = np.tanh(cfg.alpha * (f - 0.5)) ** 2
        return float(t2[us].sum() + t2[vs].sum())
    dev = math.tanh(cfg.alpha * (float(f.mean()) - 0.5))
    return g.n * dev * dev


def loss_centrality(g: Graph, a: SoftAssignment, cfg: LossConfig) -> float:
    """Anti-indecision term: penalizes endpoint pairs stuck near 0.5."""
    _check_lengths(g, a)
    us, vs, _ = g.edge_arrays()
    f = a.f
    q = f[us] + f[vs] - (1.0 if cfg.mode == "corrected" else 0.0)
    return float(np.exp(-(q * q) / (2.0 * cfg.xi * cfg.xi)).sum())


def total_loss(g: Graph, a: SoftAssignment, cfg: LossConfig) -> LossBreakdown:
    l_cuts = loss_cuts(g, a, cfg)
    l_bal = loss_balance(g, a, cfg)
    l_cen = loss_centrality(g, a, cfg)
    total = cfg.lambda_cut * l_cuts + cfg.lambda_bal * l_bal + cfg.lambda_cen * l_cen
    return LossBreakdown(l_cuts, l_bal, l_cen, total)


def grad_total_loss(g: Graph, a: SoftAssignment, cfg: LossConfig) -> np.ndarray:
    """Closed-form d(total)/d(f_i) for every node.

    The soft argmax of a two-class pair is f itself, so the chain through
    m is the identity. Matches central finite differences; see tests.
    """
    _check_lengths(g, a)
    n = g.n
    f = a.f
    us, vs, ws = g.edge_arrays()
    alpha, xi = cfg.alpha, cfg.xi

    s = _cut_scores(f, alpha, cfg.mode)
    ds = _cut_scores_deriv(f, alpha, cfg.mode)
    acc = np.bincount(us, weights=ws * s[vs], minlength=n)
    acc += np.bincount(vs, weights=ws * s[us], minlength=n)
    g_cut = ds * acc
    if cfg.mode == "corrected":
        g_cut = -g_cut

    if cfg.mode == "literal":
        t = np.tanh(alpha * (f - 0.5))
        deg = g.degree_counts()
        g_bal = deg * 2.0 * t * alpha * (1.0 - t * t)
    else:
        dev = math.tanh(alpha * (float(f.mean()) - 0.5))
        g_bal = np.full(n, 2.0 * dev * alpha * (1.0 - dev * dev))

    q = f[us] + f[vs] - (1.0 if cfg.mode == "corrected" else 0.0)
    coef = np.exp(-(q * q) / (2.0 * xi * xi)) * (-q / (xi * xi))
    g_cen = np.bincount(us, weights=coef, minlength=n)
    g_cen += np.bincount(vs, weights=coef, minlength=n)

    return cfg.lambda_cut * g_cut + cfg.lambda_bal * g_bal + cfg.lambda_cen * g_cen


def expected_cut_cost(g: Graph, a: SoftAssignment) -> float:
    """Exact expected cut weight under independent per-node side draws."""
    _check_lengths(g, a)
    us, vs, ws = g.edge_arrays()
    f = a.f
    fu, fv = f[us], f[vs]
    return float(np.dot(ws, fu * (1.0 - fv) + (1.0 - fu) * fv))


def markov_bound(expected_cost: float, z: float) -> float:
    """Cost level below which a sampled partition lands with probability >= z."""
    if not 0.0 <= z < 1.0:
        raise ValueError(f"z must be in [0, 1), got {z}")
    if expected_cost < 0:
        raise ValueError(f"expected cost must be >= 0, got {expected_cost}")
    return expected_cost / (1.0 - z)


def check_markov_guarantee(
    g: Graph, a: SoftAssignment, z: float, samples: int, seed: int
) -> float:
    """Empirical probability that a sampled hard partition beats the bound.

    Draws hard labelings node-independently from the assignment and
    returns the fraction whose cut weight is <= the tail bound. Up to
    sampling noise (3 sigma) the fraction is at least z.
    """
    _check_lengths(g, a)
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    bound = markov_bound(expected_cut_cost(g, a), z)
    tol = 1e-9 * max(1.0, bound)
    us, vs, ws = g.edge_arrays()
    rng = np.random.default_rng(seed)
    hits = 0
    chunk = 8192
    for start in range(0, samples, chunk):
        count = min(chunk, samples - start)
        bits = rng.random((count, g.n)) < a.f
        if len(us):
            cuts = (bits[:, us] != bits[:, vs]) @ ws
        else:
            cuts = np.zeros(count)
        hits += int((cuts <= bound + tol).sum())
    return hits / samples
