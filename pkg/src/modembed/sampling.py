"""Bivariate node-pair distributions obtained by sampling a graph.

Every sampler returns the same thing: a joint probability p(u, w) over
ordered node pairs together with its marginals. Edge sampling weights
pairs by edge weight, random-walk sampling by co-occurrence on short
stationary walks, and distance sampling by exponentially decayed
dissimilarity. All three produce symmetric distributions, which is what
the downstream modularity machinery assumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .graph import Graph, is_connected
from .semimetric import SemiMetric

_MASS_TOL = 1e-12
_EXP_RANGE = 700.0

MAX_WALK_LENGTH = 16


@dataclass(frozen=True)
class SampledGraph:
    """Joint distribution over ordered node pairs with its marginals.

    ``p_u`` holds row sums and ``p_w`` column sums; the samplers here
    always produce symmetric ``p``, so the two marginals coincide.
    """

    p: np.ndarray
    p_u: np.ndarray
    p_w: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError("p must be a square matrix")
        if p.size == 0:
            raise ValueError("p must be non-empty")
        if p.min() < 0:
            raise ValueError("probabilities must be nonnegative")
        if abs(p.sum() - 1.0) > _MASS_TOL:
            raise ValueError(f"total mass {p.sum()!r} is not 1")
        if np.max(np.abs(p - p.T)) > 1e-14:
            raise ValueError("p must be symmetric")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "p_u", np.asarray(self.p_u, dtype=float))
        object.__setattr__(self, "p_w", np.asarray(self.p_w, dtype=float))

    @classmethod
    def from_matrix(cls, p: np.ndarray) -> "SampledGraph":
        """Symmetrize defensively and attach marginals."""
        p = np.asarray(p, dtype=float)
        p = 0.5 * (p + p.T)
        p_u = p.sum(axis=1)
        return cls(p=p, p_u=p_u, p_w=p_u.copy())

    @property
    def n(self) -> int:
        return self.p.shape[0]


def edge_sampling(g: Graph) -> SampledGraph:
    """Pick an edge with probability proportional to its weight, then an
    ordered orientation uniformly: p(u, w) = A(u, w) / (2m).

    The marginals are the degree distribution d_u / (2m).
    """
    if g.edge_count == 0:
        raise ValueError("edge sampling requires at least one edge")
    return SampledGraph.from_matrix(g.adjacency / g.total_weight)


def random_walk_sampling(g: Graph, length: int, exact_length: bool = False) -> SampledGraph:
    """Endpoints of short random walks started from stationarity.

    A walk length t is drawn uniformly from 1..length, a start node
    from the stationary distribution pi = d / (2m), and p(u, w) is the
    probability of the walk starting at u and ending at w, symmetrized:

        p = sym((1/length) * sum_t diag(pi) P^t)

    With ``exact_length`` the mixture is replaced by the single term
    t = length. Reversibility makes each term symmetric already; the
    explicit symmetrization only mops up roundoff.
    """
    if g.edge_count == 0:
        raise ValueError("random-walk sampling requires at least one edge")
    if not 1 <= length <= MAX_WALK_LENGTH:
        raise ValueError(f"walk length must be in 1..{MAX_WALK_LENGTH}, got {length}")
    if not is_connected(g):
        raise ValueError("random-walk sampling requires a connected graph")
    a = g.adjacency
    d = g.degrees
    p_step = a / d[:, None]
    pi = d / g.total_weight
    walk = np.diag(pi)
    if exact_length:
        for _ in range(length):
            walk = walk @ p_step
        mix = walk
    else:
        mix = np.zeros_like(a)
        for _ in range(length):
            walk = walk @ p_step
            mix += walk
        mix /= length
    return SampledGraph.from_matrix(mix)


def exp_distance_sampling(d: SemiMetric, theta: float | None = None) -> SampledGraph:
    """Boltzmann weighting of a semi-metric: p(u, w) = exp(theta d(u, w)) / Z.

    ``theta`` defaults to -1e-3 divided by the largest dissimilarity,
    a gentle decay that keeps every pair in play. Exponents beyond the
    double-precision range are rejected.
    """
    m = d.d
    if m.size == 0:
        raise ValueError("distance sampling requires at least one node")
    dmax = float(m.max())
    if theta is None:
        theta = -1e-3 / dmax if dmax > 0 else 0.0
    if abs(theta) * dmax > _EXP_RANGE:
        raise NumericalError(
            f"|theta| * max distance = {abs(theta) * dmax:.3g} exceeds the "
            f"exponential range ({_EXP_RANGE:g})"
        )
    weights = np.exp(theta * m)
    return SampledGraph.from_matrix(weights / weights.sum())
