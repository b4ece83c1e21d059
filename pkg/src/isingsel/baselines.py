"""Chow-Liu maximum-weight forest baseline on empirical mutual information."""

import math
from dataclasses import dataclass

import numpy as np

from .graphs import SignedEdgeSet


@dataclass(frozen=True, eq=False)
class MIWeights:
    """Pairwise empirical mutual information in nats (symmetric, >= 0)."""

    p: int
    weights: np.ndarray


def _joint_counts(data):
    """2x2 joint counts for all pairs: n_pp, n_pm, n_mp, n_mm (p x p each)."""
    B = (data.values > 0).astype(np.float64)
    n_pp = B.T @ B
    n_pm = B.T @ (1.0 - B)
    n_mp = n_pm.T
    n_mm = (1.0 - B).T @ (1.0 - B)
    return n_pp, n_pm, n_mp, n_mm


def _mi_from_counts(counts, n):
    """Plug-in MI from the four joint count matrices; 0 log 0 terms drop."""
    n_pp, n_pm, n_mp, n_mm = counts
    p_s = (n_pp + n_pm) / n  # P(X_s = +1)
    p_t = (n_pp + n_mp) / n  # P(X_t = +1)
    mi = np.zeros_like(n_pp)
    for joint, ms, mt in (
        (n_pp / n, p_s, p_t),
        (n_pm / n, p_s, 1.0 - p_t),
        (n_mp / n, 1.0 - p_s, p_t),
        (n_mm / n, 1.0 - p_s, 1.0 - p_t),
    ):
        pos = joint > 0
        term = np.zeros_like(joint)
        term[pos] = joint[pos] * (np.log(joint[pos]) - np.log(ms[pos] * mt[pos]))
        mi += term
    np.fill_diagonal(mi, 0.0)
    return np.maximum(mi, 0.0)


def empirical_mutual_information(data, s, t):
    """Plug-in mutual information of columns s and t, in nats."""
    if s == t:
        raise ValueError("mutual information needs two distinct vertices")
    xs = data.column(s)
    xt = data.column(t)
    n = data.n
    mi = 0.0
    for vs in (1.0, -1.0):
        ps = float(np.mean(xs == vs))
        for vt in (1.0, -1.0):
            pt = float(np.mean(xt == vt))
            pj = float(np.mean((xs == vs) & (xt == vt)))
            if pj > 0:
                mi += pj * (math.log(pj) - math.log(ps * pt))
    return max(mi, 0.0)


def mutual_information_matrix(data):
    return MIWeights(p=data.p, weights=_mi_from_counts(_joint_counts(data), data.n))


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def chow_liu_forest(data, k):
    """Greedy maximum-weight forest with k edges over the MI weights.

    Kruskal order: MI descending, lexicographic pair order on ties. Edge
    signs come from the empirical correlation (an exactly zero correlation
    counts as +1), since the MI weights themselves are sign-blind.
    """
    p = data.p
    if not 0 <= k <= p - 1:
        raise ValueError(f"k must lie in [0, {p - 1}]")
    mi = mutual_information_matrix(data).weights
    corr = (data.values.T @ data.values) / data.n
    pairs = [(s, t) for s in range(1, p + 1) for t in range(s + 1, p + 1)]
    pairs.sort(key=lambda e: (-mi[e[0] - 1, e[1] - 1], e[0], e[1]))
    uf = _UnionFind(p + 1)
    signs = {}
    for s, t in pairs:
        if len(signs) == k:
            break
        if uf.union(s, t):
            signs[(s, t)] = 1 if corr[s - 1, t - 1] >= 0 else -1
    return SignedEdgeSet(p=p, signs=signs)
