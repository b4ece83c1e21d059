"""Samplers for binary pairwise models.

Three routes: exact enumeration of the joint distribution (small p),
closed-form exact sampling for star graphs (any p), and single-site Gibbs
sampling for everything else. All samplers are pure functions of
(model, parameters, seed).
"""

import math
from dataclasses import dataclass

import numpy as np

from .seeds import as_rng

# Joint enumeration is capped at 2**20 configurations.
ENUM_CAP = 20
_CHUNK = 1 << 16


class EnumerationCapExceeded(RuntimeError):
    """Raised when exact enumeration is requested beyond the variable cap."""


@dataclass(frozen=True, eq=False)
class SampleMatrix:
    """n observations of p spins, entries exactly -1.0 or +1.0."""

    values: np.ndarray

    def __post_init__(self):
        v = self.values
        if v.ndim != 2 or v.shape[0] < 1:
            raise ValueError("values must be a nonempty n x p matrix")
        if not np.all(np.abs(v) == 1.0):
            raise ValueError("entries must be -1 or +1")

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def p(self):
        return self.values.shape[1]

    def column(self, r):
        """Column of vertex r (1-based)."""
        return self.values[:, r - 1]

    def without(self, r):
        """Design matrix for center r: all columns except r, vertex order."""
        return np.delete(self.values, r - 1, axis=1)


def config_signs(indices, p):
    """Decode configuration indices to +/-1 rows.

    Bit j (least significant first) of an index carries vertex j+1:
    bit 1 -> +1, bit 0 -> -1.
    """
    idx = np.asarray(indices, dtype=np.int64).reshape(-1, 1)
    bits = (idx >> np.arange(p, dtype=np.int64)) & 1
    return (bits * 2 - 1).astype(np.float64)


def _interaction_scores(model):
    """Sum of theta_st * x_s * x_t for every configuration index."""
    p = model.p
    n_cfg = 1 << p
    edges = model.topology.sorted_edges()
    w = np.array([model.weights[e] for e in edges])
    scores = np.empty(n_cfg)
    for lo in range(0, n_cfg, _CHUNK):
        hi = min(lo + _CHUNK, n_cfg)
        cfg = config_signs(np.arange(lo, hi), p)
        acc = np.zeros(hi - lo)
        for (s, t), wv in zip(edges, w):
            acc += wv * cfg[:, s - 1] * cfg[:, t - 1]
        scores[lo:hi] = acc
    return scores


@dataclass(frozen=True, eq=False)
class DistributionTable:
    """Exact joint distribution over all 2**p sign configurations.

    probs[i] is the probability of the configuration decoded by
    config_signs(i, p); logZ is the log partition value.
    """

    p: int
    probs: np.ndarray
    logZ: float

    def prob(self, x):
        x = np.asarray(x)
        bits = (x > 0).astype(np.int64)
        idx = int(bits @ (1 << np.arange(self.p, dtype=np.int64)))
        return float(self.probs[idx])

    def config_matrix(self):
        """All configurations as a (2**p, p) sign matrix."""
        return config_signs(np.arange(1 << self.p), self.p)

    def pairwise_moments(self):
        """Exact E[x x^T] (p x p, unit diagonal)."""
        n_cfg = 1 << self.p
        M = np.zeros((self.p, self.p))
        for lo in range(0, n_cfg, _CHUNK):
            cfg = config_signs(np.arange(lo, min(lo + _CHUNK, n_cfg)), self.p)
            M += (cfg * self.probs[lo : lo + cfg.shape[0], None]).T @ cfg
        return M


def enumerate_distribution(model):
    """Exact joint table; requires p <= ENUM_CAP."""
    if model.p > ENUM_CAP:
        raise EnumerationCapExceeded(
            f"p={model.p} exceeds the enumeration cap of {ENUM_CAP}"
        )
    scores = _interaction_scores(model)
    m = scores.max()
    logZ = m + math.log(np.exp(scores - m).sum())
    return DistributionTable(p=model.p, probs=np.exp(scores - logZ), logZ=logZ)


def conditional_prob(model, r, x_rest):
    """P(X_r = +1 | rest), with x_rest over V \\ {r} in vertex order."""
    p = model.p
    x_rest = np.asarray(x_rest, dtype=np.float64)
    if x_rest.shape != (p - 1,):
        raise ValueError(f"x_rest must have length {p - 1}")
    a = 0.0
    for t, w in model.neighbor_weights(r):
        pos = t - 1 if t < r else t - 2
        a += w * x_rest[pos]
    return 0.5 * (1.0 + math.tanh(a))


def sample_exact_enum(model, n, rng):
    """n i.i.d. rows by inverse-CDF over the enumerated joint."""
    if n < 1:
        raise ValueError("n must be >= 1")
    table = enumerate_distribution(model)
    gen = as_rng(rng)
    cdf = np.cumsum(table.probs)
    idx = np.searchsorted(cdf, gen.random(n), side="right")
    idx = np.minimum(idx, len(cdf) - 1)
    return SampleMatrix(config_signs(idx, model.p))


def _find_hub(model):
    edges = model.topology.sorted_edges()
    if not edges:
        return 1
    common = set(edges[0])
    for e in edges[1:]:
        common &= set(e)
    if not common:
        raise ValueError("topology is not a star: edges share no common vertex")
    return min(common)


def sample_exact_star(model, n, rng):
    """Exact sampler for star topologies, no enumeration cap.

    The hub marginal is uniform on +/-1 (no node potentials), and leaves are
    conditionally independent given the hub. One uniform draw per (row,
    vertex), consumed column by column in vertex order.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    hub = _find_hub(model)
    gen = as_rng(rng)
    p = model.p
    u = gen.random((n, p))
    x = np.where(u < 0.5, 1.0, -1.0)  # isolated vertices keep this draw
    x[:, hub - 1] = np.where(u[:, hub - 1] < 0.5, 1.0, -1.0)
    x_hub = x[:, hub - 1]
    for leaf, w in model.neighbor_weights(hub):
        p_plus = 0.5 * (1.0 + np.tanh(w * x_hub))
        x[:, leaf - 1] = np.where(u[:, leaf - 1] < p_plus, 1.0, -1.0)
    return SampleMatrix(x)


def gibbs_sample(model, n, burn_in_sweeps=200, spacing_sweeps=5, rng=0):
    """Single-site Gibbs sampler.

    One sweep updates all p sites sequentially in index order, each site
    drawn from its exact conditional given the current state. The first
    burn_in_sweeps sweeps are discarded, then one state is retained every
    spacing_sweeps sweeps until n rows are collected (at least one sweep
    always separates retained rows, so spacing 0 behaves as 1).

    RNG consumption order: one uniform vector of length p for the initial
    state, then one uniform vector of length p per sweep.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if burn_in_sweeps < 0 or spacing_sweeps < 0:
        raise ValueError("sweep counts must be nonnegative")
    gen = as_rng(rng)
    p = model.p
    nbr = [[] for _ in range(p)]
    for (s, t), w in model.weights.items():
        nbr[s - 1].append((t - 1, w))
        nbr[t - 1].append((s - 1, w))
    nbr = [sorted(a) for a in nbr]

    x = np.where(gen.random(p) < 0.5, 1.0, -1.0).tolist()
    h = [sum(w * x[t] for t, w in nbr[s]) for s in range(p)]
    tanh = math.tanh

    def sweep():
        u = gen.random(p).tolist()
        for s in range(p):
            new = 1.0 if u[s] < 0.5 * (1.0 + tanh(h[s])) else -1.0
            old = x[s]
            if new != old:
                x[s] = new
                delta = new - old
                for t, w in nbr[s]:
                    h[t] += w * delta

    for _ in range(burn_in_sweeps):
        sweep()
    gap = max(1, spacing_sweeps)
    out = np.empty((n, p))
    for i in range(n):
        for _ in range(gap):
            sweep()
        out[i] = x
    return SampleMatrix(out)


def pairwise_moments(data):
    """Empirical second-moment matrix (1/n) X^T X."""
    X = data.values
    return (X.T @ X) / data.n


def save_samples(data, path):
    """Write `n <n> p <p>` then one space-separated row of -1/+1 per line."""
    with open(path, "w") as fh:
        fh.write(f"n {data.n} p {data.p}\n")
        for row in data.values:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")


def load_samples(path):
    with open(path) as fh:
        head = fh.readline().split()
        if len(head) != 4 or head[0] != "n" or head[2] != "p":
            raise ValueError(f"bad sample header: {head!r}")
        n, p = int(head[1]), int(head[3])
        vals = np.loadtxt(fh, dtype=np.float64, ndmin=2)
    if vals.shape != (n, p):
        raise ValueError(f"expected {n} x {p} values, got {vals.shape}")
    return SampleMatrix(vals)
