"""Graph topologies and ground-truth Ising models.

Vertices are labeled 1..p throughout. Edges are unordered pairs stored as
(s, t) with s < t. The stored degree bound d is always the exact maximum
degree of the edge set, since the recovery thresholds scale in the maximum
degree.
"""

import math
from dataclasses import dataclass

from .seeds import as_rng


def _normalize_edge(s, t):
    if s == t:
        raise ValueError(f"self-loop at vertex {s}")
    return (s, t) if s < t else (t, s)


def _max_degree(p, edges):
    deg = [0] * (p + 1)
    for s, t in edges:
        deg[s] += 1
        deg[t] += 1
    return max(deg) if edges else 0


@dataclass(frozen=True)
class Topology:
    """Undirected simple graph on vertices 1..p with max degree d."""

    p: int
    edges: frozenset
    d: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("need at least 2 vertices")
        for s, t in self.edges:
            if not (1 <= s < t <= self.p):
                raise ValueError(f"bad edge ({s}, {t}) for p={self.p}")
        if self.d != _max_degree(self.p, self.edges):
            raise ValueError("stored d does not match the edge set")

    @classmethod
    def from_edges(cls, p, edges):
        es = frozenset(_normalize_edge(s, t) for s, t in edges)
        for s, t in es:
            if not (1 <= s < t <= p):
                raise ValueError(f"bad edge ({s}, {t}) for p={p}")
        return cls(p=p, edges=es, d=_max_degree(p, es))

    def sorted_edges(self):
        """Edges in lexicographic order; the canonical iteration order."""
        return sorted(self.edges)

    def neighbors(self, r):
        if not 1 <= r <= self.p:
            raise ValueError(f"vertex {r} out of range")
        out = []
        for s, t in self.edges:
            if s == r:
                out.append(t)
            elif t == r:
                out.append(s)
        return sorted(out)


@dataclass(frozen=True, eq=False)
class IsingModel:
    """Topology plus nonzero symmetric edge weights."""

    topology: Topology
    weights: dict

    def __eq__(self, other):
        return (
            isinstance(other, IsingModel)
            and self.topology == other.topology
            and self.weights == other.weights
        )

    def __post_init__(self):
        if set(self.weights) != self.topology.edges:
            raise ValueError("weights must be defined exactly on the edges")
        for e, w in self.weights.items():
            if w == 0:
                raise ValueError(f"zero weight on edge {e}")

    @property
    def p(self):
        return self.topology.p

    @property
    def d(self):
        return self.topology.d

    def weight(self, s, t):
        return self.weights[_normalize_edge(s, t)]

    def theta_min(self):
        """Smallest coupling magnitude over the edge set."""
        return min(abs(w) for w in self.weights.values())

    def neighbor_weights(self, r):
        """Sorted list of (neighbor, weight) pairs around vertex r."""
        out = []
        for (s, t), w in self.weights.items():
            if s == r:
                out.append((t, w))
            elif t == r:
                out.append((s, w))
        out.sort()
        return out


@dataclass(frozen=True, eq=False)
class SignedEdgeSet:
    """Sparse map from vertex pairs to edge signs in {-1, +1}.

    Absent pairs mean "no edge" (sign 0). This is the object that recovery
    is scored against.
    """

    p: int
    signs: dict

    def __post_init__(self):
        for (s, t), sg in self.signs.items():
            if not (1 <= s < t <= self.p):
                raise ValueError(f"bad pair ({s}, {t})")
            if sg not in (-1, 1):
                raise ValueError(f"sign must be -1 or +1, got {sg}")

    def sign(self, s, t):
        return self.signs.get(_normalize_edge(s, t), 0)

    def neighborhood(self, r):
        """Signed neighborhood of r: {neighbor: sign}."""
        out = {}
        for (s, t), sg in self.signs.items():
            if s == r:
                out[t] = sg
            elif t == r:
                out[s] = sg
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SignedEdgeSet)
            and self.p == other.p
            and self.signs == other.signs
        )


def make_grid4(side):
    """Four-nearest-neighbor square lattice with free boundary.

    p = side**2 vertices; horizontal and vertical neighbor edges only, so
    interior vertices have degree 4 (the 2x2 case degenerates to a cycle
    with degree 2).
    """
    if side < 2:
        raise ValueError("grid4 needs side >= 2")
    edges = []
    for i in range(side):
        for j in range(side):
            v = i * side + j + 1
            if j + 1 < side:
                edges.append((v, v + 1))
            if i + 1 < side:
                edges.append((v, v + side))
    return Topology.from_edges(side * side, edges)


def make_grid8(side):
    """Eight-nearest-neighbor lattice (rook plus bishop moves), free boundary."""
    if side < 3:
        raise ValueError("grid8 needs side >= 3")
    edges = []
    for i in range(side):
        for j in range(side):
            v = i * side + j + 1
            if j + 1 < side:
                edges.append((v, v + 1))
            if i + 1 < side:
                edges.append((v, v + side))
            if i + 1 < side and j + 1 < side:
                edges.append((v, v + side + 1))
            if i + 1 < side and j - 1 >= 0:
                edges.append((v, v + side - 1))
    return Topology.from_edges(side * side, edges)


def make_star(p, sparsity):
    """Star graph: vertex 1 is the hub, joined to the d lowest-indexed leaves.

    sparsity is either "linear" (d = ceil(0.1 p)), "logarithmic"
    (d = ceil(ln p); natural log), or an explicit integer edge count.
    """
    if p < 2:
        raise ValueError("need at least 2 vertices")
    if sparsity == "linear":
        d = math.ceil(0.1 * p)
    elif sparsity == "logarithmic":
        d = math.ceil(math.log(p))
    elif isinstance(sparsity, int) and not isinstance(sparsity, bool):
        d = sparsity
    else:
        raise ValueError(f"unknown sparsity {sparsity!r}")
    if not 1 <= d <= p - 1:
        raise ValueError(f"hub degree {d} out of range [1, {p - 1}]")
    edges = [(1, leaf) for leaf in range(2, d + 2)]
    return Topology.from_edges(p, edges)


def assign_couplings(topology, mode, omega, rng):
    """Attach edge weights: all +omega, or +/-omega with equal probability.

    Mixed signs are drawn edge by edge in lexicographic edge order, so the
    result is reproducible from the seed alone.
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    edges = topology.sorted_edges()
    if mode == "positive":
        weights = {e: float(omega) for e in edges}
    elif mode == "mixed":
        gen = as_rng(rng)
        signs = gen.integers(0, 2, size=len(edges)) * 2 - 1
        weights = {e: float(sg * omega) for e, sg in zip(edges, signs)}
    else:
        raise ValueError(f"unknown coupling mode {mode!r}")
    return IsingModel(topology=topology, weights=weights)


def signed_edges(model):
    """Ground-truth signed edge set of a model."""
    signs = {e: (1 if w > 0 else -1) for e, w in model.weights.items()}
    return SignedEdgeSet(p=model.p, signs=signs)


def save_model(model, path):
    """Write a model as `p <p> d <d>` then one `s t weight` line per edge."""
    lines = [f"p {model.p} d {model.d}"]
    for s, t in model.topology.sorted_edges():
        lines.append(f"{s} {t} {model.weights[(s, t)]:.17g}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_model(path):
    with open(path) as fh:
        raw = [ln.strip() for ln in fh if ln.strip()]
    head = raw[0].split()
    if len(head) != 4 or head[0] != "p" or head[2] != "d":
        raise ValueError(f"bad model header: {raw[0]!r}")
    p, d = int(head[1]), int(head[3])
    weights = {}
    for ln in raw[1:]:
        s, t, w = ln.split()
        weights[_normalize_edge(int(s), int(t))] = float(w)
    topo = Topology.from_edges(p, weights.keys())
    if topo.d != d:
        raise ValueError(f"header d={d} does not match edges (max degree {topo.d})")
    return IsingModel(topology=topo, weights=weights)


def covariate_position(r, t, p):
    """Column of vertex t in the regression design for center r.

    The design for center r stacks the columns of all vertices except r in
    increasing vertex order; positions are 0-based.
    """
    if t == r or not (1 <= t <= p) or not (1 <= r <= p):
        raise ValueError(f"bad vertex pair r={r}, t={t}")
    return t - 1 if t < r else t - 2


def neighbor_positions(model, r):
    """0-based design positions of the true neighbors of r (the set S)."""
    return [covariate_position(r, t, model.p) for t, _ in model.neighbor_weights(r)]
