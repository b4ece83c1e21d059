"""From per-node regression fits to signed neighborhoods and graph estimates."""

from dataclasses import dataclass

import numpy as np

from .graphs import SignedEdgeSet
from .logreg import SolverOptions, fit_all_nodes


@dataclass(frozen=True, eq=False)
class SignedNeighborhood:
    """Estimated signed neighborhood of one vertex: {neighbor: sign}."""

    r: int
    members: dict

    def __post_init__(self):
        if self.r in self.members:
            raise ValueError("a vertex cannot neighbor itself")
        for t, sg in self.members.items():
            if sg not in (-1, 1):
                raise ValueError(f"sign for {t} must be -1 or +1")

    def __eq__(self, other):
        return (
            isinstance(other, SignedNeighborhood)
            and self.r == other.r
            and self.members == other.members
        )


@dataclass(frozen=True, eq=False)
class GraphEstimate:
    """Per-node neighborhoods plus a combined edge set under one rule.

    combined is None under the NODEWISE rule. reliable is False when any
    node solve failed to converge (the estimate is still usable).
    """

    p: int
    per_node: list
    combined: SignedEdgeSet
    combine_rule: str
    reliable: bool
    solutions: list = None


def signed_neighborhood(theta_hat, r, threshold=0.0):
    """Support and signs of one fitted coefficient vector.

    With the default threshold of zero this reads the exact support the
    proximal solver produces. A positive threshold additionally drops
    coefficients with |theta| <= threshold, the support rule an
    interior-point solver (which never returns exact zeros) forces anyway;
    the phase-transition configs calibrate it to half the coupling
    strength. Position u maps back to vertex u+1 below the center and u+2
    at or above it.
    """
    theta_hat = np.asarray(theta_hat)
    members = {}
    for pos in np.nonzero(np.abs(theta_hat) > threshold)[0]:
        t = pos + 1 if pos + 1 < r else pos + 2
        members[int(t)] = 1 if theta_hat[pos] > 0 else -1
    return SignedNeighborhood(r=r, members=members)


def _magnitude(solutions, s, t):
    """|theta_hat| that node s assigned to vertex t."""
    th = solutions[s - 1].theta
    pos = t - 1 if t < s else t - 2
    return abs(float(th[pos]))


def combine_neighborhoods(per_node, rule, solutions=None):
    """Merge per-node claims into one signed edge set (AND or OR)."""
    p = len(per_node)
    signs = {}
    for s in range(1, p + 1):
        for t, sg_s in per_node[s - 1].members.items():
            if t < s:
                continue  # handle each unordered pair once, from its low end
            sg_t = per_node[t - 1].members.get(s)
            if rule == "AND":
                if sg_t == sg_s:
                    signs[(s, t)] = sg_s
            elif rule == "OR":
                if sg_t is None or sg_t == sg_s:
                    signs[(s, t)] = sg_s
                else:
                    if solutions is None:
                        raise ValueError("OR sign ties need the fitted magnitudes")
                    mag_s = _magnitude(solutions, s, t)
                    mag_t = _magnitude(solutions, t, s)
                    signs[(s, t)] = sg_s if mag_s >= mag_t else sg_t
            else:
                raise ValueError(f"unknown combine rule {rule!r}")
    if rule == "OR":
        # pairs claimed only by their higher-index endpoint
        for t in range(1, p + 1):
            for s, sg_t in per_node[t - 1].members.items():
                if s < t and (s, t) not in signs and t not in per_node[s - 1].members:
                    signs[(s, t)] = sg_t
    return SignedEdgeSet(p=p, signs=signs)


def estimate_graph(data, lam, combine="AND", opts=None, support_threshold=0.0):
    """Fit every node problem and merge the neighborhoods.

    combine is AND (edge kept only when both endpoints claim it with equal
    sign), OR (either endpoint suffices; sign ties go to the larger fitted
    magnitude, exact ties to the lower-index endpoint), or NODEWISE (no
    combination).
    """
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    if combine not in ("AND", "OR", "NODEWISE"):
        raise ValueError(f"unknown combine rule {combine!r}")
    opts = opts or SolverOptions()
    solutions = fit_all_nodes(data, lam, opts)
    per_node = [
        signed_neighborhood(sol.theta, sol.r, support_threshold) for sol in solutions
    ]
    combined = None
    if combine in ("AND", "OR"):
        combined = combine_neighborhoods(per_node, combine, solutions)
    return GraphEstimate(
        p=data.p,
        per_node=per_node,
        combined=combined,
        combine_rule=combine,
        reliable=all(s.converged for s in solutions),
        solutions=solutions,
    )


def success(estimate, truth):
    """Full-graph success: every signed neighborhood exactly recovered."""
    if estimate.p != truth.p:
        raise ValueError("estimate and truth disagree on p")
    for nb in estimate.per_node:
        if nb.members != truth.neighborhood(nb.r):
            return False
    return True


def edge_disagreements(estimate, truth):
    """Count of vertex pairs whose signed edge values differ."""
    if estimate.p != truth.p:
        raise ValueError("edge sets disagree on p")
    pairs = set(estimate.signs) | set(truth.signs)
    return sum(1 for e in pairs if estimate.signs.get(e, 0) != truth.signs.get(e, 0))


def unsigned_disagreements(estimate, truth):
    """Sign-blind variant: count pairs whose presence differs."""
    if estimate.p != truth.p:
        raise ValueError("edge sets disagree on p")
    return len(set(estimate.signs) ^ set(truth.signs))


def save_estimate(est, path):
    """Text form: combined `s t sign` lines, then one section per node."""
    lines = [f"p {est.p}", f"rule {est.combine_rule}", "edges"]
    if est.combined is not None:
        for (s, t) in sorted(est.combined.signs):
            lines.append(f"{s} {t} {est.combined.signs[(s, t)]:+d}")
    for nb in est.per_node:
        lines.append(f"node {nb.r}")
        for t in sorted(nb.members):
            lines.append(f"{t} {nb.members[t]:+d}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
