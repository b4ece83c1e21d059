#!/usr/bin/env python3
"""Recover a full graph from samples and score it against the truth,
including the Chow-Liu baseline on a star."""

import math

import numpy as np

from isingsel import (
    assign_couplings,
    chow_liu_forest,
    edge_disagreements,
    estimate_graph,
    make_star,
    sample_exact_star,
    signed_edges,
    success,
    unsigned_disagreements,
)

model = assign_couplings(make_star(32, "linear"), "positive", 0.25, rng=0)
truth = signed_edges(model)
print(f"star p=32, hub degree {model.d}, couplings +0.25")

for n in (500, 2_000, 8_000):
    data = sample_exact_star(model, n, rng=n)
    lam = 0.5 * math.sqrt(math.log(model.p) / n)
    est = estimate_graph(data, lam, combine="AND", support_threshold=0.125)
    cl = chow_liu_forest(data, model.d)
    print(
        f"n={n:6d}: per-node success {success(est, truth)!s:5s} | "
        f"L1 signed/unsigned disagreements "
        f"{edge_disagreements(est.combined, truth)}/{unsigned_disagreements(est.combined, truth)} | "
        f"CL {edge_disagreements(cl, truth)}/{unsigned_disagreements(cl, truth)}"
    )

print("\ncombination rules differ when endpoints disagree:")
data = sample_exact_star(model, 300, rng=5)
lam = 0.5 * math.sqrt(math.log(model.p) / 300)
for rule in ("AND", "OR"):
    est = estimate_graph(data, lam, combine=rule, support_threshold=0.125)
    print(f"  {rule:4s}: {len(est.combined.signs)} edges, "
          f"{edge_disagreements(est.combined, truth)} signed disagreements")
