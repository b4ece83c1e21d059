#!/usr/bin/env python3
"""Fit one node's l1-regularized logistic regression and inspect the KKT
conditions, the subgradient, and the witness diagnostic."""

import math

import numpy as np

from isingsel import (
    NodeRegressionProblem,
    assign_couplings,
    fit_l1_logistic,
    grad_nll,
    make_grid4,
    nll,
    sample_exact_enum,
    signed_edges,
    witness_check,
)
from isingsel.graphs import neighbor_positions

model = assign_couplings(make_grid4(4), "mixed", 0.5, rng=7)
truth = signed_edges(model)
data = sample_exact_enum(model, 10_000, rng=1)

r = 6  # interior vertex, true degree 4
lam = 2.5 * math.sqrt(math.log(model.p) / data.n)
print(f"center vertex r={r}, true neighborhood {truth.neighborhood(r)}")
print(f"n={data.n}, lambda={lam:.4f}")

sol = fit_l1_logistic(NodeRegressionProblem(data, r, lam))
print(f"\nconverged={sol.converged} in {sol.iterations} iterations, "
      f"KKT residual {sol.kkt_residual:.2e}")
print("nonzero coefficients:")
for pos in sol.support():
    t = pos + 1 if pos + 1 < r else pos + 2
    mark = "true edge" if t in truth.neighborhood(r) else "false positive"
    print(f"  vertex {t:2d}: {sol.theta[pos]:+.4f}  ({mark})")

print(f"\nobjective at estimate: {nll(sol.theta, data, r) + lam*np.abs(sol.theta).sum():.6f}")
print(f"gradient sup-norm at estimate: {np.abs(grad_nll(sol.theta, data, r)).max():.6f}")
print(f"subgradient |z| max off support: "
      f"{max((abs(z) for i, z in enumerate(sol.zhat) if sol.theta[i] == 0), default=0):.4f}")

S = neighbor_positions(model, r)
ref = [1 if model.weight(r, t) > 0 else -1 for t in model.topology.neighbors(r)]
rep = witness_check(sol, data, r, lam, S, ref_signs=ref)
print("\nwitness diagnostic on the true neighborhood:")
print(rep.to_record())
