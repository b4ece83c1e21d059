"""Shared independent oracles for the test suite.

These deliberately re-derive quantities from first principles (dense
grids, finite differences, direct summation) and never call the code
paths they are used to check.
"""

import numpy as np


def penalized_objective_batch(TH, X, xr, lam):
    """Objective on a batch of parameter vectors (rows of TH)."""
    n = X.shape[0]
    mu = X.T @ xr / n
    A = TH @ X.T
    f = np.mean(np.abs(A) + np.log1p(np.exp(-2.0 * np.abs(A))), axis=1)
    return f - TH @ mu + lam * np.abs(TH).sum(axis=1)


def grid_search_minimizer(X, xr, lam, radius=1.0, points=41, final_step=2.5e-4):
    """Coarse-to-fine dense grid minimization of the penalized objective.

    Valid as a global oracle because the objective is convex: each stage
    brackets the minimizer to within one grid step, and the window shrinks
    around the incumbent until the step is below final_step.
    """
    dim = X.shape[1]
    center = np.zeros(dim)
    width = float(radius)
    while True:
        axes = [center[j] + np.linspace(-width, width, points) for j in range(dim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        TH = np.stack([m.ravel() for m in mesh], axis=1)
        vals = penalized_objective_batch(TH, X, xr, lam)
        best = TH[np.argmin(vals)]
        step = 2.0 * width / (points - 1)
        if np.any(np.abs(best - center) >= width - step / 2) and width >= radius:
            width *= 2.0  # minimizer at the window edge: widen and retry
            continue
        center = best
        if step <= final_step:
            return center
        width = 2.0 * step


def finite_difference_gradient(func, theta, h=1e-5):
    g = np.zeros_like(theta)
    for j in range(len(theta)):
        up = theta.copy()
        dn = theta.copy()
        up[j] += h
        dn[j] -= h
        g[j] = (func(up) - func(dn)) / (2 * h)
    return g


def finite_difference_hessian(func, theta, h=1e-4):
    d = len(theta)
    H = np.zeros((d, d))
    for i in range(d):
        for j in range(d):
            pp = theta.copy(); pp[i] += h; pp[j] += h
            pm = theta.copy(); pm[i] += h; pm[j] -= h
            mp = theta.copy(); mp[i] -= h; mp[j] += h
            mm = theta.copy(); mm[i] -= h; mm[j] -= h
            H[i, j] = (func(pp) - func(pm) - func(mp) + func(mm)) / (4 * h * h)
    return H


def random_sign_data(n, p, rng):
    return rng.choice([-1.0, 1.0], size=(n, p))
