"""Fisher information matrices, assumption checks, and recovery thresholds.

For a fixed center vertex r the population matrix is the eta-weighted
second moment of the remaining covariates under the exact joint; the
sample matrix replaces the expectation with an empirical average. The
dependency and incoherence assumptions, and the threshold formulas they
feed, are evaluated numerically from these matrices. Natural log is used
in every threshold formula.
"""

import math
from dataclasses import dataclass

import numpy as np

from .sampling import ENUM_CAP, EnumerationCapExceeded, config_signs, enumerate_distribution, sample_exact_enum
from .seeds import as_rng, mix
from .graphs import neighbor_positions


def _eta_from_margin(b):
    """Conditional variance weight 4 e^{2b} / (e^{2b} + 1)^2, overflow-safe."""
    e = np.exp(-2.0 * np.abs(b))
    return 4.0 * e / (1.0 + e) ** 2


def eta(x, theta, r):
    """Variance weight of one configuration x for center r at parameter theta."""
    x = np.asarray(x, dtype=np.float64)
    p = x.shape[0]
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (p - 1,):
        raise ValueError(f"theta must have length {p - 1}")
    x_rest = np.delete(x, r - 1)
    b = x[r - 1] * float(x_rest @ theta)
    return float(_eta_from_margin(b))


def eta_weights(X, theta, r):
    """Row-wise eta values for an n x p sign matrix."""
    X_rest = np.delete(X, r - 1, axis=1)
    b = X[:, r - 1] * (X_rest @ theta)
    return _eta_from_margin(b)


def _weighted_eta_outer(X, base_weights, theta, r):
    """Sum of base_weights[i] * eta_i * x_rest x_rest^T over rows of X."""
    w = base_weights * eta_weights(X, theta, r)
    M = np.delete(X, r - 1, axis=1) * np.sqrt(w)[:, None]
    return M.T @ M


@dataclass(frozen=True, eq=False)
class FisherMatrix:
    """Symmetric PSD information matrix for one center vertex."""

    r: int
    kind: str  # "population" or "sample"
    Q: np.ndarray


def population_fisher(model, r):
    """Exact E[eta(X) X_rest X_rest^T] by enumeration; needs p <= ENUM_CAP."""
    if model.p > ENUM_CAP:
        raise EnumerationCapExceeded(
            f"p={model.p} exceeds the enumeration cap of {ENUM_CAP}"
        )
    table = enumerate_distribution(model)
    theta = theta_star_vector(model, r)
    p = model.p
    Q = np.zeros((p - 1, p - 1))
    n_cfg = 1 << p
    chunk = 1 << 16
    for lo in range(0, n_cfg, chunk):
        cfg = config_signs(np.arange(lo, min(lo + chunk, n_cfg)), p)
        Q += _weighted_eta_outer(cfg, table.probs[lo : lo + cfg.shape[0]], theta, r)
    return FisherMatrix(r=r, kind="population", Q=Q)


def sample_fisher(data, theta, r):
    """Empirical eta-weighted second moment at parameter theta."""
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (data.p - 1,):
        raise ValueError(f"theta must have length {data.p - 1}")
    Q = _weighted_eta_outer(data.values, np.full(data.n, 1.0 / data.n), theta, r)
    return FisherMatrix(r=r, kind="sample", Q=Q)


def theta_star_vector(model, r):
    """True parameter subvector for center r, zeros off the neighborhood."""
    th = np.zeros(model.p - 1)
    for t, w in model.neighbor_weights(r):
        th[t - 1 if t < r else t - 2] = w
    return th


def population_second_moment(model, r):
    """Exact E[X_rest X_rest^T] by enumeration."""
    if model.p > ENUM_CAP:
        raise EnumerationCapExceeded(
            f"p={model.p} exceeds the enumeration cap of {ENUM_CAP}"
        )
    table = enumerate_distribution(model)
    p = model.p
    M = np.zeros((p - 1, p - 1))
    n_cfg = 1 << p
    chunk = 1 << 16
    for lo in range(0, n_cfg, chunk):
        cfg = config_signs(np.arange(lo, min(lo + chunk, n_cfg)), p)
        rest = np.delete(cfg, r - 1, axis=1)
        W = rest * np.sqrt(table.probs[lo : lo + cfg.shape[0]])[:, None]
        M += W.T @ W
    return M


def empirical_second_moment(data, r):
    X_rest = data.without(r)
    return (X_rest.T @ X_rest) / data.n


def op_norm_inf(A):
    """Matrix infinity norm: maximum absolute row sum."""
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    if A.size == 0:
        return 0.0
    return float(np.abs(A).sum(axis=1).max())


@dataclass(frozen=True, eq=False)
class AssumptionReport:
    """Numerical check of the dependency and incoherence conditions.

    C_min_hat is the minimum eigenvalue of Q_SS, D_max_hat the maximum
    eigenvalue of the second-moment matrix, incoherence the infinity norm
    of Q_{S^c S} (Q_SS)^{-1} (NaN when Q_SS is singular).
    """

    C_min_hat: float
    D_max_hat: float
    incoherence: float
    alpha_hat: float
    passes_A1: bool
    passes_A2: bool

    def to_record(self):
        return "\n".join(
            [
                f"C_min_hat = {self.C_min_hat:.12g}",
                f"D_max_hat = {self.D_max_hat:.12g}",
                f"incoherence = {self.incoherence:.12g}",
                f"alpha_hat = {self.alpha_hat:.12g}",
                f"passes_A1 = {int(self.passes_A1)}",
                f"passes_A2 = {int(self.passes_A2)}",
            ]
        )


def check_assumptions(Q, second_moment, S, alpha_required, pd_tol=1e-10):
    """Evaluate both conditions for index set S (0-based design positions).

    A singular Q_SS is reported (passes_A1 False, incoherence NaN), never
    raised, so sweeps can keep going.
    """
    Qm = Q.Q if isinstance(Q, FisherMatrix) else np.asarray(Q, dtype=np.float64)
    m = Qm.shape[0]
    S = sorted(set(S))
    if not S:
        raise ValueError("S must be nonempty")
    if S[0] < 0 or S[-1] >= m:
        raise ValueError(f"S indices out of range for a {m} x {m} matrix")
    if not 0.0 < alpha_required <= 1.0:
        raise ValueError("alpha_required must lie in (0, 1]")
    Sc = [j for j in range(m) if j not in set(S)]
    QSS = Qm[np.ix_(S, S)]
    C_min = float(np.linalg.eigvalsh(QSS).min())
    D_max = float(np.linalg.eigvalsh(np.asarray(second_moment, dtype=np.float64)).max())
    if C_min <= pd_tol:
        inco = math.nan
    elif not Sc:
        inco = 0.0
    else:
        # Q_{S^c S} (Q_SS)^{-1} = (solve(Q_SS, Q_{S S^c}))^T by symmetry
        B = np.linalg.solve(QSS, Qm[np.ix_(S, Sc)])
        inco = op_norm_inf(B.T)
    alpha_hat = 1.0 - inco if not math.isnan(inco) else math.nan
    return AssumptionReport(
        C_min_hat=C_min,
        D_max_hat=D_max,
        incoherence=inco,
        alpha_hat=alpha_hat,
        passes_A1=C_min > pd_tol,
        passes_A2=(not math.isnan(inco)) and inco <= 1.0 - alpha_required,
    )


@dataclass(frozen=True, eq=False)
class TheoremThresholds:
    """Sufficient-condition quantities for signed recovery at (n, p, d).

    lambda_min is the smallest admissible regularization level,
    weight_threshold the coupling magnitude guaranteed to be included at
    that level, and sample_size_form the d^3 log p scaling (its constant is
    not specified, so only the form is reported).
    """

    lambda_min: float
    weight_threshold: float
    sample_size_form: float

    def to_record(self):
        return "\n".join(
            [
                f"lambda_min = {self.lambda_min:.12g}",
                f"weight_threshold = {self.weight_threshold:.12g}",
                f"sample_size_form = {self.sample_size_form:.12g}",
            ]
        )


def theorem_thresholds(C_min, alpha, d, p, n):
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    if C_min <= 0:
        raise ValueError("C_min must be positive")
    lam = 16.0 * (2.0 - alpha) / alpha * math.sqrt(math.log(p) / n)
    return TheoremThresholds(
        lambda_min=lam,
        weight_threshold=10.0 / C_min * math.sqrt(d) * lam,
        sample_size_form=d**3 * math.log(p),
    )


def spectral_norm(A):
    return float(np.abs(np.linalg.eigvalsh((A + A.T) / 2.0)).max())


def concentration_probe(model, r, n_grid, reps, rng):
    """Empirical convergence of sample information matrices to Q*.

    For each sample size draws `reps` independent datasets (per-cell derived
    seeds) and measures the spectral deviation of Q^n_SS from Q*_SS, the
    minimum-eigenvalue deviation, and the sample incoherence. Returns one
    summary dict per n with medians and quartiles.
    """
    S = neighbor_positions(model, r)
    if not S:
        raise ValueError(f"vertex {r} has no neighbors")
    Qstar = population_fisher(model, r).Q
    QSS_star = Qstar[np.ix_(S, S)]
    lam_min_star = float(np.linalg.eigvalsh(QSS_star).min())
    theta = theta_star_vector(model, r)
    base = int(as_rng(rng).integers(1 << 62)) if isinstance(rng, np.random.Generator) else int(rng)

    rows = []
    for i, n in enumerate(n_grid):
        spec, eig, inco = [], [], []
        for rep in range(reps):
            data = sample_exact_enum(model, n, mix(base, i, rep))
            Qn = sample_fisher(data, theta, r).Q
            QSS_n = Qn[np.ix_(S, S)]
            spec.append(spectral_norm(QSS_n - QSS_star))
            eig.append(abs(float(np.linalg.eigvalsh(QSS_n).min()) - lam_min_star))
            rep_report = check_assumptions(Qn, empirical_second_moment(data, r), S, alpha_required=1.0)
            inco.append(rep_report.incoherence)
        rows.append(
            {
                "n": int(n),
                "reps": int(reps),
                "spectral_median": float(np.median(spec)),
                "spectral_q25": float(np.quantile(spec, 0.25)),
                "spectral_q75": float(np.quantile(spec, 0.75)),
                "eigmin_median": float(np.median(eig)),
                "incoherence_median": float(np.median(inco)),
            }
        )
    return rows
