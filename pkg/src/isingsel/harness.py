"""Deterministic experiment driver for the phase-transition sweeps.

A sweep is a grid of cells (p, beta, trial). Each cell derives its own
seed from (base_seed, p, beta index, trial), builds a fresh ground-truth
model (mixed-coupling sign draws are part of the cell), samples
n = ceil(10 * beta * d * ln p) rows, fits every node problem at
lambda = lambda_scale * sqrt(ln p / n), and scores the result against the
truth. The output table is a pure function of the config (wall-clock
column aside); cells may run in any order or in parallel.
"""

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from . import graphs, sampling, selection
from .baselines import chow_liu_forest
from .logreg import SolverOptions
from .seeds import mix

GRAPH_CLASSES = ("grid4", "grid8", "star_linear", "star_log")

RESULT_COLUMNS = [
    "p", "d", "beta", "n", "trial", "seed", "success",
    "l1_disagree_signed", "l1_disagree_unsigned",
    "cl_disagree_signed", "cl_disagree_unsigned",
    "max_kkt", "max_dual_inf", "wall_ms",
]

AGGREGATE_COLUMNS = [
    "p", "d", "beta", "n", "trials", "failures", "success_rate", "node_success_rate",
    "l1_disagree_signed_mean", "l1_disagree_unsigned_mean",
    "cl_disagree_signed_mean", "cl_disagree_unsigned_mean",
    "max_kkt_mean", "max_dual_inf_mean", "wall_ms_mean",
]


@dataclass(frozen=True)
class ExperimentConfig:
    graph_class: str = "grid4"
    p_list: tuple = (36, 64, 100)
    coupling: str = "mixed"
    omega: float = 0.5
    beta_grid: tuple = (0.2, 0.6, 1.0, 1.4, 1.8, 2.2)
    trials: int = 50
    lambda_scale: float = 1.0
    support_threshold: float = 0.0
    sampler: str = "auto"
    gibbs_burn_in: int = 200
    gibbs_spacing: int = 5
    base_seed: int = 0
    methods: tuple = ("L1", "CL")

    def __post_init__(self):
        if self.graph_class not in GRAPH_CLASSES:
            raise ValueError(f"unknown graph_class {self.graph_class!r}")
        if self.coupling not in ("mixed", "positive"):
            raise ValueError(f"unknown coupling {self.coupling!r}")
        if self.sampler not in ("auto", "exact", "gibbs"):
            raise ValueError(f"unknown sampler {self.sampler!r}")
        if any(b2 <= b1 for b1, b2 in zip(self.beta_grid, self.beta_grid[1:])):
            raise ValueError("beta_grid must be strictly increasing")
        if not self.beta_grid or self.beta_grid[0] <= 0:
            raise ValueError("beta values must be positive")
        if not self.p_list:
            raise ValueError("p_list must be nonempty")
        for p in self.p_list:
            build_topology(self.graph_class, p)  # fail here, not mid-sweep
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.lambda_scale <= 0:
            raise ValueError("lambda_scale must be positive")
        if self.support_threshold < 0:
            raise ValueError("support_threshold must be nonnegative")
        if not self.methods or any(m not in ("L1", "CL") for m in self.methods):
            raise ValueError("methods must be a nonempty subset of {L1, CL}")

    def beta_index(self, beta):
        for i, b in enumerate(self.beta_grid):
            if math.isclose(b, beta, rel_tol=0, abs_tol=1e-12):
                return i
        raise ValueError(f"beta {beta} is not on the configured grid")


@dataclass(frozen=True)
class TrialResult:
    p: int
    d: int
    beta: float
    n: int
    trial: int
    seed: int
    success: bool
    l1_disagree_signed: float
    l1_disagree_unsigned: float
    cl_disagree_signed: float
    cl_disagree_unsigned: float
    max_kkt: float
    max_dual_inf: float
    wall_ms: float
    nonconverged: int = 0
    max_abs_z: float = math.nan
    strict_dual_feasible: bool = False
    node_success_fraction: float = math.nan
    error: str = None


@dataclass(frozen=True)
class SweepResult:
    config: ExperimentConfig
    rows: list
    aggregate: list = field(default_factory=list)


def build_topology(graph_class, p):
    if graph_class in ("grid4", "grid8"):
        side = math.isqrt(p)
        if side * side != p:
            raise ValueError(f"{graph_class} needs a square vertex count, got {p}")
        return graphs.make_grid4(side) if graph_class == "grid4" else graphs.make_grid8(side)
    if graph_class == "star_linear":
        return graphs.make_star(p, "linear")
    if graph_class == "star_log":
        return graphs.make_star(p, "logarithmic")
    raise ValueError(f"unknown graph_class {graph_class!r}")


def sample_size(beta, d, p):
    return max(1, math.ceil(10.0 * beta * d * math.log(p)))


def _draw_samples(config, model, n, seed):
    sampler = config.sampler
    if sampler == "auto":
        sampler = "exact" if config.graph_class.startswith("star") else "gibbs"
    if sampler == "gibbs":
        return sampling.gibbs_sample(
            model, n, config.gibbs_burn_in, config.gibbs_spacing, rng=seed
        )
    if config.graph_class.startswith("star"):
        return sampling.sample_exact_star(model, n, rng=seed)
    return sampling.sample_exact_enum(model, n, rng=seed)


def run_trial(config, p, beta, trial, solver_opts=None):
    """One fully seeded cell; failures are recorded, never raised."""
    solver_opts = solver_opts or SolverOptions()
    bi = config.beta_index(beta)
    topo = build_topology(config.graph_class, p)
    d = topo.d
    n = sample_size(beta, d, p)
    seed = mix(config.base_seed, p, bi, trial)
    start = time.perf_counter()
    try:
        model = graphs.assign_couplings(topo, config.coupling, config.omega, mix(seed, 1))
        truth = graphs.signed_edges(model)
        data = _draw_samples(config, model, n, mix(seed, 2))
        lam = config.lambda_scale * math.sqrt(math.log(p) / n)

        succ = False
        l1_s = l1_u = cl_s = cl_u = math.nan
        max_kkt = max_dual = max_z = node_frac = math.nan
        nonconv = 0
        strict = False
        if "L1" in config.methods:
            est = selection.estimate_graph(
                data, lam, combine="AND", opts=solver_opts,
                support_threshold=config.support_threshold,
            )
            succ = selection.success(est, truth)
            node_frac = sum(
                nb.members == truth.neighborhood(nb.r) for nb in est.per_node
            ) / p
            l1_s = selection.edge_disagreements(est.combined, truth)
            l1_u = selection.unsigned_disagreements(est.combined, truth)
            max_kkt = max(s.kkt_residual for s in est.solutions)
            nonconv = sum(not s.converged for s in est.solutions)
            max_z = 0.0
            max_dual = 0.0
            for sol in est.solutions:
                if sol.zhat is None:
                    continue
                if sol.zhat.size:
                    max_z = max(max_z, float(abs(sol.zhat).max()))
                S = set(graphs.neighbor_positions(model, sol.r))
                off = [j for j in range(len(sol.zhat)) if j not in S]
                if off:
                    max_dual = max(max_dual, float(abs(sol.zhat[off]).max()))
            strict = max_dual < 1.0
        if "CL" in config.methods:
            # forests carry at most p-1 edges; clamp for non-tree truths
            cl = chow_liu_forest(data, min(len(model.weights), p - 1))
            cl_s = selection.edge_disagreements(cl, truth)
            cl_u = selection.unsigned_disagreements(cl, truth)
        wall = (time.perf_counter() - start) * 1e3
        return TrialResult(
            p=p, d=d, beta=beta, n=n, trial=trial, seed=seed, success=succ,
            l1_disagree_signed=l1_s, l1_disagree_unsigned=l1_u,
            cl_disagree_signed=cl_s, cl_disagree_unsigned=cl_u,
            max_kkt=max_kkt, max_dual_inf=max_dual, wall_ms=wall,
            nonconverged=nonconv, max_abs_z=max_z, strict_dual_feasible=strict,
            node_success_fraction=node_frac,
        )
    except Exception as exc:  # sampler/solver failure: record, keep sweeping
        wall = (time.perf_counter() - start) * 1e3
        return TrialResult(
            p=p, d=d, beta=beta, n=n, trial=trial, seed=seed, success=False,
            l1_disagree_signed=math.nan, l1_disagree_unsigned=math.nan,
            cl_disagree_signed=math.nan, cl_disagree_unsigned=math.nan,
            max_kkt=math.nan, max_dual_inf=math.nan, wall_ms=wall,
            error=f"{type(exc).__name__}: {exc}",
        )


def _run_cell(args):
    config, p, beta, trial, solver_opts = args
    return run_trial(config, p, beta, trial, solver_opts)


def _mean(vals):
    vals = [v for v in vals if not (isinstance(v, float) and math.isnan(v))]
    return sum(vals) / len(vals) if vals else math.nan


def aggregate_rows(rows):
    """Per-(p, beta) means; failed trials are counted, not silently dropped."""
    keys = sorted({(r.p, r.beta) for r in rows})
    out = []
    for p, beta in keys:
        cell = [r for r in rows if r.p == p and r.beta == beta]
        good = [r for r in cell if r.error is None]
        out.append(
            {
                "p": p,
                "d": cell[0].d,
                "beta": beta,
                "n": cell[0].n,
                "trials": len(cell),
                "failures": len(cell) - len(good),
                "success_rate": _mean([float(r.success) for r in good]),
                "node_success_rate": _mean([r.node_success_fraction for r in good]),
                "l1_disagree_signed_mean": _mean([r.l1_disagree_signed for r in good]),
                "l1_disagree_unsigned_mean": _mean([r.l1_disagree_unsigned for r in good]),
                "cl_disagree_signed_mean": _mean([r.cl_disagree_signed for r in good]),
                "cl_disagree_unsigned_mean": _mean([r.cl_disagree_unsigned for r in good]),
                "max_kkt_mean": _mean([r.max_kkt for r in good]),
                "max_dual_inf_mean": _mean([r.max_dual_inf for r in good]),
                "wall_ms_mean": _mean([r.wall_ms for r in good]),
            }
        )
    return out


def run_sweep(config, solver_opts=None, jobs=1, progress=None):
    """Run every (p, beta, trial) cell and aggregate by (p, beta)."""
    solver_opts = solver_opts or SolverOptions()
    cells = [
        (config, p, beta, trial, solver_opts)
        for p in config.p_list
        for beta in config.beta_grid
        for trial in range(config.trials)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_cell, cells, chunksize=1))
    else:
        rows = []
        for cell in cells:
            rows.append(_run_cell(cell))
            if progress and len(rows) % config.trials == 0:
                r = rows[-1]
                progress(f"cell p={r.p} beta={r.beta} done ({len(rows)}/{len(cells)})")
    rows.sort(key=lambda r: (r.p, r.beta, r.trial))
    return SweepResult(config=config, rows=rows, aggregate=aggregate_rows(rows))


def _fmt(v):
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.6g}"
    return str(v)


def write_results_csv(sweep, path):
    with open(path, "w") as fh:
        fh.write(",".join(RESULT_COLUMNS) + "\n")
        for r in sweep.rows:
            fh.write(",".join(_fmt(getattr(r, c)) for c in RESULT_COLUMNS) + "\n")


def write_aggregate_csv(sweep, path):
    with open(path, "w") as fh:
        fh.write(",".join(AGGREGATE_COLUMNS) + "\n")
        for row in sweep.aggregate:
            fh.write(",".join(_fmt(row[c]) for c in AGGREGATE_COLUMNS) + "\n")


_CONFIG_KEYS = {
    "graph_class": str,
    "p_list": "int_list",
    "coupling": str,
    "omega": float,
    "beta_grid": "float_list",
    "trials": int,
    "lambda_scale": float,
    "support_threshold": float,
    "sampler": str,
    "gibbs_burn_in": int,
    "gibbs_spacing": int,
    "base_seed": int,
    "methods": "str_list",
    # solver options, forwarded to SolverOptions
    "kkt_tol": float,
    "max_iters": int,
    "backtrack_factor": float,
}
_SOLVER_KEYS = ("kkt_tol", "max_iters", "backtrack_factor")


def parse_config(path):
    """Read a flat `key = value` config file.

    Lists are comma-separated; `#` starts a comment; unknown keys are an
    error. Returns (ExperimentConfig, SolverOptions).
    """
    cfg_kwargs = {}
    solver_kwargs = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected `key = value`, got {raw.strip()!r}")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            kind = _CONFIG_KEYS[key]
            try:
                if kind == "int_list":
                    parsed = tuple(int(x) for x in val.split(","))
                elif kind == "float_list":
                    parsed = tuple(float(x) for x in val.split(","))
                elif kind == "str_list":
                    parsed = tuple(x.strip() for x in val.split(","))
                else:
                    parsed = kind(val)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
            if key in _SOLVER_KEYS:
                solver_kwargs[key] = parsed
            else:
                cfg_kwargs[key] = parsed
    return ExperimentConfig(**cfg_kwargs), SolverOptions(**solver_kwargs)


def with_seed(config, seed):
    return replace(config, base_seed=seed)
