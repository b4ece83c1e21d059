"""Parsing and figure construction for sweep result files.

The input is the per-trial result csv with the exact 14-column header

    p,d,beta,n,trial,seed,success,l1_disagree_signed,l1_disagree_unsigned,
    cl_disagree_signed,cl_disagree_unsigned,max_kkt,max_dual_inf,wall_ms

Aggregation happens here, per (p, beta), averaging over trials; rows of
failed trials (all method columns nan) are excluded, matching the
aggregate file the sweep harness writes alongside the results.
"""

import math
from collections import defaultdict
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

RESULT_COLUMNS = [
    "p", "d", "beta", "n", "trial", "seed", "success",
    "l1_disagree_signed", "l1_disagree_unsigned",
    "cl_disagree_signed", "cl_disagree_unsigned",
    "max_kkt", "max_dual_inf", "wall_ms",
]

X_LABEL = "control parameter beta = n / (10 d log p)"


class SchemaError(ValueError):
    """Input file does not conform to the documented result schema."""

    def __init__(self, path, line, message):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


def load_results(path, require=()):
    """Parse a result file into a list of row dicts (floats throughout)."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise SchemaError(path, 1, "empty file")
    header = lines[0].split(",")
    if header != RESULT_COLUMNS:
        missing = [c for c in RESULT_COLUMNS if c not in header]
        detail = f"missing columns {missing}" if missing else f"got {header}"
        raise SchemaError(path, 1, f"header does not match the result schema: {detail}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(RESULT_COLUMNS):
            raise SchemaError(
                path, lineno, f"expected {len(RESULT_COLUMNS)} fields, got {len(parts)}"
            )
        row = {}
        for name, val in zip(RESULT_COLUMNS, parts):
            try:
                row[name] = float(val)
            except ValueError:
                raise SchemaError(path, lineno, f"bad value for {name}: {val!r}") from None
        rows.append(row)
    if not rows:
        raise SchemaError(path, 2, "no data rows")
    for col in require:
        if all(math.isnan(r[col]) for r in rows):
            raise SchemaError(path, 1, f"column {col} has no values")
    return rows


def _failed(row):
    return all(
        math.isnan(row[c])
        for c in ("l1_disagree_signed", "cl_disagree_signed")
    )


def aggregate(rows, column):
    """Mean of a column per (p, beta), skipping failed trials and nans."""
    cells = defaultdict(list)
    for row in rows:
        if _failed(row):
            continue
        if not math.isnan(row[column]):
            cells[(row["p"], row["beta"])].append(row[column])
    return {key: sum(v) / len(v) for key, v in cells.items() if v}


def _save(fig, out_path):
    out_path = str(out_path)
    if "." not in out_path.rsplit("/", 1)[-1]:
        out_path += ".pdf"  # vector output by default
    fig.savefig(out_path)
    return out_path


def plot_success(results_path, out_path):
    """Success probability vs the control parameter, one curve per p."""
    rows = load_results(results_path)
    means = aggregate(rows, "success")
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for p in sorted({key[0] for key in means}):
        betas = sorted(b for (pp, b) in means if pp == p)
        ax.plot(
            betas,
            [means[(p, b)] for b in betas],
            marker="o",
            label=f"p = {int(p)}",
        )
    ax.set_xlabel(X_LABEL)
    ax.set_ylabel("success probability")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    written = _save(fig, out_path)
    return fig, written


@dataclass(frozen=True)
class FigureSpec:
    """One figure request: which plot, from which results file, to where."""

    input_path: str
    kind: str  # "success_curves" or "disagreement_curves"
    output_path: str
    signed: bool = True

    def __post_init__(self):
        if self.kind not in ("success_curves", "disagreement_curves"):
            raise ValueError(f"unknown figure kind {self.kind!r}")

    def render(self):
        if self.kind == "success_curves":
            return plot_success(self.input_path, self.output_path)
        return plot_disagreement(self.input_path, self.output_path, signed=self.signed)


def plot_disagreement(results_path, out_path, signed=True):
    """Mean edge disagreement vs the control parameter, one curve per method."""
    suffix = "signed" if signed else "unsigned"
    columns = {"L1": f"l1_disagree_{suffix}", "CL": f"cl_disagree_{suffix}"}
    rows = load_results(results_path, require=tuple(columns.values()))
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    p_values = sorted({row["p"] for row in rows})
    for method, column in columns.items():
        means = aggregate(rows, column)
        for p in p_values:
            betas = sorted(b for (pp, b) in means if pp == p)
            label = method if len(p_values) == 1 else f"{method} (p = {int(p)})"
            ax.plot(betas, [means[(p, b)] for b in betas], marker="o", label=label)
    ax.set_xlabel(X_LABEL)
    ax.set_ylabel(f"mean edge disagreements ({suffix})")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    written = _save(fig, out_path)
    return fig, written
