"""Command-line entry points: sweep, trial, check-conditions."""

import argparse
import os
import sys

from . import fisher, graphs, harness


def _cmd_sweep(args):
    config, solver_opts = harness.parse_config(args.config)
    if args.seed is not None:
        config = harness.with_seed(config, args.seed)
    os.makedirs(args.out, exist_ok=True)
    sweep = harness.run_sweep(config, solver_opts, jobs=args.jobs, progress=print)
    results = os.path.join(args.out, "results.csv")
    aggregate = os.path.join(args.out, "aggregate.csv")
    harness.write_results_csv(sweep, results)
    harness.write_aggregate_csv(sweep, aggregate)
    failures = sum(1 for r in sweep.rows if r.error is not None)
    print(f"wrote {results} ({len(sweep.rows)} rows) and {aggregate}")
    if failures:
        print(f"warning: {failures} trials failed; see nan rows")
    return 0


def _cmd_trial(args):
    config, solver_opts = harness.parse_config(args.config)
    result = harness.run_trial(config, args.p, args.beta, args.trial, solver_opts)
    for name in harness.RESULT_COLUMNS:
        print(f"{name} = {getattr(result, name)}")
    if result.error is not None:
        print(f"error = {result.error}")
        return 1
    return 0


def _cmd_check_conditions(args):
    model = graphs.load_model(args.model)
    p, d = model.p, model.d
    nodes = [args.r] if args.r is not None else list(range(1, p + 1))
    worst_cmin, worst_alpha = None, None
    for r in nodes:
        S = graphs.neighbor_positions(model, r)
        print(f"# node r = {r} (|S| = {len(S)})")
        if not S:
            print("isolated vertex, nothing to check")
            continue
        Q = fisher.population_fisher(model, r)
        M = fisher.population_second_moment(model, r)
        report = fisher.check_assumptions(Q, M, S, alpha_required=args.alpha)
        print(report.to_record())
        if worst_cmin is None or report.C_min_hat < worst_cmin:
            worst_cmin = report.C_min_hat
        if worst_alpha is None or report.alpha_hat < worst_alpha:
            worst_alpha = report.alpha_hat
    if worst_cmin is not None and worst_cmin > 0 and worst_alpha > 0:
        print(f"# thresholds at n = {args.n} (worst-case C_min, alpha over nodes)")
        th = fisher.theorem_thresholds(worst_cmin, min(worst_alpha, 1.0), d, p, args.n)
        print(th.to_record())
    else:
        print("# thresholds unavailable: conditions fail on some node")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="isingsel",
        description="Signed Ising structure recovery experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sweep", help="run a full experiment sweep from a config file")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", required=True, help="output directory for the csv files")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--seed", type=int, default=None, help="override base_seed")
    sp.set_defaults(func=_cmd_sweep)

    tp = sub.add_parser("trial", help="run and print a single sweep cell")
    tp.add_argument("--config", required=True)
    tp.add_argument("--p", type=int, required=True)
    tp.add_argument("--beta", type=float, required=True)
    tp.add_argument("--trial", type=int, required=True)
    tp.set_defaults(func=_cmd_trial)

    cp = sub.add_parser("check-conditions", help="assumption report for a model file")
    cp.add_argument("--model", required=True)
    cp.add_argument("--n", type=int, default=1000, help="sample size for the thresholds")
    cp.add_argument("--r", type=int, default=None, help="restrict to one center vertex")
    cp.add_argument("--alpha", type=float, default=0.5, help="required incoherence margin")
    cp.set_defaults(func=_cmd_check_conditions)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
