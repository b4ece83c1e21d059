"""Command line: plot success|disagreement --in <results.csv> --out <figure>."""

import argparse
import sys

from .figures import SchemaError, plot_disagreement, plot_success


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="plot", description="Render sweep result files into figures"
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind, helptext in (
        ("success", "success probability vs control parameter, one curve per p"),
        ("disagreement", "mean edge disagreement vs control parameter, L1 and CL"),
    ):
        sp = sub.add_parser(kind, help=helptext)
        sp.add_argument("--in", dest="infile", required=True)
        sp.add_argument("--out", dest="outfile", required=True)
        if kind == "disagreement":
            sp.add_argument(
                "--unsigned", action="store_true",
                help="plot the sign-blind disagreement columns",
            )
    args = parser.parse_args(argv)
    try:
        if args.kind == "success":
            _, written = plot_success(args.infile, args.outfile)
        else:
            _, written = plot_disagreement(
                args.infile, args.outfile, signed=not args.unsigned
            )
    except SchemaError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {written}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
