"""Command-line front end.

    fuzzyqp solve INSTANCE [--seed N] [--starts N] [--grid N] [--refine N]
                  [--report PATH] [--curves DIR] [--slice D1,D2,...]
                  [--oracle-only] [--tol-lambda EPS] [--no-timings]

Exit codes: 0 certified, 2 uncertified, 1 error.
"""
import argparse
import logging
import sys

from .errors import FuzzyQpError, InstanceFormatError, InvalidInstanceError
from .report import PipelineOptions, emit_curves, run_pipeline, summary_table

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNCERTIFIED = 2


def _ray(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--slice expects comma-separated numbers, got {text!r}")


def _positive_int(minimum):
    def parse(text):
        v = int(text)
        if v < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}")
        return v
    return parse


def build_parser():
    parser = argparse.ArgumentParser(prog="fuzzyqp", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve", help="run the full procedure on an instance file")
    s.add_argument("instance", help="instance file (JSON)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--starts", type=_positive_int(0), default=8, help="random starts per local search")
    s.add_argument("--grid", type=_positive_int(2), default=401, help="oracle points per axis")
    s.add_argument("--refine", type=_positive_int(0), default=3, help="oracle refinement rounds")
    s.add_argument("--report", metavar="PATH", help="write the JSON solve report here")
    s.add_argument("--curves", metavar="DIR", help="write membership curve CSVs here")
    s.add_argument("--slice", type=_ray, metavar="D1,D2,...",
                   help="ray direction for constraint-membership curves (default: diagonal)")
    s.add_argument("--oracle-only", action="store_true", help="skip local search; report grid oracle")
    s.add_argument("--tol-lambda", type=float, default=1e-6, metavar="EPS", help="bisection tolerance")
    s.add_argument("--no-timings", action="store_true",
                   help="omit wall-clock timings so reruns produce byte-identical reports")
    return parser


def cmd_solve(args):
    options = PipelineOptions(seed=args.seed, starts=args.starts, grid=args.grid, refine=args.refine,
                              oracle_only=args.oracle_only, tol_lambda=args.tol_lambda,
                              timings=not args.no_timings)
    try:
        report = run_pipeline(args.instance, options, report_path=args.report)
    except OSError as exc:
        print(f"error: cannot read instance: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except InstanceFormatError as exc:
        print(f"error: {args.instance}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except InvalidInstanceError as exc:
        print(f"error: {args.instance}: invalid instance", file=sys.stderr)
        for v in exc.violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_ERROR
    except FuzzyQpError as exc:
        print(f"error: solver failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR

    if args.curves:
        try:
            emit_curves(report.system, args.curves, direction=args.slice)
        except (OSError, ValueError) as exc:
            print(f"error: curves: {exc}", file=sys.stderr)
            return EXIT_ERROR

    print(summary_table(report))
    return EXIT_OK if report.certified else EXIT_UNCERTIFIED


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "solve":
        return cmd_solve(args)
    return EXIT_ERROR  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
