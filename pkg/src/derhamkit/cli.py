"""Command line entry point: list suites and run verifications.

Usage:
    derhamkit list
    derhamkit verify <suite> [--p P] [--n N] [--m M] [--k K] [--r-max R]
                     [--cases C] [--power POW] [--max-degree D]
                     [--max-rank RK] [--weight-bound W] [--seed S]
                     [--json PATH] [--allow-truncated]

Exit codes: 0 all cases pass (truncated evidence counts as failure unless
--allow-truncated), 1 failures, 2 usage errors.
"""

from __future__ import annotations

import argparse
import sys

from .suites import SUITES, list_suites, run_suite

_FLAG_TO_PARAM = {
    "p": "p",
    "n": "n",
    "m": "m",
    "k": "k",
    "r_max": "r_max",
    "cases": "cases",
    "power": "power",
    "max_degree": "max_degree",
    "max_rank": "max_rank",
    "weight_bound": "weight_bound",
    "f": "f",
    "rank": "rank",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="derhamkit", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command")

    sub.add_parser("list", help="list the registered verification suites")

    verify = sub.add_parser("verify", help="run one suite and report")
    verify.add_argument("suite")
    verify.add_argument("--p", type=int)
    verify.add_argument("--n", type=int)
    verify.add_argument("--m", type=int)
    verify.add_argument("--k", type=int)
    verify.add_argument("--r-max", dest="r_max", type=int)
    verify.add_argument("--cases", type=int)
    verify.add_argument("--power", type=int)
    verify.add_argument("--max-degree", dest="max_degree", type=int)
    verify.add_argument("--max-rank", dest="max_rank", type=int)
    verify.add_argument("--weight-bound", dest="weight_bound", type=int)
    verify.add_argument("--f", type=str)
    verify.add_argument("--rank", type=int)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--json", dest="json_path")
    verify.add_argument("--allow-truncated", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "list":
        for desc in list_suites():
            print(f"{desc.name:24} {desc.anchor}")
            if desc.params:
                schema = ", ".join(f"{k}: {t.__name__} = {d}" for (k, t, d) in desc.params)
                print(f"{'':24}   parameters: {schema}")
        return 0
    if args.command != "verify":
        parser.print_usage(sys.stderr)
        return 2
    if args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}; see `derhamkit list`", file=sys.stderr)
        return 2
    known = {k for (k, _, _) in SUITES[args.suite].params}
    params = {}
    for flag, pname in _FLAG_TO_PARAM.items():
        value = getattr(args, flag, None)
        if value is not None:
            if pname not in known:
                print(f"suite {args.suite!r} does not accept --{flag.replace('_', '-')}",
                      file=sys.stderr)
                return 2
            params[pname] = value
    try:
        report = run_suite(args.suite, params, seed=args.seed)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(report.to_text())
    if args.json_path:
        with open(args.json_path, "w") as handle:
            handle.write(report.to_json())
            handle.write("\n")
    return report.exit_code(allow_truncated=args.allow_truncated)


if __name__ == "__main__":
    raise SystemExit(main())
