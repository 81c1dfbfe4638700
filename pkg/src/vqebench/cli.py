"""Command-line entry point.

Subcommands: validate, run, suite, plot, report. Exit codes: 0 success,
2 config validation error, 3 simulation error, 4 assertion failure under
--assert. VQEBENCH_OUT sets the default output root (falls back to ./out).
"""

import argparse
import json
import os
import sys

from .bench.config import ConfigError, load_config
from .bench.runner import emit_plot_data, run, run_suite
from .bench.suites import SUITES, manifest_dict

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SIMULATION = 3
EXIT_ASSERTION = 4


def _default_out():
    return os.environ.get("VQEBENCH_OUT", "out")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="vqebench",
        description="Spin-chain VQE benchmarks for small-angle Gaussian "
                    "initialization vs uniform hardware-efficient baselines.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="schema-check a config file")
    p.add_argument("--config", required=True, help="path to a JSON config")

    p = sub.add_parser("run", help="run one experiment config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--seeds", type=int, default=None,
                   help="override the config's seed count")
    p.add_argument("--workers", type=int, default=1,
                   help="worker processes (suite-level parallelism)")
    p.add_argument("--assert", dest="assert_mode", action="store_true",
                   help="exit 4 when experiment sanity checks fail")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("suite", help="run a built-in experiment collection")
    p.add_argument("--name", choices=SUITES, required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--assert", dest="assert_mode", action="store_true")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("plot", help="emit tidy CSV + SVG for a result dir")
    p.add_argument("--record", required=True,
                   help="experiment output dir containing result.json")
    p.add_argument("--out", default=None)

    p = sub.add_parser("report", help="print the benchmark manifest")
    p.add_argument("--json", action="store_true", dest="as_json")
    return parser


# experiment-kind sanity assertions used by --assert
_ASSERTS = {
    "noise": lambda m: all(abs(v) <= 4.0 for k, v in m.items()
                           if k.endswith("_traj_z")),
    "shots": lambda m: all(v <= 0.5 for k, v in m.items()
                           if k.endswith("_inv_shots_deviation")),
    "theory": lambda m: m.get("bound_violations", 1) == 0
    and m.get("hamming_strictly_decreasing", False),
}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            load_config(args.config)
            print("config ok")
            return EXIT_OK
        if args.command == "run":
            try:
                cfg = load_config(args.config)
            except ConfigError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_CONFIG
            out = args.out or _default_out()
            record = run(cfg, out, fmt=args.format, seeds_override=args.seeds)
            print(f"wrote {record.experiment}/ under {out} "
                  f"(config {record.config_hash[:12]})")
            check = _ASSERTS.get(record.kind)
            if args.assert_mode and check is not None and not check(record.metrics):
                print("assertion failed:",
                      json.dumps(record.metrics, default=str), file=sys.stderr)
                return EXIT_ASSERTION
            return EXIT_OK
        if args.command == "suite":
            out = args.out or _default_out()
            records = run_suite(args.name, out, workers=args.workers,
                                fmt=args.format)
            print(f"suite {args.name}: {len(records)} experiments under {out}")
            if args.assert_mode:
                for record in records:
                    check = _ASSERTS.get(record.kind)
                    if check is not None and not check(record.metrics):
                        print(f"assertion failed in {record.experiment}",
                              file=sys.stderr)
                        return EXIT_ASSERTION
            return EXIT_OK
        if args.command == "plot":
            written = emit_plot_data(args.record, args.out)
            for path in written:
                print(path)
            return EXIT_OK
        if args.command == "report":
            doc = manifest_dict()
            if args.as_json:
                print(json.dumps(doc, indent=2))
            else:
                print(f"benchmark manifest v{doc['version']}")
                for entry in doc["benchmarks"]:
                    print(f"  {entry['id']:2d}. [{entry['kind']}] "
                          f"{entry['title']}")
            return EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return EXIT_SIMULATION
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
