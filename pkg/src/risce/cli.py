"""Command-line front end.

    risce run CONFIG [-o OUT] [--format csv|json] [--seed N] [--workers N]
    risce validate CONFIG
    risce overhead CONFIG
    risce schemes

Exit codes: 0 success, 1 configuration error, 2 runtime failure.
"""

import argparse
import sys

from .config import parse_config
from .errors import ConfigError
from .harness import SNR_CONVENTION, run_monte_carlo
from .metrics import SCHEMES, count_unknowns

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2

SCHEME_HELP = {
    "onoff": "ON/OFF protocol: one RIS element on per slot, N slots",
    "dft": "DFT protocol: all elements on, DFT-column reflections, N slots",
    "correlation": "typical user by DFT, others by N correlation scalars",
    "omp": "angular-domain OMP from T random-phase slots",
    "two_timescale": "dual-link coordinate descent for G, uplink LS for h_d, h_r",
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="risce", description="RIS channel-estimation Monte-Carlo benchmarks"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the Monte-Carlo experiment")
    run.add_argument("config")
    run.add_argument("-o", "--output", help="report path (default: stdout)")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--seed", type=int, help="override the config seed")
    run.add_argument("--workers", type=int, default=1, help="worker processes")

    val = sub.add_parser("validate", help="check a config without running it")
    val.add_argument("config")

    ovh = sub.add_parser("overhead", help="pilot-overhead table for a config")
    ovh.add_argument("config")

    sub.add_parser("schemes", help="list the available estimation schemes")
    return parser


def cmd_run(args, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    cfg = parse_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    try:
        report = run_monte_carlo(cfg, workers=args.workers)
    except Exception as exc:  # noqa: BLE001 - any failure here is a runtime failure
        print(f"error: run failed: {exc}", file=err)
        return EXIT_RUNTIME

    text = report.to_csv() if args.format == "csv" else report.to_json()
    summary = out if args.output else err
    try:
        if args.output:
            with open(args.output, "w", newline="") as fh:
                fh.write(text)
        else:
            out.write(text)
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=err)
        return EXIT_RUNTIME

    print(f"# {SNR_CONVENTION}", file=summary)
    for r in report.rows:
        print(
            f"{r.scheme:<14} snr={r.snr_db:>6g} dB  nmse={r.nmse_mean:.4e} "
            f"(+/- {r.nmse_stderr:.2e})  failures={r.failures}/{r.trials}  "
            f"slots={r.raw_slots} ({r.amortized_slots:g}/block)",
            file=summary,
        )
    return EXIT_OK


def cmd_validate(args, out=None):
    out = out or sys.stdout
    cfg = parse_config(args.config)
    print(
        f"ok: M={cfg.dims.M} N={cfg.dims.N} K={cfg.dims.K} model={cfg.model} "
        f"schemes={','.join(cfg.schemes)} trials={cfg.trials}",
        file=out,
    )
    return EXIT_OK


def cmd_overhead(args, out=None):
    out = out or sys.stdout
    cfg = parse_config(args.config)
    print(f"{'scheme':<14} {'unknowns':>10} {'raw_slots':>10} {'amortized':>10}", file=out)
    for scheme in cfg.schemes:
        raw, amortized = cfg.overhead(scheme)
        unknowns = count_unknowns(cfg.dims, scheme, cfg.grouping)
        print(f"{scheme:<14} {unknowns:>10d} {raw:>10d} {amortized:>10g}", file=out)
    return EXIT_OK


def cmd_schemes(args, out=None):
    out = out or sys.stdout
    for name in SCHEMES:
        print(f"{name:<14} {SCHEME_HELP[name]}", file=out)
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "validate": cmd_validate,
    "overhead": cmd_overhead,
    "schemes": cmd_schemes,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
