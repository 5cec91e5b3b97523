"""Command-line interface: ``qcorr sweep | report | selftest``."""

import argparse
import json
import os
import sys

from .errors import InvalidStateError, QCorrError

SEED_ENV = "QCORR_SEED"


def _seed(args) -> int:
    env = os.environ.get(SEED_ENV)
    if env not in (None, ""):
        try:
            return int(env)
        except ValueError:
            raise QCorrError(f"{SEED_ENV} must be an integer, got {env!r}")
    return args.seed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcorr",
        description="Classical, entangled and total correlations of two-qubit states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="sweep a state family over p and write CSV")
    sw.add_argument("--family", default="bell-mixture",
                    help="bell-mixture, werner, nonorthogonal or custom")
    sw.add_argument("--p-min", type=float, default=0.5)
    sw.add_argument("--p-max", type=float, default=1.0)
    sw.add_argument("--steps", type=int, default=11)
    sw.add_argument("--measures", default="I,ERE,Cp",
                    help="comma-separated subset of I,ERE,Cp,C,CRE")
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--out", help="CSV output path (default: stdout)")
    sw.add_argument("--plot", help="figure path; format taken from the suffix (.svg, .png, .pdf)")
    sw.add_argument("--state", help="JSON state for --family custom")
    sw.add_argument("--workers", type=int, default=1, help="processes for grid points")

    rp = sub.add_parser("report", help="all measures for one state read from JSON")
    rp.add_argument("--state", required=True, help='JSON file {"dims":[2,2],"re":[[..]],"im":[[..]]}')
    rp.add_argument("--measures", default="I,ERE,Cp,C,CRE")
    rp.add_argument("--seed", type=int, default=0)
    rp.add_argument("--plot", help="optional bar-chart path")

    st = sub.add_parser("selftest", help="run the acceptance checks")
    st.add_argument("--seed", type=int, default=0)
    return parser


def cmd_sweep(args) -> int:
    from .sweep import SweepConfig, csv_text, run_sweep

    config = SweepConfig(
        family=args.family,
        p_min=args.p_min,
        p_max=args.p_max,
        steps=args.steps,
        measures=args.measures,
        seed=_seed(args),
        out_path=args.out,
        plot_path=args.plot,
        state_path=args.state,
        workers=args.workers,
    )
    reports = run_sweep(config)
    if not args.out:
        sys.stdout.write(csv_text(reports))
    return 0


def cmd_report(args) -> int:
    from .states import load_state_json
    from .sweep import COLUMNS, compute_report, format_number

    state = load_state_json(args.state)
    if state.dims != (2, 2):
        raise InvalidStateError(f"report needs dims [2, 2], got {list(state.dims)}", "shape")
    rep = compute_report(state, args.measures, _seed(args), family="custom", both_sides=True)
    for key, value in rep.values.items():
        flag = rep.converged.get(key)
        suffix = "" if flag is None else f" converged={'yes' if flag else 'no'}"
        print(f"{COLUMNS[key]}={format_number(value)}{suffix}")
    for key, value in rep.extras.items():
        print(f"{key}={format_number(value)}")
    print(json.dumps(rep.as_dict(), sort_keys=True))
    if args.plot:
        from .plotting import plot_report

        plot_report(rep, args.plot)
    return 0


def cmd_selftest(args) -> int:
    from .acceptance import run_acceptance

    results = run_acceptance(_seed(args), progress=lambda c: print(c.line(), flush=True))
    passed = sum(c.passed for c in results)
    print(f"{passed}/{len(results)} checks passed")
    return 0 if passed == len(results) else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"sweep": cmd_sweep, "report": cmd_report, "selftest": cmd_selftest}
    try:
        return handlers[args.command](args)
    except InvalidStateError as exc:
        print(f"qcorr: invalid state ({exc.invariant}): {exc}", file=sys.stderr)
        return 2
    except QCorrError as exc:
        print(f"qcorr: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
