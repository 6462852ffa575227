"""Command line entry point: run sweeps, gap experiments and selftests."""

import argparse
import sys
from dataclasses import replace

from .harness import parse_spec_file, preset, run_experiment


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="override RNG seed")
    p.add_argument("--trials", type=int, default=None, help="override trial count")
    p.add_argument("--out", default=None, help="override output CSV path")
    p.add_argument("--threads", type=int, default=1, help="worker threads over trials")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="squintsel",
        description="Wideband beamspace beam-selection experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a sweep from a preset or a spec file")
    src = run_p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=("fig3", "fig4", "fig5"))
    src.add_argument("--spec", help="flat key = value experiment file")
    _add_common(run_p)

    gap_p = sub.add_parser("gap", help="run the sum-rate gap sweep (fig5 preset)")
    _add_common(gap_p)

    sub.add_parser("selftest", help="fast structural sanity checks")
    return parser


def _resolve_spec(args):
    if getattr(args, "preset", None):
        spec = preset(args.preset)
    elif getattr(args, "spec", None):
        spec = parse_spec_file(args.spec)
    else:
        spec = preset("fig5")  # the gap subcommand
    if args.seed is not None:
        spec = replace(spec, cfg=replace(spec.cfg, seed=args.seed))
    if args.trials is not None:
        spec = replace(spec, trials=args.trials)
    if args.out is not None:
        spec = replace(spec, out_path=args.out)
    return spec


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "selftest":
        from .selftest import run_selftest
        return 0 if run_selftest() else 1
    spec = _resolve_spec(args)
    result = run_experiment(spec, threads=max(1, args.threads))
    if spec.out_path:
        print(f"wrote {len(result.rows)} rows to {spec.out_path}")
    else:
        sys.stdout.write(result.to_csv_text())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
