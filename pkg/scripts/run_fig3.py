#!/usr/bin/env python3
"""Sum-rate vs SNR sweep for all four selection methods."""

import argparse

from squintsel import preset, run_experiment


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results/fig3.csv")
    ap.add_argument("--threads", type=int, default=2)
    args = ap.parse_args()

    spec = preset("fig3")
    spec.trials = args.trials
    spec.cfg.seed = args.seed
    spec.out_path = args.out
    result = run_experiment(spec, threads=args.threads)
    print(f"wrote {len(result.rows)} rows to {spec.out_path}")
    for method in spec.methods:
        curve = result.means(method, "sumrate_avg_bps_hz")
        print(f"{method:>13}: " + "  ".join(f"{x:g}dB={m:.2f}" for x, m in curve[::2]))


if __name__ == "__main__":
    main()
