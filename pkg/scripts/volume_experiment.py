"""Fraction of sorted uniform samples whose necessary statistic stays below T, per horizon.

    python scripts/volume_experiment.py --samples 10000 --trunc 400 --threshold 5
"""

import argparse
import json

from cantormoduli.ergodic import sample_batch, volume_experiment
from cantormoduli.numeric import as_rational
from cantormoduli.sequences import parse_literal


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--ref", default="power_exp:1:2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--trunc", type=int, default=200)
    p.add_argument("--thresholds", default="2,5,10", help="comma-separated")
    p.add_argument("--step", type=int, default=10)
    args = p.parse_args()

    batch = sample_batch(args.seed, args.trunc, args.samples)
    checkpoints = sorted({1, *range(args.step, args.trunc + 1, args.step), args.trunc})
    ref = parse_literal(args.ref)
    runs = [volume_experiment(ref, batch, as_rational(T), checkpoints=checkpoints) for T in args.thresholds.split(",")]
    print("N," + ",".join(f"T={r.threshold:g}" for r in runs))
    for i, n in enumerate(checkpoints):
        print(f"{n}," + ",".join(repr(r.fractions[i]) for r in runs))
    print("# " + json.dumps({"seed": args.seed, "samples": args.samples, "ref": args.ref, "note": runs[0].note}))


if __name__ == "__main__":
    main()
