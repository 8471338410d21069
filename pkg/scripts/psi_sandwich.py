"""Psi(t) against its two-sided bounds, plus the depth-k modulus chain.

Writes psi.csv (t, lower, oracle, upper, margins) and chain.csv into --outdir.
"""

import argparse
import csv
from fractions import Fraction
from pathlib import Path

import mpmath

from cantormoduli.numeric import fmt_number
from cantormoduli.rings import log_grid, mod_teich_oracle, modulus_chain, psi_bounds


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--outdir", type=Path, default=Path("out"))
    p.add_argument("--points", type=int, default=1000)
    p.add_argument("--kmax", type=int, default=30)
    args = p.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    with mpmath.workprec(128), open(args.outdir / "psi.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "lower", "oracle", "upper", "lower_margin", "upper_margin"])
        for t in log_grid("1e-3", "1e6", args.points):
            b = psi_bounds(t)
            psi = mpmath.exp(mod_teich_oracle(t))
            w.writerow([fmt_number(x) for x in (t, b.lower, psi, b.upper, psi / b.lower, b.upper / psi)])

    qs = [Fraction(i, 10) for i in range(1, 10)] + [1 - Fraction(1, 10**e) for e in range(2, 7)]
    with open(args.outdir / "chain.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["q", "k", "oracle", "intermediate", "bound"])
        for q in qs:
            for k in range(1, args.kmax + 1):
                ch = modulus_chain(q, k)
                w.writerow([fmt_number(q), k, fmt_number(ch.oracle), fmt_number(ch.intermediate), fmt_number(ch.bound)])
    print(f"wrote {args.outdir / 'psi.csv'} and {args.outdir / 'chain.csv'}")


if __name__ == "__main__":
    main()
