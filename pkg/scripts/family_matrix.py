"""Pairwise verdicts over q_n = 1 - exp(-n^alpha), with the necessary statistic at several horizons."""

import argparse

from cantormoduli.equivalence import family_omega, matrix_csv, necessary_stat, pairwise_matrix
from cantormoduli.numeric import as_rational, fmt_number


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--alphas", default="1.1,1.5,2,3,5")
    p.add_argument("--horizon", type=int, default=10_000)
    p.add_argument("--growth", action="store_true", help="print necessary statistic vs N instead of the matrix")
    args = p.parse_args()
    alphas = [as_rational(a) for a in args.alphas.split(",")]

    if not args.growth:
        print(matrix_csv(alphas, pairwise_matrix(alphas, args.horizon)), end="")
        return
    horizons = [n for n in (10, 100, 1000, 10_000, 100_000) if n <= args.horizon]
    print("alpha,alpha_prime," + ",".join(f"N={n}" for n in horizons))
    for i, a in enumerate(alphas):
        for b in alphas[i + 1:]:
            vals = [necessary_stat(family_omega(a), family_omega(b), n).finite_max for n in horizons]
            print(f"{fmt_number(a)},{fmt_number(b)}," + ",".join(fmt_number(v) for v in vals))


if __name__ == "__main__":
    main()
