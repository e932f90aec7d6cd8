from __future__ import annotations

import argparse
import csv
import os

from ouroboros.slln import DistributionSpec, average_of_averages, seed_batch


def main() -> None:
    p = argparse.ArgumentParser(description="Final running-mean error over many seeds; writes slln_batch.csv")
    p.add_argument("--dist", type=str, default="exponential(2)")
    p.add_argument("--n-max", dest="n_max", type=int, default=1_000_000)
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--bound", type=float, default=0.005)
    p.add_argument("--out", type=str, default="runs")
    args = p.parse_args()

    d = DistributionSpec.parse(args.dist)
    summary = seed_batch(d, args.n_max, range(args.seeds), args.bound)

    os.makedirs(args.out, exist_ok=True)
    results_csv = os.path.join(args.out, "slln_batch.csv")
    with open(results_csv, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["seed", "abs_error", "within_bound"])
        for seed, err in enumerate(summary.errors):
            writer.writerow([seed, repr(err), int(err <= args.bound)])

    nested = average_of_averages(d, batches=100, batch_size=args.n_max // 100 or 1)
    print(f"{summary.distribution}: {summary.passed}/{summary.total} seeds within {args.bound} at n={args.n_max}")
    print(f"pooled mean {nested.pooled_mean!r}, mean of batch means {nested.mean_of_means!r}")
    print(f"accepted: {summary.accepted()}; wrote {results_csv}")


if __name__ == "__main__":
    main()
