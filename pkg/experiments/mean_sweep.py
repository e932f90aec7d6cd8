from __future__ import annotations

import argparse
import csv
import os

from ouroboros.checker import check_mean_sweep
from ouroboros.config import load_settings
from ouroboros.slln import defect_bound


def main() -> None:
    p = argparse.ArgumentParser(description="mean_n membership over R^n for doubling n; writes mean_sweep.csv")
    p.add_argument("--config", type=str, default="configs/default.yaml")
    p.add_argument("--max-n", dest="max_n", type=int, default=1024)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--out", type=str, default="runs")
    args = p.parse_args()

    settings = load_settings(args.config)
    cfg = settings.check.with_overrides(sample_count=args.samples)
    arities = []
    n = 1
    while n <= args.max_n:
        arities.append(n)
        n *= 2

    os.makedirs(args.out, exist_ok=True)
    results_csv = os.path.join(args.out, "mean_sweep.csv")
    with open(results_csv, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["n", "status", "points_checked", "max_defect", "defect_bound"])
        for n, verdict in check_mean_sweep(arities, cfg):
            writer.writerow([n, verdict.status.value, verdict.points_checked, repr(verdict.max_defect), repr(defect_bound(n, cfg.window))])
    print(f"wrote {results_csv} (seed {cfg.seed})")


if __name__ == "__main__":
    main()
