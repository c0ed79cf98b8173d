"""Run both scaling suites and write CSVs with a per-sample column added.

    python3 scripts/run_benchmarks.py --out-dir results [--quick]

``--quick`` shrinks trace lengths and repetitions for a smoke run.
"""
import argparse
import csv
from pathlib import Path

from stlrob.bench import COLUMNS, BenchConfig, run_suite


def write(path: Path, rows):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(COLUMNS + ("per_sample_seconds",))
        for r in rows:
            w.writerow(list(r[:5]) + [f"{r[5]:.9g}", f"{r[5] / r[3]:.9g}"])


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--out-dir", default="results")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--suite", choices=("formula-scaling", "window-scaling", "all"), default="all")
    args = p.parse_args()

    cfg = BenchConfig()
    if args.quick:
        cfg.sizes = (10**3, 10**4)
        cfg.reps = 2
        cfg.windows = (10**2, 10**3, 10**4)
        cfg.window_samples = 10**5

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    suites = ("formula-scaling", "window-scaling") if args.suite == "all" else (args.suite,)
    for suite in suites:
        rows = run_suite(suite, cfg)
        write(out / f"{suite}.csv", rows)
        for r in rows:
            print(f"{r[0]:16s} {r[1]:10s} {r[2]:16s} n={r[3]:<8d} {r[5] / r[3] * 1e6:8.3f} us/sample")


if __name__ == "__main__":
    main()
