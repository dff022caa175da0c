"""Run the standard sweeps and write plot-ready CSVs to ``results/``.

    python3 scripts/run_sweeps.py [--jobs 1] [--quick]

Each sweep is one ``checkerdisc sweep`` invocation; see the README for the columns.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from checkerdisc.cli import ExperimentConfig, format_rows, run_sweep

SWEEPS = {
    "segment_random": dict(family="random", Ns=[8, 16, 32, 64], seeds=[0, 1, 2, 3, 4], mode="seg-sup"),
    "circle_parity": dict(family="parity", Ns=[16, 32, 64], mode="circ-sup"),
    "circle_random": dict(family="random", Ns=[16, 32, 64], seeds=[0], mode="circ-sup"),
    "striped_l1": dict(family="striped", Ns=[16, 32, 64, 128, 256], mode="lp", p=1.0),
    "striped_sup": dict(family="striped", Ns=[8, 16, 32, 64, 128, 256], mode="line-sup"),
}
QUICK = {"Ns": [8, 16]}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--quick", action="store_true", help="small boards only")
    ap.add_argument("--out", default="results")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(exist_ok=True)
    for name, kw in SWEEPS.items():
        kw = {**kw, **(QUICK if args.quick else {}), "jobs": args.jobs}
        rows = run_sweep(ExperimentConfig(**kw))
        (out / f"{name}.csv").write_text(format_rows(rows, "csv"))
        print(f"{name}: {len(rows)} rows -> {out / name}.csv", flush=True)


if __name__ == "__main__":
    main()
