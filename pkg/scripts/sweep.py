"""Logical error rate sweep over triangular codes under depolarizing noise.

    python3 scripts/sweep.py --d 3 5 --p 0.001 0.01 0.05 --trials 100000 --seed 1
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field

from tricolor.code import make_code
from tricolor.decode import NoiseModel, build_decoder, run_monte_carlo
from tricolor.lattice import build_triangle_488, build_triangle_666

BUILDERS = {"tri-666": build_triangle_666, "tri-488": build_triangle_488}


@dataclass
class SweepConfig:
    families: list[str] = field(default_factory=lambda: ["tri-666", "tri-488"])
    distances: list[int] = field(default_factory=lambda: [3, 5])
    rates: list[float] = field(default_factory=lambda: [0.001, 0.01, 0.05])
    trials: int = 100_000
    seed: int = 1
    threads: int = 1


def run(cfg: SweepConfig, out=sys.stdout) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["family", "d", "n", "p", "trials", "logical_errors", "rate", "seconds"])
    for fam in cfg.families:
        for d in cfg.distances:
            code = make_code(BUILDERS[fam](d), fam)
            decoder = build_decoder(code)
            for p in cfg.rates:
                start = time.perf_counter()
                res = run_monte_carlo(code, NoiseModel.depolarizing(p), cfg.trials, cfg.seed, decoder, cfg.threads)
                w.writerow([fam, d, code.n, p, res.trials, res.logical_errors, f"{res.rate:.6g}", f"{time.perf_counter() - start:.2f}"])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", nargs="+", default=SweepConfig().families, choices=sorted(BUILDERS))
    ap.add_argument("--d", nargs="+", type=int, default=SweepConfig().distances)
    ap.add_argument("--p", nargs="+", type=float, default=SweepConfig().rates)
    ap.add_argument("--trials", type=int, default=SweepConfig.trials)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    ap.add_argument("--threads", type=int, default=SweepConfig.threads)
    ns = ap.parse_args()
    run(SweepConfig(ns.family, ns.d, ns.p, ns.trials, ns.seed, ns.threads))


if __name__ == "__main__":
    main()
