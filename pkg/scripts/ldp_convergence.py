"""Empirical rate -(1/n) log Pr(tail) against I(x) for growing n.

    python3 scripts/ldp_convergence.py --model models/golden.json --offset 0.2
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from ratldp import load_model
from ratldp.exactdist import empirical_rate
from ratldp.ratefn import rate
from ratldp.spectral import beta


@dataclass
class Config:
    model: Path
    offsets: tuple[float, ...] = (-0.2, 0.2)
    ns: tuple[int, ...] = field(default=(125, 250, 500, 1000, 2000, 4000))


def run(cfg: Config, out) -> None:
    rep = load_model(cfg.model)
    b0 = beta(rep, 0.0)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["x", "n", "empirical_rate", "I", "abs_error", "n_times_error", "seconds"])
    for off in cfg.offsets:
        x = b0 + off
        target = rate(rep, x).rate
        for n in cfg.ns:
            start = time.perf_counter()
            emp = empirical_rate(rep, n, x, beta0=b0)
            err = abs(emp - target)
            writer.writerow([f"{x:.17g}", n, f"{emp:.17g}", f"{target:.17g}", f"{err:.6e}", f"{n * err:.6f}", f"{time.perf_counter() - start:.3f}"])


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--offset", type=float, action="append", help="x - beta; repeatable")
    p.add_argument("--n", type=int, action="append", help="word length; repeatable")
    a = p.parse_args(argv)
    cfg = Config(a.model)
    if a.offset:
        cfg.offsets = tuple(a.offset)
    if a.n:
        cfg.ns = tuple(sorted(a.n))
    run(cfg, sys.stdout)


if __name__ == "__main__":
    main()
