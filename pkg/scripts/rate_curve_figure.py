"""Rate curve of a model on a grid through beta, with the binomial curve of the same mean.

Writes CSV (x, I, binomial); with --plot also renders a PNG if matplotlib is installed.

    python3 scripts/rate_curve_figure.py --model models/golden.json --plot golden.png
"""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path

from ratldp import load_model
from ratldp.ratefn import OutOfDomain, binomial_rate, centered_grid, rate_curve
from ratldp.spectral import beta


@dataclass
class Config:
    model: Path
    points: int = 99
    eps: float = 1e-3
    plot: Path | None = None


def compute(cfg: Config):
    rep = load_model(cfg.model)
    b0 = beta(rep, 0.0)
    rows = []
    for pt in rate_curve(rep, centered_grid(rep, cfg.points, cfg.eps)):
        if isinstance(pt, OutOfDomain):
            continue
        rows.append((pt.x, pt.rate, binomial_rate(b0, pt.x)))
    return b0, rows


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--points", type=int, default=99)
    p.add_argument("--plot", type=Path)
    a = p.parse_args(argv)
    cfg = Config(a.model, points=a.points, plot=a.plot)
    b0, rows = compute(cfg)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["x", "I", "binomial"])
    writer.writerows([[f"{v:.17g}" for v in row] for row in rows])
    if cfg.plot is not None:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        xs, rs, bs = zip(*rows)
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot(xs, rs, label="I(x)")
        ax.plot(xs, bs, "--", label=f"B(x), p = {b0:.4f}")
        ax.axvline(b0, color="grey", lw=0.5)
        ax.set_xlabel("x")
        ax.legend()
        fig.tight_layout()
        fig.savefig(cfg.plot, dpi=150)


if __name__ == "__main__":
    main()
