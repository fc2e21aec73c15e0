"""Command-line front end.

Exit status: 0 success, 1 usage or parse error, 2 model-validation failure,
3 numerical failure, 4 out-of-domain request.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import exactdist, ratefn, sampler, spectral
from .errors import NotPrimitiveError, RatLDPError
from .model import LinearRepresentation, load_model, validate

COMMANDS = ("validate", "analyze", "rate-curve", "distribution", "verify-ldp", "sample")


@dataclass
class RunConfig:
    command: str
    model_path: Path
    grid: tuple[float, float, int] | None = None
    n: tuple[int, ...] = ()
    t: tuple[float, ...] = ()
    x: float | None = None
    seed: int = 0
    num_samples: int = 1000
    json: bool = False
    out: Path | None = None
    words: Path | None = None


class UsageError(RatLDPError):
    exit_code = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _grid(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, pts = text.split(":")
        grid = float(lo), float(hi), int(pts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX:POINTS, got {text!r}") from None
    if not grid[0] < grid[1] or grid[2] < 2:
        raise argparse.ArgumentTypeError("grid needs MIN < MAX and POINTS >= 2")
    return grid


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N[,N...], got {text!r}") from None


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected T[,T...], got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ratldp", description="Symbol statistics and large deviations of rational stochastic models")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--model", required=True, type=Path, help="model file (JSON)")
    p.add_argument("--grid", type=_grid, help="rate-curve grid MIN:MAX:POINTS")
    p.add_argument("--n", type=_int_list, default=(), help="word length(s), comma separated")
    p.add_argument("--x", type=float, help="threshold for verify-ldp")
    p.add_argument("--t", type=_float_list, default=(), help="tilt values for analyze")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    p.add_argument("--out", type=Path, help="output file (default: stdout)")
    p.add_argument("--words", type=Path, help="sample: also write the sampled words here")
    return p


_VALUE_FLAGS = ("--grid", "--n", "--x", "--t", "--seed")


def _join_values(argv):
    """Fold ``--t -1,0`` into ``--t=-1,0`` so negative values are not taken for options."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def parse_config(argv=None) -> RunConfig:
    argv = sys.argv[1:] if argv is None else list(argv)
    a = build_parser().parse_args(_join_values(argv))
    return RunConfig(
        command=a.command,
        model_path=a.model,
        grid=a.grid,
        n=a.n,
        t=a.t,
        x=a.x,
        seed=a.seed,
        num_samples=a.samples,
        json=a.json,
        out=a.out,
        words=a.words,
    )


# --------------------------------------------------------------------------- output

def _fmt(value) -> str:
    if value is None:
        return "NA"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _jsonable(value):
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    return value


def render(columns: list[str], rows: list[list], as_json: bool) -> str:
    if as_json:
        records = [{c: _jsonable(v) for c, v in zip(columns, row)} for row in rows]
        return json.dumps(records, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        cells = [_fmt(v) for v in row]
        buf.write(",".join(f'"{c}"' if "," in c or '"' in c else c for c in cells) + "\n")
    return buf.getvalue()


# --------------------------------------------------------------------------- commands

def _valid_model(cfg: RunConfig) -> LinearRepresentation:
    rep = load_model(cfg.model_path)
    report = validate(rep)
    if not report.ok:
        raise NotPrimitiveError("; ".join(report.messages))
    return rep


def cmd_validate(cfg: RunConfig):
    report = validate(load_model(cfg.model_path))
    rows = [
        ["primitive", report.primitive],
        ["support_ok", report.support_ok],
        ["lambda_a_positive", report.lambda_a_positive],
        ["lambda_b_positive", report.lambda_b_positive],
    ]
    rows += [["message", m] for m in report.messages]
    return ["field", "value"], rows, (0 if report.ok else 2)


def cmd_analyze(cfg: RunConfig):
    rep = _valid_model(cfg)
    if cfg.t:
        rows = []
        for t in cfg.t:
            cp = spectral.curve_point(rep, t)
            rows.append([t, cp.y, cp.y_prime, cp.beta, cp.gamma, spectral.quasi_power_factor(rep, t)])
        return ["t", "y", "y_prime", "beta", "gamma", "r"], rows, 0
    pd = spectral.perron(rep.total_matrix)
    cp = spectral.curve_point(rep, 0.0)
    dom = ratefn.domain(rep)
    rows = [["lambda", pd.lam]]
    rows += [[f"u[{i}]", x] for i, x in enumerate(pd.u)]
    rows += [[f"v[{i}]", x] for i, x in enumerate(pd.v)]
    rows += [
        ["beta", cp.beta],
        ["gamma", cp.gamma],
        ["lambda_a", dom.lambda_a],
        ["lambda_b", dom.lambda_b],
        ["U", dom.u_limit],
        ["V", dom.v_limit],
        ["open01", dom.open01],
        ["U_estimated", dom.left_estimated],
        ["V_estimated", dom.right_estimated],
        ["endpoint_left", dom.endpoint_left],
        ["endpoint_right", dom.endpoint_right],
    ]
    return ["field", "value"], rows, 0


def cmd_rate_curve(cfg: RunConfig):
    rep = _valid_model(cfg)
    if cfg.grid is not None:
        lo, hi, pts = cfg.grid
        grid = np.linspace(lo, hi, pts)
    else:
        dom = ratefn.domain(rep)
        grid = ratefn.uniform_grid(dom.u_limit, dom.v_limit, 99)
    rows = []
    for pt in ratefn.rate_curve(rep, grid):
        if isinstance(pt, ratefn.OutOfDomain):
            rows.append([pt.x, None, None, None, pt.reason])
        else:
            rows.append([pt.x, pt.tau, pt.rate, pt.derivative, ""])
    return ["x", "tau", "I", "Iprime", "reason"], rows, 0


def _single_n(cfg: RunConfig) -> int:
    if len(cfg.n) != 1:
        raise UsageError(f"{cfg.command} needs exactly one --n")
    return cfg.n[0]


def cmd_distribution(cfg: RunConfig):
    rep = load_model(cfg.model_path)
    dist = exactdist.exact_distribution(rep, _single_n(cfg))
    rows = [[k, lw, p] for k, (lw, p) in enumerate(zip(dist.log_weights, dist.probabilities))]
    return ["k", "log_weight", "probability"], rows, 0


def cmd_verify_ldp(cfg: RunConfig):
    rep = _valid_model(cfg)
    if cfg.x is None or not cfg.n:
        raise UsageError("verify-ldp needs --x and --n")
    if list(cfg.n) != sorted(cfg.n):
        raise UsageError("--n must be ascending for verify-ldp")
    target = ratefn.rate(rep, cfg.x).rate
    b0 = spectral.beta(rep, 0.0)
    rows = []
    for n in cfg.n:
        emp = exactdist.empirical_rate(rep, n, cfg.x, beta0=b0)
        rows.append([n, emp, target, abs(emp - target)])
    return ["n", "empirical_rate", "I", "abs_error"], rows, 0


def cmd_sample(cfg: RunConfig):
    rep = load_model(cfg.model_path)
    n = _single_n(cfg)
    counts = np.zeros(n + 1, dtype=np.int64)
    dump = cfg.words.open("w", newline="\n") if cfg.words else None
    try:
        for words in sampler.iter_sample_batches(rep, n, cfg.num_samples, cfg.seed):
            counts += np.bincount(words.sum(axis=1), minlength=n + 1)
            if dump:
                for w in words:
                    dump.write("".join("a" if c else "b" for c in w) + "\n")
    finally:
        if dump:
            dump.close()
    return ["k", "count"], [[k, c] for k, c in enumerate(counts)], 0


HANDLERS = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "rate-curve": cmd_rate_curve,
    "distribution": cmd_distribution,
    "verify-ldp": cmd_verify_ldp,
    "sample": cmd_sample,
}


def run(cfg: RunConfig) -> int:
    try:
        columns, rows, status = HANDLERS[cfg.command](cfg)
    except OSError as exc:
        print(f"ratldp: {exc}", file=sys.stderr)
        return 1
    except RatLDPError as exc:
        print(f"ratldp: {exc}", file=sys.stderr)
        return exc.exit_code
    text = render(columns, rows, cfg.json)
    if cfg.out is not None:
        cfg.out.write_text(text, newline="\n")
    else:
        sys.stdout.write(text)
    return status


def main(argv=None) -> int:
    return run(parse_config(argv))


if __name__ == "__main__":
    sys.exit(main())
