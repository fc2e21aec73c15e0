"""Exact law of Y_n (number of a's in a random word of length n) and derived quantities."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError
from .model import LinearRepresentation, log_bilinear_power, tilt, total_weight, weight_of_word
from .spectral import beta

MAX_N = 10_000
MAX_N_MGF = 1_000_000
MAX_N_BRUTE = 16


@dataclass(frozen=True, eq=False)
class SymbolCountDistribution:
    """``log_weights[k]`` is log [x^k] xi'(Ax+B)^n eta (``-inf`` for a zero coefficient)."""

    n: int
    log_weights: np.ndarray
    log_total: float

    @property
    def log_probabilities(self) -> np.ndarray:
        return self.log_weights - self.log_total

    @property
    def probabilities(self) -> np.ndarray:
        return np.exp(self.log_probabilities)


@dataclass(frozen=True)
class MomentSummary:
    n: int
    mean: float
    variance: float
    mean_drift: float | None = None
    variance_per_n: float | None = None


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def exact_distribution(rep: LinearRepresentation, n: int, max_n: int = MAX_N) -> SymbolCountDistribution:
    """Coefficients of xi'(Ax+B)^n eta by dynamic programming over the a-count.

    Row k of the state holds the row vector of weights of prefixes with k
    a's. Each row keeps its own log-scale, so coefficients far in the tails
    (relative size e^{-cn}) do not underflow against the bulk.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > max_n:
        raise DomainError(f"n = {n} exceeds the cost guard {max_n}")
    A, B = rep.matrix_a, rep.matrix_b
    m = rep.dimension
    rows = np.zeros((n + 1, m))
    scales = np.full(n + 1, -np.inf)
    top = rep.xi.max()
    rows[0] = rep.xi / top
    scales[0] = math.log(top)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        for j in range(n):
            live = rows[: j + 1]
            from_b = live @ B
            from_a = live @ A
            s_prev = scales[: j + 1].copy()
            # row k <- (row k) B + (row k-1) A, combined on the larger of the two scales
            rows[j + 1] = from_a[j]
            scales[j + 1] = s_prev[j]
            if j:
                s_b, s_a = s_prev[1:], s_prev[:-1]
                c = np.maximum(s_b, s_a)
                ok = np.isfinite(c)
                w_b = np.where(ok, np.exp(s_b - c), 0.0)
                w_a = np.where(ok, np.exp(s_a - c), 0.0)
                rows[1 : j + 1] = from_b[1:] * w_b[:, None] + from_a[:-1] * w_a[:, None]
                scales[1 : j + 1] = c
            rows[0] = from_b[0]
            seg = rows[: j + 2]
            peak = seg.max(axis=1)
            alive = peak > 0
            seg /= np.where(alive, peak, 1.0)[:, None]
            scales[: j + 2] = np.where(alive, scales[: j + 2] + np.log(np.where(alive, peak, 1.0)), -np.inf)
        tail = rows @ rep.eta
        log_weights = np.where(tail > 0, scales + np.log(np.where(tail > 0, tail, 1.0)), -np.inf)
    return SymbolCountDistribution(n, _freeze(log_weights), total_weight(rep, n))


def brute_force_distribution(rep: LinearRepresentation, n: int) -> SymbolCountDistribution:
    """Sum :func:`weight_of_word` over all 2^n words, grouped by a-count."""
    if not 0 <= n <= MAX_N_BRUTE:
        raise DomainError(f"brute force limited to 0 <= n <= {MAX_N_BRUTE}")
    sums = [[] for _ in range(n + 1)]
    for letters in itertools.product("ab", repeat=n):
        word = "".join(letters)
        sums[word.count("a")].append(weight_of_word(rep, word))
    totals = np.array([math.fsum(s) for s in sums])
    with np.errstate(divide="ignore"):
        log_weights = np.log(totals)
    return SymbolCountDistribution(n, _freeze(log_weights), math.log(math.fsum(totals)))


def moments(dist: SymbolCountDistribution, beta0: float | None = None) -> MomentSummary:
    """Mean and variance (two-pass, compensated sums).

    ``mean_drift`` needs beta(0); ``variance_per_n`` is Var/n.
    """
    p = dist.probabilities
    k = np.arange(dist.n + 1, dtype=float)
    mean = math.fsum(k * p)
    var = max(math.fsum((k - mean) ** 2 * p), 0.0)
    drift = mean - beta0 * dist.n if beta0 is not None else None
    per_n = var / dist.n if dist.n > 0 else None
    return MomentSummary(dist.n, mean, var, drift, per_n)


def _tail_bounds(x: float, n: int) -> tuple[int, int]:
    xn = x * n
    nearest = round(xn)
    if abs(xn - nearest) <= 1e-9 * max(1.0, n):
        return nearest, nearest
    return math.ceil(xn), math.floor(xn)


def tail(dist: SymbolCountDistribution, x: float, side: str) -> float:
    """log Pr(Y_n >= xn) for ``side='right'``, log Pr(Y_n <= xn) for ``side='left'``."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x = {x!r} outside [0, 1]")
    lo, hi = _tail_bounds(x, dist.n)
    lp = dist.log_probabilities
    if side == "right":
        sel = lp[lo:]
    elif side == "left":
        sel = lp[: hi + 1]
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if sel.size == 0 or not np.any(np.isfinite(sel)):
        return -math.inf
    return float(min(logsumexp(sel), 0.0))


def empirical_rate(rep: LinearRepresentation, n: int, x: float, beta0: float | None = None) -> float:
    """-(1/n) log of the tail on the side of x relative to beta(0)."""
    if not 0.0 < x < 1.0:
        raise DomainError(f"x = {x!r} outside (0, 1)")
    if n <= 0:
        raise ValueError("n must be positive")
    if beta0 is None:
        beta0 = beta(rep, 0.0)
    side = "right" if x >= beta0 else "left"
    return -tail(exact_distribution(rep, n), x, side) / n


def moment_generating(rep: LinearRepresentation, n: int, t: float) -> float:
    """log Psi_n(t) = log xi'(Ae^t+B)^n eta - log xi'(A+B)^n eta."""
    if n > MAX_N_MGF:
        raise DomainError(f"n = {n} exceeds {MAX_N_MGF}")
    if t == 0:
        return 0.0
    tilted = tilt(rep, t)
    return log_bilinear_power(rep.xi, tilted.total_matrix, rep.eta, n) - total_weight(rep, n)
