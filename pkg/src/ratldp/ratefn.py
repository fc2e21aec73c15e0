"""The rate function I(x) = x tau_x + log(lambda) - log(y(tau_x)), where beta(tau_x) = x."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .model import LinearRepresentation
from .spectral import SATURATION, beta, limits_UV, perron, spectral_radius, tilted_matrix

SOLVER_TOL = 1e-12
#: Margin keeping generated grids strictly inside the open domain.
GRID_EPS = 1e-6


@dataclass(frozen=True)
class RateDomain:
    u_limit: float
    v_limit: float
    open01: bool
    lambda_a: float
    lambda_b: float
    endpoint_left: float
    endpoint_right: float
    left_estimated: bool = False
    right_estimated: bool = False


@dataclass(frozen=True)
class RatePoint:
    x: float
    tau: float
    rate: float
    derivative: float


@dataclass(frozen=True)
class OutOfDomain:
    """Placeholder for a grid point the solver could not bracket."""

    x: float
    reason: str


def _bracket(rep, x, sign, saturation):
    t = float(sign)
    while True:
        b = beta(rep, t)
        if (b - x) * sign >= 0:
            return t, b
        if abs(t) >= saturation:
            side = "below U" if sign < 0 else "above V"
            raise DomainError(f"x = {x!r} is {side}: beta({t:g}) = {b!r}")
        t = sign * min(2 * abs(t), saturation)


def _slope(rep, t):
    h = 1e-5 * max(1.0, abs(t))
    return max((beta(rep, t + h) - beta(rep, t - h)) / (2 * h), 1e-300)


def solve_tau(
    rep: LinearRepresentation,
    x: float,
    tol: float = SOLVER_TOL,
    saturation: float = SATURATION,
    max_iter: int = 200,
) -> float:
    """The unique tau with beta(tau) = x.

    The bracket is grown by doubling from [-1, 1] up to |t| = ``saturation``;
    failing to bracket means x lies outside (U, V). Newton steps (slope of
    beta by central difference) are taken from tau = 0 and replaced by
    bisection whenever they leave the bracket. Stops once
    |beta(tau) - x| <= tol * min(1, x, 1 - x).
    """
    if not math.isfinite(x) or not 0.0 < x < 1.0:
        raise DomainError(f"x = {x!r} outside (0, 1)")
    # relative to the distance from 0 and 1, where beta is flat and tau sensitive
    tol = tol * min(1.0, x, 1.0 - x)
    t = 0.0
    f = beta(rep, t) - x
    if abs(f) <= tol:
        return t
    if f > 0:
        lo, b_lo = _bracket(rep, x, -1, saturation)
        hi = 0.0
        if b_lo == x:
            return lo
    else:
        hi, b_hi = _bracket(rep, x, +1, saturation)
        lo = 0.0
        if b_hi == x:
            return hi
    for _ in range(max_iter):
        if abs(f) <= tol:
            return t
        if f < 0:
            lo = t
        else:
            hi = t
        if hi - lo <= 4 * np.finfo(float).eps * max(1.0, abs(t)):
            return t
        step = f / _slope(rep, t)
        t_new = t - step
        if not lo < t_new < hi:
            t_new = 0.5 * (lo + hi)
        t = t_new
        f = beta(rep, t) - x
    raise ConvergenceError(f"tau solver did not converge for x = {x!r}")


def phi(rep: LinearRepresentation, x: float, t: float, lam: float | None = None) -> float:
    """log(y(t) / (lambda e^{x t})); minimized over t at tau_x."""
    if lam is None:
        lam = perron(rep.total_matrix).lam
    y = perron(tilted_matrix(rep, t)).lam
    return math.log(y) - math.log(lam) - x * t


def rate(rep: LinearRepresentation, x: float, tol: float = SOLVER_TOL, saturation: float = SATURATION) -> RatePoint:
    tau = solve_tau(rep, x, tol=tol, saturation=saturation)
    if tau == 0.0:
        return RatePoint(x, 0.0, 0.0, 0.0)
    lam = perron(rep.total_matrix).lam
    y = perron(tilted_matrix(rep, tau)).lam
    value = x * tau + math.log(lam) - math.log(y)
    return RatePoint(x, tau, max(value, 0.0), tau)


def binomial_rate(p: float, x: float) -> float:
    """x log(x/p) + (1-x) log((1-x)/(1-p))."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"p = {p!r} outside (0, 1)")
    if not 0.0 < x < 1.0:
        raise DomainError(f"x = {x!r} outside (0, 1)")
    return x * math.log(x / p) + (1.0 - x) * math.log((1.0 - x) / (1.0 - p))


def binomial_endpoints(p: float) -> tuple[float, float]:
    """Limits of :func:`binomial_rate` at x -> 0+ and x -> 1-."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"p = {p!r} outside (0, 1)")
    return math.log(1.0 / (1.0 - p)), math.log(1.0 / p)


def domain(rep: LinearRepresentation, saturation: float = SATURATION) -> RateDomain:
    lims = limits_UV(rep, saturation)
    lam = perron(rep.total_matrix).lam
    la = spectral_radius(rep.matrix_a)
    lb = spectral_radius(rep.matrix_b)
    if lims.u_estimated:
        t = -saturation
        left = t * beta(rep, t) + math.log(lam) - math.log(perron(tilted_matrix(rep, t)).lam)
    else:
        left = math.log(lam / lb)
    if lims.v_estimated:
        t = saturation
        right = t * beta(rep, t) + math.log(lam) - math.log(perron(tilted_matrix(rep, t)).lam)
    else:
        right = math.log(lam / la)
    return RateDomain(
        u_limit=lims.u,
        v_limit=lims.v,
        open01=lims.open01,
        lambda_a=la,
        lambda_b=lb,
        endpoint_left=left,
        endpoint_right=right,
        left_estimated=lims.u_estimated,
        right_estimated=lims.v_estimated,
    )


def rate_curve(rep: LinearRepresentation, grid) -> list[RatePoint | OutOfDomain]:
    """One result per grid value, in order; out-of-domain points become :class:`OutOfDomain`."""
    out = []
    for x in grid:
        x = float(x)
        try:
            out.append(rate(rep, x))
        except DomainError as exc:
            out.append(OutOfDomain(x, str(exc)))
    return out


def uniform_grid(lo: float, hi: float, points: int, eps: float = GRID_EPS) -> np.ndarray:
    """``points`` equally spaced values on [lo + eps, hi - eps]."""
    if points < 2 or not lo < hi:
        raise ValueError("need lo < hi and at least two points")
    return np.linspace(lo + eps, hi - eps, points)


def centered_grid(rep: LinearRepresentation, points: int = 99, eps: float = GRID_EPS) -> np.ndarray:
    """Uniform grid inside the domain that contains beta(0) as one of its nodes.

    The node count left of beta is proportional to the room available there;
    the spacing is the largest that keeps every node in [U + eps, V - eps].
    """
    dom = domain(rep)
    b0 = beta(rep, 0.0)
    lo, hi = dom.u_limit + eps, dom.v_limit - eps
    left = int(round((points - 1) * (b0 - lo) / (hi - lo)))
    left = min(max(left, 1), points - 2)
    right = points - 1 - left
    h = min((b0 - lo) / left, (hi - b0) / right)
    return b0 + h * np.arange(-left, right + 1)
