"""Perron-Frobenius data and the spectral curve of the tilted family A e^t + B."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import ConvergenceError, DomainError, NotPrimitiveError
from .model import TILT_BOUND, LinearRepresentation, has_cycle, is_primitive

#: |t| at which beta(t) is taken as saturated when estimating U and V.
SATURATION = 30.0
PERRON_TOL = 1e-12
MAX_SWEEPS = 100


@dataclass(frozen=True, eq=False)
class PerronData:
    """Dominant eigenvalue with right vector ``u`` (unit sum) and left vector ``v`` (v'u = 1)."""

    lam: float
    u: np.ndarray
    v: np.ndarray
    residual: float


@dataclass(frozen=True)
class SpectralCurvePoint:
    t: float
    y: float
    y_prime: float
    beta: float
    gamma: float


@dataclass(frozen=True)
class SpectralLimits:
    """Limits of beta(t) as t -> -inf (``u``) and t -> +inf (``v``).

    A limit is exact (0 or 1) when the corresponding matrix B or A has a
    positive spectral radius; otherwise it is beta evaluated at the
    saturation bound and flagged as an estimate.
    """

    u: float
    v: float
    open01: bool
    u_estimated: bool = False
    v_estimated: bool = False


def _backward_error(M, lam, u, v) -> float:
    ru = np.abs(M @ u - lam * u).max() / (np.abs(M).sum(axis=1).max() * np.abs(u).max())
    rv = np.abs(v @ M - lam * v).max() / (np.abs(M).sum(axis=0).max() * np.abs(v).max())
    return float(max(ru, rv))


def _inverse_step(M, sigma, x, transpose=False):
    S = sigma * np.eye(M.shape[0]) - M
    if transpose:
        S = S.T
    try:
        y = np.linalg.solve(S, x)
    except np.linalg.LinAlgError:
        y = np.linalg.solve(S + 1e-14 * abs(sigma) * np.eye(M.shape[0]), x)
    return y / y.sum()


def perron(M, tol: float = PERRON_TOL, max_sweeps: int = MAX_SWEEPS) -> PerronData:
    """Perron-Frobenius eigenvalue and eigenvectors of a primitive matrix.

    The eigenvalue of largest real part from LAPACK seeds shifted inverse
    iteration (shift slightly above the current estimate, all-ones start);
    the estimate is then updated by the two-sided Rayleigh quotient
    v'Mu / v'u. Plain power iteration would stall on matrices such as
    ``[[1, e^t], [e^t, 0]]`` whose second eigenvalue approaches -lambda.
    """
    M = np.asarray(M, dtype=float)
    if not is_primitive(M):
        raise NotPrimitiveError("matrix is not primitive")
    m = M.shape[0]
    one = np.ones(1)
    if m == 1:
        return PerronData(float(M[0, 0]), one, one, 0.0)
    lam = float(np.linalg.eigvals(M).real.max())
    u = np.full(m, 1.0 / m)
    v = np.ones(m)
    residual = math.inf
    for _ in range(max_sweeps):
        sigma = lam * (1.0 + 1e-9) + 1e-300
        u = _inverse_step(M, sigma, u)
        v = _inverse_step(M, sigma, v, transpose=True)
        # a couple of plain steps restore exact positivity and cost no accuracy
        for _ in range(2):
            u = M @ np.abs(u)
            u /= u.sum()
            v = np.abs(v) @ M
            v /= v.sum()
        new_lam = float(v @ M @ u / (v @ u))
        residual = _backward_error(M, new_lam, u, v)
        settled = abs(new_lam - lam) <= tol * new_lam
        lam = new_lam
        if residual <= tol and settled:
            break
    else:
        raise ConvergenceError(f"Perron iteration did not reach tolerance {tol} (residual {residual:.3g})")
    if np.any(u <= 0) or np.any(v <= 0):
        raise ConvergenceError("Perron vectors lost strict positivity")
    v = v / (v @ u)
    u.setflags(write=False)
    v.setflags(write=False)
    return PerronData(lam, u, v, residual)


def power_iteration(M, tol: float = 1e-13, max_iter: int = 1_000_000) -> PerronData:
    """Reference power iteration from the all-ones vector.

    Converges geometrically at rate |mu_2| / lambda; used to cross-check
    :func:`perron` on well-separated matrices.
    """
    M = np.asarray(M, dtype=float)
    m = M.shape[0]
    u = np.full(m, 1.0 / m)
    v = np.ones(m)
    lam = 0.0
    for _ in range(max_iter):
        u_next = M @ u
        v_next = v @ M
        est = float(u_next.sum())
        u = u_next / est
        v = v_next / v_next.sum()
        if abs(est - lam) < tol * est and _backward_error(M, est, u, v) < tol:
            lam = est
            break
        lam = est
    else:
        raise ConvergenceError("power iteration did not converge")
    return PerronData(lam, u, v / (v @ u), _backward_error(M, lam, u, v))


def spectral_radius(M) -> float:
    """Spectral radius of a non-negative square matrix.

    Exactly 0 when the nonzero pattern is acyclic. Otherwise the maximum, over
    strongly connected components carrying a cycle, of the largest real
    eigenvalue of the (irreducible) diagonal block, where the Perron root is
    simple and well conditioned.
    """
    M = np.asarray(M, dtype=float)
    if not has_cycle(M):
        return 0.0
    _, labels = connected_components((M > 0).astype(np.int8), directed=True, connection="strong")
    best = 0.0
    for comp in np.unique(labels):
        idx = np.flatnonzero(labels == comp)
        block = M[np.ix_(idx, idx)]
        if len(idx) == 1 and block[0, 0] <= 0:
            continue
        best = max(best, float(np.linalg.eigvals(block).real.max()))
    return best


def tilted_matrix(rep: LinearRepresentation, t: float, bound: float = TILT_BOUND) -> np.ndarray:
    if not math.isfinite(t) or abs(t) > bound:
        raise DomainError(f"|t| = {abs(t)} exceeds the bound {bound}")
    return rep.matrix_a * math.exp(t) + rep.matrix_b


def _require_primitive(rep: LinearRepresentation):
    if not is_primitive(rep.total_matrix):
        raise NotPrimitiveError("A+B is not primitive")


def beta(rep: LinearRepresentation, t: float, bound: float = TILT_BOUND) -> float:
    """beta(t) = v_t' A e^t u_t / y(t)."""
    pd = perron(tilted_matrix(rep, t, bound))
    return float(pd.v @ (rep.matrix_a * math.exp(t)) @ pd.u) / pd.lam


def gamma(rep: LinearRepresentation, t: float, bound: float = TILT_BOUND) -> float:
    """beta'(t) by a central difference, Richardson-extrapolated once."""
    h = 1e-4 * max(1.0, abs(t))

    def diff(step):
        return (beta(rep, t + step, bound + h) - beta(rep, t - step, bound + h)) / (2 * step)

    g = (4.0 * diff(h / 2) - diff(h)) / 3.0
    return max(g, 1e-300)


def curve_point(rep: LinearRepresentation, t: float, bound: float = TILT_BOUND) -> SpectralCurvePoint:
    _require_primitive(rep)
    pd = perron(tilted_matrix(rep, t, bound))
    y_prime = float(pd.v @ (rep.matrix_a * math.exp(t)) @ pd.u)
    return SpectralCurvePoint(t, pd.lam, y_prime, y_prime / pd.lam, gamma(rep, t, bound))


def quasi_power_factor(rep: LinearRepresentation, t: float, bound: float = TILT_BOUND) -> float:
    """r(t) = (xi'u_t)(v_t'eta) / ((xi'u_0)(v_0'eta))."""
    _require_primitive(rep)
    if t == 0:
        return 1.0
    p0 = perron(rep.total_matrix)
    pt = perron(tilted_matrix(rep, t, bound))
    num = float(rep.xi @ pt.u) * float(pt.v @ rep.eta)
    den = float(rep.xi @ p0.u) * float(p0.v @ rep.eta)
    return num / den


def limits_UV(rep: LinearRepresentation, saturation: float = SATURATION) -> SpectralLimits:
    _require_primitive(rep)
    la = spectral_radius(rep.matrix_a) > 0
    lb = spectral_radius(rep.matrix_b) > 0
    u = 0.0 if lb else beta(rep, -saturation)
    v = 1.0 if la else beta(rep, saturation)
    return SpectralLimits(u, v, la and lb, u_estimated=not lb, v_estimated=not la)
