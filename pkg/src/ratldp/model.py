"""Linear representations (xi, A, B, eta) of rational series over {a, b}.

A representation defines the weight ``(r, w) = xi' mu(w) eta`` of a word, with
``mu(a) = A`` and ``mu(b) = B``, and hence the probability measure on words of
length n proportional to that weight.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from pathlib import Path

import numpy as np
from scipy.sparse.csgraph import breadth_first_order, connected_components

from .errors import DomainError, ModelError

#: Default bound on |t| accepted by :func:`tilt`.
TILT_BOUND = 50.0


def _frozen(a, ndim: int, name: str) -> np.ndarray:
    arr = np.array(a, dtype=float)
    if arr.ndim != ndim:
        raise ModelError(f"{name}: expected a {ndim}-dimensional array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class LinearRepresentation:
    """The 4-tuple (xi, A, B, eta). Arrays are stored read-only.

    Construction enforces shapes, non-negativity and that none of xi, eta,
    A, B is zero. Primitivity and the support condition are reported by
    :func:`validate` rather than raised here.
    """

    xi: np.ndarray
    matrix_a: np.ndarray
    matrix_b: np.ndarray
    eta: np.ndarray
    dimension: int = field(init=False)

    def __post_init__(self):
        xi = _frozen(self.xi, 1, "xi")
        a = _frozen(self.matrix_a, 2, "A")
        b = _frozen(self.matrix_b, 2, "B")
        eta = _frozen(self.eta, 1, "eta")
        m = xi.shape[0]
        if m == 0:
            raise ModelError("dimension must be positive")
        for name, arr, shape in (("A", a, (m, m)), ("B", b, (m, m)), ("eta", eta, (m,))):
            if arr.shape != shape:
                raise ModelError(f"dimension mismatch: {name} has shape {arr.shape}, expected {shape}")
        for name, arr in (("xi", xi), ("A", a), ("B", b), ("eta", eta)):
            if not np.all(np.isfinite(arr)):
                raise ModelError(f"non-finite entry in {name}")
            if np.any(arr < 0):
                idx = tuple(int(i) for i in np.argwhere(arr < 0)[0])
                raise ModelError(f"negative entry in {name} at {list(idx)}")
            if not np.any(arr > 0):
                kind = "matrix" if arr.ndim == 2 else "vector"
                raise ModelError(f"{name} is the zero {kind}")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "matrix_a", a)
        object.__setattr__(self, "matrix_b", b)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "dimension", m)

    @property
    def total_matrix(self) -> np.ndarray:
        return self.matrix_a + self.matrix_b

    def to_dict(self) -> dict:
        return {
            "m": self.dimension,
            "xi": self.xi.tolist(),
            "A": self.matrix_a.tolist(),
            "B": self.matrix_b.tolist(),
            "eta": self.eta.tolist(),
        }

    def __eq__(self, other):
        if not isinstance(other, LinearRepresentation):
            return NotImplemented
        return all(
            np.array_equal(x, y)
            for x, y in zip(
                (self.xi, self.matrix_a, self.matrix_b, self.eta),
                (other.xi, other.matrix_a, other.matrix_b, other.eta),
            )
        )

    __hash__ = None


@dataclass(frozen=True)
class ValidationReport:
    primitive: bool
    support_ok: bool
    lambda_a_positive: bool
    lambda_b_positive: bool
    messages: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.primitive and self.support_ok


# --------------------------------------------------------------------------- parsing

_FIELDS = ("m", "xi", "eta", "A", "B")


def _no_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise ModelError(f"duplicate key {key!r}")
        out[key] = value
    return out


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ModelError(f"{where}: expected a number, got {value!r}")
    if value < 0:
        raise ModelError(f"negative entry at {where}")
    return float(value)


def _vector(doc, key: str, m: int) -> list[float]:
    vec = doc[key]
    if not isinstance(vec, list):
        raise ModelError(f"{key}: expected an array of {m} numbers")
    if len(vec) != m:
        raise ModelError(f"dimension mismatch: {key} has {len(vec)} entries, m = {m}")
    return [_number(x, f"{key}[{i}]") for i, x in enumerate(vec)]


def _matrix(doc, key: str, m: int) -> list[list[float]]:
    rows = doc[key]
    if not isinstance(rows, list):
        raise ModelError(f"{key}: expected an array of {m} rows")
    if len(rows) != m:
        raise ModelError(f"dimension mismatch: {key} has {len(rows)} rows, m = {m}")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != m:
            raise ModelError(f"dimension mismatch: {key}[{i}] must hold {m} numbers")
        out.append([_number(x, f"{key}[{i}][{j}]") for j, x in enumerate(row)])
    return out


def parse_model(text: str) -> LinearRepresentation:
    """Parse a JSON model document with fields ``m``, ``xi``, ``eta``, ``A``, ``B``."""
    try:
        doc = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ModelError(f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ModelError("top level must be an object")
    missing = [k for k in _FIELDS if k not in doc]
    if missing:
        raise ModelError(f"missing field(s): {', '.join(missing)}")
    unknown = sorted(set(doc) - set(_FIELDS))
    if unknown:
        raise ModelError(f"unknown field(s): {', '.join(unknown)}")
    m = doc["m"]
    if isinstance(m, bool) or not isinstance(m, int) or m <= 0:
        raise ModelError(f"m: expected a positive integer, got {m!r}")
    return LinearRepresentation(
        xi=_vector(doc, "xi", m),
        matrix_a=_matrix(doc, "A", m),
        matrix_b=_matrix(doc, "B", m),
        eta=_vector(doc, "eta", m),
    )


def load_model(path) -> LinearRepresentation:
    return parse_model(Path(path).read_text())


def dump_model(rep: LinearRepresentation) -> str:
    """JSON text readable by :func:`parse_model`, one matrix row per line."""
    d = rep.to_dict()
    row = lambda r: json.dumps([float(x) for x in r])  # noqa: E731
    mat = lambda M: "[\n    " + ",\n    ".join(row(r) for r in M) + "\n  ]"  # noqa: E731
    return (
        "{\n"
        f'  "m": {d["m"]},\n'
        f'  "xi": {row(d["xi"])},\n'
        f'  "A": {mat(d["A"])},\n'
        f'  "B": {mat(d["B"])},\n'
        f'  "eta": {row(d["eta"])}\n'
        "}"
    )


# --------------------------------------------------------------------------- graph tests

def _pattern(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return M > 0


def has_cycle(M) -> bool:
    """True iff the digraph of nonzero entries has a cycle, i.e. spectral radius > 0."""
    g = _pattern(M)
    if np.any(np.diag(g)):
        return True
    ncomp, labels = connected_components(g.astype(np.int8), directed=True, connection="strong")
    return bool(np.bincount(labels, minlength=ncomp).max() > 1)


def is_primitive(M) -> bool:
    """Strong connectivity plus aperiodicity of the digraph of nonzero entries.

    The period is the gcd of ``level(i) + 1 - level(j)`` over all edges i -> j,
    with levels taken from a BFS rooted at vertex 0.
    """
    g = _pattern(M)
    return _primitive_pattern(g.tobytes(), g.shape[0])


@lru_cache(maxsize=1024)
def _primitive_pattern(key: bytes, m: int) -> bool:
    g = np.frombuffer(key, dtype=bool).reshape(m, m)
    ncomp, _ = connected_components(g.astype(np.int8), directed=True, connection="strong")
    if ncomp != 1:
        return False
    order, pred = breadth_first_order(g.astype(np.int8), 0, directed=True, return_predecessors=True)
    level = np.zeros(m, dtype=int)
    for v in order[1:]:
        level[v] = level[pred[v]] + 1
    period = 0
    for i, j in zip(*np.nonzero(g)):
        period = gcd(period, int(abs(level[i] + 1 - level[j])))
        if period == 1:
            return True
    return False


def wielandt_exponent(m: int) -> int:
    return (m - 1) ** 2 + 1


def support_ok(rep: LinearRepresentation) -> bool:
    """Check xi'(A+B)^n eta > 0 for n = 1 .. (m-1)^2 + 1 on the boolean pattern."""
    g = rep.total_matrix > 0
    reach = rep.xi > 0
    target = rep.eta > 0
    for _ in range(wielandt_exponent(rep.dimension)):
        reach = (reach.astype(np.int64) @ g.astype(np.int64)) > 0
        if not np.any(reach & target):
            return False
    return True


def validate(rep: LinearRepresentation) -> ValidationReport:
    primitive = is_primitive(rep.total_matrix)
    sup = support_ok(rep)
    la = has_cycle(rep.matrix_a)
    lb = has_cycle(rep.matrix_b)
    messages = []
    if not primitive:
        messages.append("A+B not primitive")
    if not sup:
        messages.append("support condition fails: some length n has no word of positive weight")
    if not la:
        messages.append("A has spectral radius 0 (nilpotent): V may be < 1")
    if not lb:
        messages.append("B has spectral radius 0 (nilpotent): U may be > 0")
    return ValidationReport(primitive, sup, la, lb, tuple(messages))


# --------------------------------------------------------------------------- weights

def tilt(rep: LinearRepresentation, t: float, bound: float = TILT_BOUND) -> LinearRepresentation:
    """The representation (xi, A e^t, B, eta)."""
    if not math.isfinite(t) or abs(t) > bound:
        raise DomainError(f"|t| = {abs(t)} exceeds the tilt bound {bound}")
    if t == 0:
        return rep
    return LinearRepresentation(rep.xi, rep.matrix_a * math.exp(t), rep.matrix_b, rep.eta)


def weight_of_word(rep: LinearRepresentation, word: str) -> float:
    mats = {"a": rep.matrix_a, "b": rep.matrix_b}
    vec = rep.xi
    for ch in word:
        try:
            vec = vec @ mats[ch]
        except KeyError:
            raise ValueError(f"symbol {ch!r} not in alphabet {{a, b}}") from None
    return float(vec @ rep.eta)


def log_bilinear_power(left, M, right, n: int) -> float:
    """log(left' M^n right) for non-negative data, by scaled binary powering.

    Every product is renormalized by its max entry with the scale carried in
    log form, so the result does not overflow for large n.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    vec = np.asarray(left, dtype=float)
    log_scale = 0.0
    power = np.asarray(M, dtype=float)
    s = power.max()
    if s <= 0:
        return float(np.log(vec @ right)) if n == 0 else -math.inf
    power = power / s
    log_power = math.log(s)
    while n:
        if n & 1:
            vec = vec @ power
            log_scale += log_power
            top = vec.max()
            if top <= 0:
                return -math.inf
            vec = vec / top
            log_scale += math.log(top)
        n >>= 1
        if n:
            power = power @ power
            log_power *= 2
            top = power.max()
            power = power / top
            log_power += math.log(top)
    val = float(vec @ np.asarray(right, dtype=float))
    return log_scale + math.log(val) if val > 0 else -math.inf


def total_weight(rep: LinearRepresentation, n: int) -> float:
    """log(xi'(A+B)^n eta)."""
    return log_bilinear_power(rep.xi, rep.total_matrix, rep.eta, n)
