"""Exact random generation of words under Pr(w) = xi'mu(w)eta / xi'(A+B)^n eta.

Randomness comes from NumPy's Philox4x64-10 counter-based generator keyed
directly by the 64-bit seed (``Philox(key=seed)``, counter 0). Uniform
doubles are ``(next_uint64 >> 11) * 2**-53``. A word of length n consumes n
consecutive uniforms, symbol j being ``a`` iff ``u_j < Pr(a | prefix)``;
sample i of a batch consumes draws ``i*n .. i*n + n - 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import LinearRepresentation

MAX_N = 1_000_000
#: Words per vectorized batch.
CHUNK = 8192


@dataclass(frozen=True, eq=False)
class BackwardTable:
    """Normalized vectors g_j proportional to (A+B)^(n-j) eta, j = 0..n, with their log-scales."""

    n: int
    vectors: np.ndarray
    log_scales: np.ndarray


@dataclass(frozen=True, eq=False)
class SampleSummary:
    n: int
    num_samples: int
    counts: np.ndarray
    seed: int


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed) & 0xFFFF_FFFF_FFFF_FFFF))


def backward_table(rep: LinearRepresentation, n: int) -> BackwardTable:
    if not 0 <= n <= MAX_N:
        raise DomainError(f"n = {n} outside 0..{MAX_N}")
    M = rep.total_matrix
    vecs = np.empty((n + 1, rep.dimension))
    logs = np.empty(n + 1)
    g = rep.eta / rep.eta.max()
    vecs[n] = g
    logs[n] = math.log(rep.eta.max())
    for j in range(n - 1, -1, -1):
        g = M @ g
        top = g.max()
        g = g / top
        vecs[j] = g
        logs[j] = logs[j + 1] + math.log(top)
    vecs.setflags(write=False)
    logs.setflags(write=False)
    return BackwardTable(n, vecs, logs)


def _prob_a(rep, states, g):
    wa = (states @ rep.matrix_a) @ g
    wb = (states @ rep.matrix_b) @ g
    return wa / (wa + wb)


def word_probability(rep: LinearRepresentation, word: str, table: BackwardTable | None = None) -> float:
    """Product of the sampler's step probabilities along ``word``."""
    n = len(word)
    if table is None or table.n != n:
        table = backward_table(rep, n)
    s = rep.xi / rep.xi.max()
    prob = 1.0
    for j, ch in enumerate(word):
        pa = float(_prob_a(rep, s[None, :], table.vectors[j + 1])[0])
        if ch == "a":
            prob *= pa
            s = s @ rep.matrix_a
        elif ch == "b":
            prob *= 1.0 - pa
            s = s @ rep.matrix_b
        else:
            raise ValueError(f"symbol {ch!r} not in alphabet {{a, b}}")
        top = s.max()
        if top <= 0:
            return 0.0
        s = s / top
    return prob


def _sample_batch(rep, table, uniforms) -> np.ndarray:
    """Rows of ``uniforms`` drive one word each; returns a boolean array (True = a)."""
    count, n = uniforms.shape
    states = np.tile(rep.xi / rep.xi.max(), (count, 1))
    out = np.empty((count, n), dtype=bool)
    for j in range(n):
        g = table.vectors[j + 1]
        sa = states @ rep.matrix_a
        sb = states @ rep.matrix_b
        wa = sa @ g
        wb = sb @ g
        is_a = uniforms[:, j] * (wa + wb) < wa
        out[:, j] = is_a
        states = np.where(is_a[:, None], sa, sb)
        states /= states.max(axis=1, keepdims=True)
    return out


def sample_word(rep: LinearRepresentation, n: int, rng: np.random.Generator, table: BackwardTable | None = None) -> str:
    if table is None or table.n != n:
        table = backward_table(rep, n)
    bits = _sample_batch(rep, table, rng.random((1, n)))[0]
    return "".join("a" if b else "b" for b in bits)


def iter_sample_batches(rep: LinearRepresentation, n: int, num_samples: int, seed: int, chunk: int = CHUNK):
    """Yield boolean word arrays in sample order, ``chunk`` words at a time."""
    if num_samples <= 0:
        raise ValueError("num_samples must be positive")
    table = backward_table(rep, n)
    rng = make_rng(seed)
    done = 0
    while done < num_samples:
        size = min(chunk, num_samples - done)
        yield _sample_batch(rep, table, rng.random((size, n)))
        done += size


def sample_counts(rep: LinearRepresentation, n: int, num_samples: int, seed: int) -> SampleSummary:
    counts = np.zeros(n + 1, dtype=np.int64)
    for words in iter_sample_batches(rep, n, num_samples, seed):
        counts += np.bincount(words.sum(axis=1), minlength=n + 1)
    counts.setflags(write=False)
    return SampleSummary(n, num_samples, counts, seed)
