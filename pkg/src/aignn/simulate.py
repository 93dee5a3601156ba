"""Bit-parallel logic simulation and exhaustive enumeration.

Each 64-bit machine word carries 64 input patterns; gates evaluate with
single word-wide bit operations in topological order. Signal probability
of a node is its popcount fraction over all simulated patterns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import CircuitError, GateKind, topo_order

WORD_BITS = 64
DEFAULT_PATTERNS = 100_032  # 100k rounded up to a word multiple
PRNG_ALGORITHM = "numpy-philox4x64"
EXHAUSTIVE_PI_LIMIT = 20


class TooManyInputsForExhaustive(CircuitError):
    pass


@dataclass
class ProbabilityMap:
    """Per-node probability of logic 1, plus how it was produced."""

    y: np.ndarray  # float64, one entry per node
    n_patterns: int
    seed: int | None = None
    algorithm: str = PRNG_ALGORITHM

    def __len__(self):
        return len(self.y)


def _popcount(words, last_mask=None):
    if last_mask is not None:
        words = words.copy()
        words[..., -1] &= last_mask
    return int(np.bitwise_count(words).sum())


def random_patterns(n_pi, n_words, seed):
    """(n_pi, n_words) uint64 pattern block; an independent Philox stream
    per primary input, spawned from the seed."""
    root = np.random.SeedSequence(seed)
    block = np.empty((n_pi, n_words), dtype=np.uint64)
    for i, child in enumerate(root.spawn(n_pi)):
        gen = np.random.Generator(np.random.Philox(child))
        block[i] = gen.integers(0, 2**64, size=n_words, dtype=np.uint64)
    return block


def evaluate_words(graph, pi_words):
    """Evaluate every node over word-packed input patterns.

    pi_words: (n_pi, n_words) uint64, rows in the graph's PI order.
    Returns (n_nodes, n_words) uint64.
    """
    pis = graph.pi_ids
    n_words = pi_words.shape[1]
    vals = np.empty((graph.n_nodes, n_words), dtype=np.uint64)
    for row, node in enumerate(pis):
        vals[node] = pi_words[row]
    for v in topo_order(graph):
        kind = graph.kinds[v]
        if kind == GateKind.PI:
            continue
        fi = graph.fanins[v]
        if kind == GateKind.NOT:
            vals[v] = ~vals[fi[0]]
        elif kind == GateKind.BUF:
            vals[v] = vals[fi[0]]
        elif kind in (GateKind.AND, GateKind.NAND):
            acc = vals[fi[0]] & vals[fi[1]]
            for u in fi[2:]:
                acc = acc & vals[u]
            vals[v] = ~acc if kind == GateKind.NAND else acc
        elif kind in (GateKind.OR, GateKind.NOR):
            acc = vals[fi[0]] | vals[fi[1]]
            for u in fi[2:]:
                acc = acc | vals[u]
            vals[v] = ~acc if kind == GateKind.NOR else acc
        elif kind == GateKind.XOR:
            acc = vals[fi[0]] ^ vals[fi[1]]
            for u in fi[2:]:
                acc = acc ^ vals[u]
            vals[v] = acc
        else:
            raise CircuitError(f"cannot simulate gate kind {kind!r}")
    return vals


def round_up_patterns(n_patterns):
    if n_patterns < 1:
        raise ValueError("n_patterns must be >= 1")
    return ((n_patterns + WORD_BITS - 1) // WORD_BITS) * WORD_BITS


def simulate(graph, n_patterns=DEFAULT_PATTERNS, seed=0):
    """Random-pattern signal probabilities for every node.

    n_patterns is rounded up to a word multiple; the rounded count is
    recorded in the result. Deterministic in (graph, n_patterns, seed).
    """
    n = round_up_patterns(n_patterns)
    n_words = n // WORD_BITS
    vals = evaluate_words(graph, random_patterns(len(graph.pi_ids), n_words, seed))
    counts = np.bitwise_count(vals).sum(axis=1, dtype=np.int64)
    return ProbabilityMap(y=counts.astype(np.float64) / n, n_patterns=n, seed=seed)


def exhaustive_pattern_words(n_pi):
    """Packed enumeration of all 2^n_pi input assignments.

    Returns (words, n_patterns, last_mask). Pattern p assigns bit
    ``(p >> i) & 1`` to PI i; bit b of word j is pattern ``64*j + b``.
    """
    if n_pi > EXHAUSTIVE_PI_LIMIT:
        raise TooManyInputsForExhaustive(
            f"{n_pi} PIs exceeds exhaustive limit of {EXHAUSTIVE_PI_LIMIT}")
    n_patterns = 1 << n_pi
    n_words = max(1, n_patterns // WORD_BITS)
    words = np.empty((n_pi, n_words), dtype=np.uint64)
    for i in range(n_pi):
        if i < 6:
            const = np.uint64(sum(1 << b for b in range(64) if (b >> i) & 1))
            words[i] = const
        else:
            odd = ((np.arange(n_words, dtype=np.uint64) >> np.uint64(i - 6)) & np.uint64(1)).astype(bool)
            words[i] = np.where(odd, np.uint64(0xFFFFFFFFFFFFFFFF), np.uint64(0))
    last_mask = None
    if n_patterns < WORD_BITS:
        last_mask = np.uint64((1 << n_patterns) - 1)
    return words, n_patterns, last_mask


def exhaustive_probabilities(graph):
    """Exact signal probabilities by full input enumeration (<= 20 PIs)."""
    n_pi = len(graph.pi_ids)
    words, n_patterns, last_mask = exhaustive_pattern_words(n_pi)
    vals = evaluate_words(graph, words)
    if last_mask is not None:
        vals = vals & last_mask
    counts = np.bitwise_count(vals).sum(axis=1, dtype=np.int64)
    return ProbabilityMap(y=counts.astype(np.float64) / n_patterns,
                          n_patterns=n_patterns, seed=None, algorithm="exhaustive")
