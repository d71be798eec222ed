"""Birkhoff-von Neumann rounding of a fractional perfect matching into a lottery."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotDoublyStochastic
from .graph import LikeGraph, matching_size, max_matching
from .model import Matrix, as_matrix, check_matching
from .rational import ZERO

MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class LotteryTerm:
    weight: Fraction
    permutation: tuple[int, ...]  # good assigned to each agent


def bvn_decompose(x) -> tuple[LotteryTerm, ...]:
    """Write ``x`` as a convex combination of permutation matrices.

    Each step takes the deterministic maximum matching on the current
    support, which is perfect by Hall's theorem, and removes it with the
    smallest weight along it. Every step drops to a strictly smaller face of
    the Birkhoff polytope, so there are at most ``(n-1)**2 + 1`` terms.
    """
    x = as_matrix(x)
    check_matching(x)
    n = len(x)
    rest = [list(r) for r in x]
    terms: list[LotteryTerm] = []
    remaining = Fraction(1)
    while remaining > 0:
        g = LikeGraph.from_edges(n, ((i, j) for i in range(n) for j in range(n) if rest[i][j] > 0))
        match = max_matching(g)
        if matching_size(match) != n:
            # only reachable if the remainder stopped being doubly stochastic
            raise NotDoublyStochastic("row", match.index(-1), sum(rest[match.index(-1)], ZERO))
        w = min(rest[i][match[i]] for i in range(n))
        for i in range(n):
            rest[i][match[i]] -= w
        remaining -= w
        terms.append(LotteryTerm(w, tuple(match)))
    return tuple(terms)


def reconstruct(terms) -> Matrix:
    n = len(terms[0].permutation)
    out = [[ZERO] * n for _ in range(n)]
    for t in terms:
        for i, j in enumerate(t.permutation):
            out[i][j] += t.weight
    return as_matrix(out)


def splitmix64(seed: int) -> int:
    """One step of the SplitMix64 generator: add the golden gamma, then mix."""
    z = (seed + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def uniform_from_seed(seed: int) -> Fraction:
    """Rational in ``[0, 1)`` with denominator ``2**64``."""
    if not 0 <= seed <= MASK64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return Fraction(splitmix64(seed), 1 << 64)


def sample_matching(terms, seed: int) -> tuple[int, ...]:
    """Term whose half-open cumulative-weight interval contains the seeded draw."""
    draw = uniform_from_seed(seed)
    acc = Fraction(0)
    for t in terms:
        acc += t.weight
        if draw < acc:
            return t.permutation
    return terms[-1].permutation
