"""Bipartite like-graphs, deterministic maximum matching and the agent-minimizing vertex cover.

The matching kernel is compiled (``_cmatch``) when the extension is built and
falls back to ``_pymatch`` otherwise. Set ``MATCHMARKET_PURE_PYTHON=1`` to
force the fallback; both give identical results.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import _pymatch

if os.environ.get("MATCHMARKET_PURE_PYTHON", "") not in ("", "0"):
    _kernel = _pymatch
    BACKEND = "python"
else:
    try:
        from . import _cmatch as _kernel  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _kernel = _pymatch
        BACKEND = "python"


@dataclass(frozen=True)
class LikeGraph:
    """Agents ``0..n-1`` on one side, goods ``0..n-1`` on the other, neighbours ascending."""

    n: int
    adj: tuple[tuple[int, ...], ...]

    @classmethod
    def from_utilities(cls, u) -> "LikeGraph":
        rows = u.rows if hasattr(u, "rows") else u
        return cls(len(rows), tuple(tuple(j for j, v in enumerate(r) if v > 0) for r in rows))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "LikeGraph":
        adj: list[set[int]] = [set() for _ in range(n)]
        for i, j in edges:
            adj[i].add(j)
        return cls(n, tuple(tuple(sorted(s)) for s in adj))

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, nb in enumerate(self.adj) for j in nb]

    def goods_adj(self) -> list[list[int]]:
        """Reverse adjacency: good -> agents liking it, ascending."""
        rev: list[list[int]] = [[] for _ in range(self.n)]
        for i, nb in enumerate(self.adj):
            for j in nb:
                rev[j].append(i)
        return rev

    def neighbours_of_goods(self, goods: Iterable[int], agents: Iterable[int] | None = None) -> set[int]:
        goods = set(goods)
        allowed = set(agents) if agents is not None else None
        return {
            i
            for i, nb in enumerate(self.adj)
            if (allowed is None or i in allowed) and any(j in goods for j in nb)
        }


@dataclass(frozen=True)
class CoverPartition:
    """``G1 | A2`` is a minimum vertex cover; ``A1``/``G2`` are the complements."""

    A1: frozenset[int]
    A2: frozenset[int]
    G1: frozenset[int]
    G2: frozenset[int]


def _csr(g: LikeGraph, agents: set[int] | None, goods: set[int] | None):
    indptr = [0]
    indices: list[int] = []
    for i in range(g.n):
        if agents is None or i in agents:
            indices.extend(j for j in g.adj[i] if goods is None or j in goods)
        indptr.append(len(indices))
    return indptr, indices


def max_matching(
    g: LikeGraph,
    agents: Iterable[int] | None = None,
    goods: Iterable[int] | None = None,
) -> list[int]:
    """Maximum matching, optionally inside ``H[agents, goods]``.

    Returns ``match[i]`` = good matched to agent ``i`` or ``-1``. Augmenting
    paths are explored from agents in ascending order, neighbours ascending.
    """
    agents = set(agents) if agents is not None else None
    goods = set(goods) if goods is not None else None
    indptr, indices = _csr(g, agents, goods)
    match_left, _ = _kernel.max_matching_csr(g.n, g.n, indptr, indices)
    return list(match_left)


def matching_size(match: Sequence[int]) -> int:
    return sum(1 for j in match if j >= 0)


def min_vertex_cover_min_agents(g: LikeGraph) -> CoverPartition:
    """Minimum vertex cover with as few agent vertices as possible.

    From a maximum matching, collect everything reachable from unmatched goods
    along alternating paths (good to agent on any edge, agent to good on its
    matching edge). Reached agents lie in every minimum cover and reached goods
    in none, so taking reached agents plus unreached goods is the unique
    agent-minimal choice.
    """
    n = g.n
    indptr, indices = _csr(g, None, None)
    match_left, match_right = _kernel.max_matching_csr(n, n, indptr, indices)
    rev = g.goods_adj()
    rindptr = [0]
    rindices: list[int] = []
    for j in range(n):
        rindices.extend(rev[j])
        rindptr.append(len(rindices))
    starts = [j for j in range(n) if match_right[j] == -1]
    left, right = _kernel.alternating_reach_csr(n, n, rindptr, rindices, list(match_left), starts)
    A2 = frozenset(i for i in range(n) if left[i])
    G1 = frozenset(j for j in range(n) if not right[j])
    return CoverPartition(
        A1=frozenset(range(n)) - A2,
        A2=A2,
        G1=G1,
        G2=frozenset(range(n)) - G1,
    )
