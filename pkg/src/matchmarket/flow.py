"""Max-flow and min-cut with exact rational capacities.

Capacities are scaled to integers by the common denominator, Dinic's
algorithm runs on the integers, and flows are scaled back. Arcs leave each
node in ascending head order, so the flow returned is a deterministic
function of the network.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm


class _Infinite:
    """Marker for an uncapacitated arc; never compared numerically."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITE"


INFINITE = _Infinite()


class UnboundedFlow(ValueError):
    pass


@dataclass
class FlowNetwork:
    """Directed network on nodes ``0..size-1``; add arcs with :meth:`add_arc`."""

    size: int
    source: int
    sink: int
    arcs: list[tuple[int, int, object]] = field(default_factory=list)

    def add_arc(self, tail: int, head: int, capacity) -> int:
        if capacity is not INFINITE:
            capacity = Fraction(capacity)
            if capacity < 0:
                raise ValueError(f"negative capacity on arc {tail}->{head}")
        if head == self.source or tail == self.sink:
            raise ValueError("source must have no in-arcs and sink no out-arcs")
        self.arcs.append((tail, head, capacity))
        return len(self.arcs) - 1


class MaxFlow:
    """A maximum flow together with its residual graph."""

    def __init__(self, net: FlowNetwork):
        self.net = net
        finite = [c for _, _, c in net.arcs if c is not INFINITE]
        scale = 1
        for c in finite:
            scale = lcm(scale, c.denominator)
        self.scale = scale
        bound = sum(int(c * scale) for c in finite) + 1
        self._bound = bound

        n = net.size
        # arc 2k is forward arc k, 2k+1 its reverse
        to: list[int] = []
        cap: list[int] = []
        for tail, head, c in net.arcs:
            to.append(head)
            cap.append(bound if c is INFINITE else int(c * scale))
            to.append(tail)
            cap.append(0)
        out: list[list[int]] = [[] for _ in range(n)]
        for e in range(len(to)):
            out[to[e ^ 1]].append(e)
        for lst in out:
            lst.sort(key=lambda e: (to[e], e))
        self._to = to
        self._cap = cap
        self._out = out
        self._orig = list(cap)
        total = self._dinic()
        if total >= bound:
            raise UnboundedFlow("network has an uncapacitated source-sink path")
        self.value = Fraction(total, scale)

    def _dinic(self) -> int:
        s, t = self.net.source, self.net.sink
        to, cap, out = self._to, self._cap, self._out
        n = self.net.size
        total = 0
        while True:
            level = [-1] * n
            level[s] = 0
            q = deque([s])
            while q:
                v = q.popleft()
                for e in out[v]:
                    if cap[e] > 0 and level[to[e]] < 0:
                        level[to[e]] = level[v] + 1
                        q.append(to[e])
            if level[t] < 0:
                return total
            ptr = [0] * n
            while True:
                # iterative DFS for one blocking-flow path
                path: list[int] = []
                v = s
                while v != t:
                    adv = False
                    lst = out[v]
                    while ptr[v] < len(lst):
                        e = lst[ptr[v]]
                        w = to[e]
                        if cap[e] > 0 and level[w] == level[v] + 1:
                            path.append(e)
                            v = w
                            adv = True
                            break
                        ptr[v] += 1
                    if not adv:
                        if v == s:
                            break
                        level[v] = -1  # dead end
                        e = path.pop()
                        v = to[e ^ 1]
                        ptr[v] += 1
                if v != t:
                    break
                push = min(cap[e] for e in path)
                for e in path:
                    cap[e] -= push
                    cap[e ^ 1] += push
                total += push

    def arc_flow(self, k: int) -> Fraction:
        """Flow on the ``k``-th arc added to the network."""
        return Fraction(self._orig[2 * k] - self._cap[2 * k], self.scale)

    def flows(self) -> tuple[Fraction, ...]:
        return tuple(self.arc_flow(k) for k in range(len(self.net.arcs)))

    def source_reachable(self) -> frozenset[int]:
        """Minimal source side of a minimum cut: nodes reachable in the residual graph."""
        seen = {self.net.source}
        q = deque([self.net.source])
        while q:
            v = q.popleft()
            for e in self._out[v]:
                w = self._to[e]
                if self._cap[e] > 0 and w not in seen:
                    seen.add(w)
                    q.append(w)
        return frozenset(seen)

    def sink_reaching(self) -> frozenset[int]:
        """Nodes with a residual path to the sink."""
        seen = {self.net.sink}
        q = deque([self.net.sink])
        while q:
            w = q.popleft()
            for e in self._out[w]:
                # residual arc v -> w is the reverse of e when e leaves w
                r = e ^ 1
                v = self._to[e]
                if self._cap[r] > 0 and v not in seen:
                    seen.add(v)
                    q.append(v)
        return frozenset(seen)

    def maximal_source_side(self) -> frozenset[int]:
        """Largest source side of a minimum cut."""
        return frozenset(range(self.net.size)) - self.sink_reaching()

    def cut_capacity(self, source_side: frozenset[int]):
        total = Fraction(0)
        for tail, head, c in self.net.arcs:
            if tail in source_side and head not in source_side:
                if c is INFINITE:
                    return INFINITE
                total += c
        return total


def max_flow(net: FlowNetwork) -> tuple[Fraction, tuple[Fraction, ...]]:
    mf = MaxFlow(net)
    return mf.value, mf.flows()


def min_cut_partition(net: FlowNetwork) -> tuple[frozenset[int], frozenset[int]]:
    """Canonical minimum cut whose source side is the residual reach of the source."""
    side = MaxFlow(net).source_reachable()
    return side, frozenset(range(net.size)) - side
