"""Nash bargaining with dichotomous utilities and a disagreement point.

The like-graph is split by an agent-minimizing vertex cover. Agents outside
the cover's agent side buy covered goods at prices that rise from 1; an agent
facing price ``theta`` has money ``1 + c_i * theta`` and wants utility
``c_i + 1 / theta``. Goods freeze in tight sets, each at its own ``theta``.

An agent with a large ``c_i`` can want more than one unit at a low price.
With ``unit_cap`` (the default) such an agent buys exactly one unit, spends
``theta`` on goods and carries the rest of its money as a positive offset
``q_i = 1 / (1 - c_i) - theta``; its spending on goods is then
``min(theta, 1 + c_i * theta)``. Without the cap the allocation can overfill
a row, which the verifier reports.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ThetaBelowOne
from .flow import INFINITE, FlowNetwork, MaxFlow
from .graph import LikeGraph, matching_size, max_matching, min_vertex_cover_min_agents
from .hz import _northwest_fill
from .model import (
    EquilibriumReport,
    NBInstance,
    PriceSystem,
    TightEvent,
    as_matrix,
    utilities_of_allocation,
    validate_instance,
)
from .parametric import TightSet
from .parametric import find_tight_set as _find_parametric
from .rational import ONE, ZERO
from .verify import verify_1dlad_kkt


def agent_money(c, theta) -> tuple[Fraction, Fraction, Fraction]:
    """``(money, bang_per_buck, utility)`` of an agent with disagreement ``c`` facing price ``theta``."""
    c, theta = Fraction(c), Fraction(theta)
    if theta < 1:
        raise ThetaBelowOne(theta)
    return 1 + c * theta, 1 / theta, c + 1 / theta


def goods_spending(c, theta, unit_cap: bool = True) -> Fraction:
    """Money an agent spends on goods priced ``theta``."""
    money = agent_money(c, theta)[0]
    return min(Fraction(theta), money) if unit_cap else money


def find_tight_set(
    agents, goods, c: Sequence[Fraction], liked: Mapping[int, Sequence[int]], theta0=ONE, unit_cap: bool = True
) -> TightSet:
    pieces = {
        i: ((ONE, ZERO), (Fraction(c[i]), ONE)) if unit_cap else ((Fraction(c[i]), ONE),) for i in agents
    }
    return _find_parametric(goods, agents, liked, pieces, Fraction(theta0))


def flow_subroutine(A1, G1, c, liked, unit_cap: bool = True):
    """Freeze tight sets of ``G1`` one after another.

    Returns ``(allocation, prices, offsets, events)``: allocation as
    ``{(i, j): share}`` over ``A1 x G1``, prices on ``G1``, offsets of
    capped agents and the tight events in order.
    """
    agents = set(A1)
    goods = set(G1)
    alloc: dict[tuple[int, int], Fraction] = {}
    prices: dict[int, Fraction] = {}
    offsets: dict[int, Fraction] = {}
    events: list[TightEvent] = []
    theta = ONE
    while goods:
        ts = find_tight_set(sorted(agents), sorted(goods), c, liked, theta, unit_cap)
        theta = ts.theta
        S = sorted(ts.goods)
        T = sorted(ts.agents)
        gidx = {j: 1 + k for k, j in enumerate(S)}
        aidx = {i: 1 + len(S) + k for k, i in enumerate(T)}
        sink = 1 + len(S) + len(T)
        net = FlowNetwork(sink + 1, 0, sink)
        for j in S:
            net.add_arc(0, gidx[j], theta)
        arcs = []
        for i in T:
            for j in liked[i]:
                if j in gidx:
                    arcs.append((net.add_arc(gidx[j], aidx[i], INFINITE), i, j))
        for i in T:
            net.add_arc(aidx[i], sink, goods_spending(c[i], theta, unit_cap))
            if unit_cap and theta < 1 / (1 - c[i]):
                offsets[i] = 1 / (1 - c[i]) - theta
        mf = MaxFlow(net)
        for k, i, j in arcs:
            share = mf.arc_flow(k) / theta
            if share:
                alloc[(i, j)] = share
        for j in S:
            prices[j] = theta
        events.append(TightEvent(theta, tuple(S), tuple(T)))
        goods -= ts.goods
        agents -= ts.agents
    return alloc, prices, offsets, events


def solve_1dlad(inst: NBInstance, unit_cap: bool = True) -> EquilibriumReport:
    validate_instance(inst)
    u = inst.utilities
    c = inst.disagreement
    n = u.n
    g = LikeGraph.from_utilities(u)
    x = [[ZERO] * n for _ in range(n)]
    p = [ZERO] * n
    q = [ZERO] * n
    events: list[TightEvent] = []

    match = max_matching(g)
    if matching_size(match) == n:
        for i, j in enumerate(match):
            x[i][j] = ONE
            q[i] = 1 / (1 - c[i])
    else:
        cover = min_vertex_cover_min_agents(g)
        inner = max_matching(g, cover.A2, cover.G2)
        for i in cover.A2:
            x[i][inner[i]] = ONE
            q[i] = 1 / (1 - c[i])
        liked = {i: g.adj[i] for i in cover.A1}
        alloc, prices, offsets, events = flow_subroutine(cover.A1, cover.G1, c, liked, unit_cap)
        for (i, j), share in alloc.items():
            x[i][j] = share
        for j, pj in prices.items():
            p[j] = pj
        for i, qi in offsets.items():
            q[i] = qi
        _northwest_fill(x)

    x = as_matrix(x)
    v = utilities_of_allocation(u, x)
    money = tuple(vi / (vi - ci) for vi, ci in zip(v, c))
    return EquilibriumReport(
        kind="1dlad",
        allocation=x,
        prices=PriceSystem(p, q, money),
        utilities=v,
        verdict=verify_1dlad_kkt(inst, x, p, q),
        events=tuple(events),
    )
