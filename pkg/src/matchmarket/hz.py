"""HZ equilibria for dichotomous (or bi-valued) utilities with arbitrary positive budgets.

Prices start from a minimum vertex cover: goods outside the cover are free,
goods in it start at the smallest budget among the agents who only like
covered goods. Unfrozen prices then rise together; whenever a set of goods
becomes tight (its price equals the effective budgets of the agents whose
cheapest liked goods lie in it) its prices freeze. The allocation is read off
one max flow per price class.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import BudgetsDecreased, FlowDeficit, NotAnEquilibrium, ZeroClassUncoverable
from .flow import INFINITE, FlowNetwork, MaxFlow
from .graph import LikeGraph, max_matching, min_vertex_cover_min_agents
from .model import (
    EquilibriumReport,
    HZInstance,
    Matrix,
    PriceSystem,
    TightEvent,
    Vector,
    as_matrix,
    as_vector,
    dichotomous_view,
    utilities_of_allocation,
    validate_instance,
)
from .parametric import find_tight_set
from .rational import ZERO
from .verify import verify_hz, verify_hz_equilibrium


def cheapest_liked_prices(adj: Sequence[Sequence[int]], p: Sequence[Fraction]) -> list[Fraction]:
    return [min(p[j] for j in nb) for nb in adj]


def price_classes(adj: Sequence[Sequence[int]], p: Sequence[Fraction]) -> dict[Fraction, tuple[list[int], list[int]]]:
    """Map each price ``rho`` to ``(goods priced rho, agents whose cheapest liked good costs rho)``."""
    cheapest = cheapest_liked_prices(adj, p)
    classes: dict[Fraction, tuple[list[int], list[int]]] = {}
    for j, pj in enumerate(p):
        classes.setdefault(pj, ([], []))[0].append(j)
    for i, r in enumerate(cheapest):
        classes[r][1].append(i)
    return dict(sorted(classes.items()))


def effective_budgets(adj, p, b) -> Vector:
    """``min(b_i, cheapest liked price)`` per agent."""
    return tuple(min(bi, r) for bi, r in zip(b, cheapest_liked_prices(adj, p)))


def _northwest_fill(x: list[list[Fraction]]) -> None:
    """Complete ``x`` to a doubly-stochastic matrix, ascending agents then goods."""
    n = len(x)
    row_left = [1 - sum(r, ZERO) for r in x]
    col_left = [1 - sum((x[i][j] for i in range(n)), ZERO) for j in range(n)]
    i = j = 0
    while i < n and j < n:
        if row_left[i] == 0:
            i += 1
            continue
        if col_left[j] == 0:
            j += 1
            continue
        amt = min(row_left[i], col_left[j])
        x[i][j] += amt
        row_left[i] -= amt
        col_left[j] -= amt


def allocation_from_prices(inst: HZInstance, p: Sequence) -> Matrix:
    """Equilibrium allocation supported by prices ``p``.

    Each positive price class gets its own network: source to agent with
    capacity ``min(b_i, rho)``, liked edges uncapacitated, good to sink with
    capacity ``rho``. Both sides have to saturate. Agents facing a free liked
    good are matched into free goods, and every row is topped up with free
    goods in northwest-corner order.
    """
    p = as_vector(p)
    u = dichotomous_view(inst.utilities)
    n = u.n
    adj = [u.liked(i) for i in range(n)]
    b = inst.budgets
    x = [[ZERO] * n for _ in range(n)]
    for rho, (goods, agents) in price_classes(adj, p).items():
        if rho == 0:
            match = max_matching(LikeGraph(n, tuple(tuple(a) for a in adj)), agents, goods)
            missing = [i for i in agents if match[i] < 0]
            if missing:
                raise ZeroClassUncoverable(missing)
            for i in agents:
                x[i][match[i]] = Fraction(1)
            continue
        good_set = set(goods)
        aidx = {i: 1 + k for k, i in enumerate(agents)}
        gidx = {j: 1 + len(agents) + k for k, j in enumerate(goods)}
        sink = 1 + len(agents) + len(goods)
        net = FlowNetwork(sink + 1, 0, sink)
        caps = {i: min(b[i], rho) for i in agents}
        for i in agents:
            net.add_arc(0, aidx[i], caps[i])
        liked_arcs = []
        for i in agents:
            for j in adj[i]:
                if j in good_set:
                    liked_arcs.append((net.add_arc(aidx[i], gidx[j], INFINITE), i, j))
        for j in goods:
            net.add_arc(gidx[j], sink, rho)
        mf = MaxFlow(net)
        if mf.value != rho * len(goods):
            raise FlowDeficit(rho, mf.value, rho * len(goods))
        supply = sum(caps.values(), ZERO)
        if mf.value != supply:
            raise FlowDeficit(rho, mf.value, supply)
        for k, i, j in liked_arcs:
            x[i][j] = mf.arc_flow(k) / rho
    _northwest_fill(x)
    return as_matrix(x)


def _raise_prices(adj, budgets, p: list[Fraction], pending: set[int]) -> list[TightEvent]:
    """Raise the lowest pending price tier until a set goes tight or it meets the next tier.

    ``p`` is updated in place. Tight sets are frozen with the agents whose
    cheapest liked goods they contain.
    """
    n = len(adj)
    assigned: set[int] = set()
    events: list[TightEvent] = []
    pieces = {i: ((Fraction(1), ZERO), (ZERO, budgets[i])) for i in range(n)}
    while pending:
        rho = min(p[j] for j in pending)
        tier = {j for j in pending if p[j] == rho}
        higher = [p[j] for j in pending if p[j] > rho]
        nxt = min(higher) if higher else None
        agents = [
            i
            for i in range(n)
            if i not in assigned and any(j in tier for j in adj[i]) and min(p[j] for j in adj[i]) == rho
        ]
        ts = find_tight_set(tier, agents, {i: adj[i] for i in agents}, pieces, rho)
        if nxt is not None and ts.theta >= nxt:
            for j in tier:
                p[j] = nxt
            continue
        for j in tier:
            p[j] = ts.theta
        pending -= ts.goods
        assigned |= ts.agents
        events.append(TightEvent(ts.theta, tuple(sorted(ts.goods)), tuple(sorted(ts.agents))))
    return events


def _report(inst: HZInstance, p, events) -> EquilibriumReport:
    x = allocation_from_prices(inst, p)
    p = tuple(p)
    return EquilibriumReport(
        kind="hz",
        allocation=x,
        prices=PriceSystem(p, None, inst.budgets),
        utilities=utilities_of_allocation(inst.utilities, x),
        verdict=verify_hz(inst, x, p),
        events=tuple(events),
    )


def solve_hz(inst: HZInstance) -> EquilibriumReport:
    validate_instance(inst)
    u = dichotomous_view(inst.utilities)
    n = u.n
    adj = [u.liked(i) for i in range(n)]
    cover = min_vertex_cover_min_agents(LikeGraph.from_utilities(u))
    p = [ZERO] * n
    if cover.A1:
        start = min(inst.budgets[i] for i in cover.A1)
        for j in cover.G1:
            p[j] = start
    events = _raise_prices(adj, inst.budgets, p, set(cover.G1))
    return _report(inst, p, events)


def reprice_warm_start(inst: HZInstance, new_budgets, x, p) -> EquilibriumReport:
    """New equilibrium for budgets ``new_budgets >= inst.budgets`` with prices no lower than ``p``.

    ``(x, p)`` must be an equilibrium for ``inst.budgets``. Positive prices are
    first lifted to at least the smallest new budget among agents buying at a
    positive price (where a fresh solve would start them), then tiers rise
    as in :func:`solve_hz`.
    """
    validate_instance(inst)
    new_b = as_vector(new_budgets)
    x = as_matrix(x)
    p = as_vector(p)
    for i, (old, new) in enumerate(zip(inst.budgets, new_b)):
        if new < old:
            raise BudgetsDecreased(i)
    verdict = verify_hz_equilibrium(inst.utilities, inst.budgets, x, p)
    if not verdict.ok:
        raise NotAnEquilibrium(verdict)
    new_inst = HZInstance(inst.utilities, new_b)
    validate_instance(new_inst)
    if new_b == inst.budgets:
        return EquilibriumReport(
            kind="hz",
            allocation=x,
            prices=PriceSystem(p, None, new_b),
            utilities=utilities_of_allocation(inst.utilities, x),
            verdict=verdict,
        )
    u = dichotomous_view(inst.utilities)
    n = u.n
    adj = [u.liked(i) for i in range(n)]
    cheapest = cheapest_liked_prices(adj, p)
    paying = [new_b[i] for i in range(n) if cheapest[i] > 0]
    prices = list(p)
    if paying:
        floor = min(paying)
        prices = [max(pj, floor) if pj > 0 else pj for pj in p]
    pending = {j for j in range(n) if prices[j] > 0}
    events = _raise_prices(adj, new_b, prices, pending)
    return _report(new_inst, prices, events)
