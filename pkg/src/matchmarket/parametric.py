"""Finding the first set of goods that goes tight under a uniformly rising price.

Goods in play all carry the same price ``theta``. Each agent's money is a
concave, piecewise-linear function of ``theta`` given as the minimum of a few
affine pieces ``slope * theta + intercept``. A set ``S`` of goods is tight
when its total price equals the money of its neighbours ``N(S)``.

The network used throughout is source -> good (capacity ``theta``),
good -> agent (uncapacitated, liked edges), agent -> sink (money). Its max
flow equals ``theta * |goods|`` exactly when no set is over-demanded, and the
goods that cannot reach the sink in the residual graph form the maximal
tight set.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import FlowDeficit, Infeasible
from .flow import INFINITE, FlowNetwork, MaxFlow

Piece = tuple[Fraction, Fraction]


def money_at(pieces: Sequence[Piece], theta: Fraction) -> Fraction:
    return min(a * theta + b for a, b in pieces)


def asymptotic_slope(pieces: Sequence[Piece]) -> Fraction:
    return min(a for a, _ in pieces)


@dataclass(frozen=True)
class TightSet:
    theta: Fraction
    goods: frozenset[int]
    agents: frozenset[int]


class _Market:
    def __init__(self, goods, agents, liked: Mapping[int, Sequence[int]], money: Mapping[int, Sequence[Piece]]):
        self.goods = sorted(goods)
        good_set = set(self.goods)
        self.agents = sorted(agents)
        self.liked = {i: [j for j in liked[i] if j in good_set] for i in self.agents}
        self.money = money
        self.gidx = {j: 1 + k for k, j in enumerate(self.goods)}
        self.aidx = {i: 1 + len(self.goods) + k for k, i in enumerate(self.agents)}
        self.sink = 1 + len(self.goods) + len(self.agents)

    def neighbours(self, goods) -> frozenset[int]:
        goods = set(goods)
        return frozenset(i for i in self.agents if any(j in goods for j in self.liked[i]))

    def excess(self, goods, theta: Fraction) -> Fraction:
        """Money of ``N(S)`` minus the price of ``S``."""
        nb = self.neighbours(goods)
        return sum((money_at(self.money[i], theta) for i in nb), Fraction(0)) - theta * len(goods)

    def network(self, good_cap, agent_cap) -> MaxFlow:
        net = FlowNetwork(self.sink + 1, 0, self.sink)
        for j in self.goods:
            net.add_arc(0, self.gidx[j], good_cap)
        for i in self.agents:
            for j in self.liked[i]:
                net.add_arc(self.gidx[j], self.aidx[i], INFINITE)
        for i in self.agents:
            net.add_arc(self.aidx[i], self.sink, agent_cap(i))
        return MaxFlow(net)

    def flow_at(self, theta: Fraction) -> MaxFlow:
        return self.network(theta, lambda i: money_at(self.money[i], theta))

    def goods_in(self, side) -> frozenset[int]:
        return frozenset(j for j in self.goods if self.gidx[j] in side)

    def root_after(self, goods, lo: Fraction) -> Fraction | None:
        """Smallest ``theta > lo`` where the excess of ``goods`` hits zero (excess at ``lo`` is positive)."""
        nb = self.neighbours(goods)
        points = set()
        for i in nb:
            pcs = self.money[i]
            for a1, b1 in pcs:
                for a2, b2 in pcs:
                    if a1 != a2:
                        t = (b2 - b1) / (a1 - a2)
                        if t > lo:
                            points.add(t)
        prev = lo
        f_prev = self.excess(goods, lo)
        for t in sorted(points):
            f_t = self.excess(goods, t)
            if f_t <= 0:
                return prev + f_prev * (t - prev) / (f_prev - f_t)
            prev, f_prev = t, f_t
        slope = self.excess(goods, prev + 1) - f_prev
        if slope >= 0:
            return None
        return prev - f_prev / slope


def find_tight_set(
    goods,
    agents,
    liked: Mapping[int, Sequence[int]],
    money: Mapping[int, Sequence[Piece]],
    theta0: Fraction,
) -> TightSet:
    """First ``theta >= theta0`` at which a set of ``goods`` goes tight, and the maximal such set.

    Requires that no set is over-demanded at ``theta0``. Raises
    :class:`Infeasible` when the prices can rise forever without any set
    becoming tight; the witness is a set of goods whose neighbours' money
    grows at least as fast as the set's price.
    """
    mk = _Market(goods, agents, liked, money)
    n_goods = len(mk.goods)
    theta = Fraction(theta0)
    while True:
        mf = mk.flow_at(theta)
        want = theta * n_goods
        if mf.value != want:
            raise FlowDeficit(theta, mf.value, want)
        tight = mk.goods_in(mf.maximal_source_side())
        if tight:
            return TightSet(theta, tight, mk.neighbours(tight))

        cand = mk.root_after(mk.goods, theta)
        if cand is None:
            cand = _root_from_asymptote(mk, theta)
        # descend from above until the candidate is over-demand free
        while True:
            mf = mk.flow_at(cand)
            if mf.value == cand * n_goods:
                break
            blocking = mk.goods_in(mf.source_reachable())
            nxt = mk.root_after(blocking, theta)
            if nxt is None or not (theta < nxt < cand):
                raise ArithmeticError(f"tight-set search lost its bracket at {cand}")
            cand = nxt
        theta = cand


def _root_from_asymptote(mk: _Market, theta: Fraction) -> Fraction:
    """Find a set whose excess eventually decreases and return its first root after ``theta``."""
    slopes = {i: asymptotic_slope(mk.money[i]) for i in mk.agents}
    mf = mk.network(Fraction(1), lambda i: slopes[i])
    if mf.value < len(mk.goods):
        s_neg = mk.goods_in(mf.source_reachable())
        root = mk.root_after(s_neg, theta)
        if root is not None:
            return root
    witness = mk.goods_in(mf.maximal_source_side()) or frozenset(mk.goods)
    raise Infeasible(witness, mk.neighbours(witness))
