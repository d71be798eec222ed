"""Exact certification of solver outputs.

Every function here is a pure function of the instance and the claimed
solution; nothing looks at solver internals. Failures are reported as
:class:`~matchmarket.model.Check` entries carrying a witness (agent, good,
pair or coalition) and the violated relation written with exact rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import DisagreementNotExceeded, NoLikedGood, TooLarge, UnaffordableUnit
from .flow import INFINITE, FlowNetwork, MaxFlow
from .model import (
    ADHZInstance,
    Check,
    HZInstance,
    Matrix,
    NBInstance,
    UtilityMatrix,
    Verdict,
    as_matrix,
    as_vector,
    bivalued_normalize,
)
from .rational import ONE, ZERO, format_rational as fmt

WEAK_CORE_MAX_N = 12


@dataclass(frozen=True)
class BundleAssessment:
    max_utility: Fraction
    min_cost: Fraction
    cheapest_liked: Fraction | None
    cheapest_overall: Fraction


def optimal_bundle(u_row: Sequence, p: Sequence, b) -> BundleAssessment:
    """Best utility and cheapest cost of a unit bundle within budget ``b``, for a 0/1 row.

    Prices may be negative (they are after scaling with a large factor); the
    closed form only needs the cheapest liked and cheapest overall price.
    """
    u_row = as_vector(u_row)
    p = as_vector(p)
    b = Fraction(b)
    liked = [pj for uj, pj in zip(u_row, p) if uj > 0]
    if not liked:
        raise NoLikedGood()
    rho_l = min(liked)
    rho_0 = min(p)
    if rho_0 > b:
        raise UnaffordableUnit(rho_0, b)
    if rho_l <= b:
        return BundleAssessment(ONE, rho_l, rho_l, rho_0)
    f = (b - rho_0) / (rho_l - rho_0)
    return BundleAssessment(f, f * rho_l + (1 - f) * rho_0, rho_l, rho_0)


def optimal_bundle_enumerated(u_row: Sequence, p: Sequence, b) -> BundleAssessment:
    """Same quantities for any non-negative row, by enumerating supports of size at most two.

    Both linear programs involved (maximize utility, then minimize cost at
    that utility) have only the unit constraint plus one or two inequalities,
    so some optimal vertex uses at most two goods.
    """
    u = as_vector(u_row)
    p = as_vector(p)
    b = Fraction(b)
    n = len(u)
    rho_0 = min(p)
    if rho_0 > b:
        raise UnaffordableUnit(rho_0, b)

    # (utility, cost) of every candidate vertex
    cands: list[tuple[Fraction, Fraction]] = [(u[j], p[j]) for j in range(n) if p[j] <= b]
    for j in range(n):
        for k in range(n):
            if p[j] < b < p[k]:
                lam = (b - p[j]) / (p[k] - p[j])
                cands.append(((1 - lam) * u[j] + lam * u[k], b))
    best = max(c[0] for c in cands)

    costs = [c for ut, c in cands if ut >= best]
    for j in range(n):
        for k in range(n):
            if u[j] < best < u[k]:
                lam = (best - u[j]) / (u[k] - u[j])
                cost = (1 - lam) * p[j] + lam * p[k]
                if cost <= b:
                    costs.append(cost)
    liked = [pj for uj, pj in zip(u, p) if uj > 0]
    return BundleAssessment(best, min(costs), min(liked) if liked else None, rho_0)


def _assess(u_row, p, b) -> BundleAssessment:
    if all(v in (ZERO, ONE) for v in u_row) and any(u_row):
        return optimal_bundle(u_row, p, b)
    return optimal_bundle_enumerated(u_row, p, b)


# ------------------------------------------------------------------ helpers


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), ZERO)


def check_fractional_matching(x: Matrix, n: int) -> Check:
    if len(x) != n or any(len(r) != n for r in x):
        return Check("matching", False, "shape", f"allocation is not {n}x{n}")
    for i, r in enumerate(x):
        for j, v in enumerate(r):
            if v < 0:
                return Check("matching", False, (i, j), f"x[{i}][{j}] = {fmt(v)} < 0")
    for i, r in enumerate(x):
        s = sum(r, ZERO)
        if s != 1:
            return Check("matching", False, ("row", i), f"row {i} sums to {fmt(s)} != 1")
    for j in range(n):
        s = sum((x[i][j] for i in range(n)), ZERO)
        if s != 1:
            return Check("matching", False, ("col", j), f"column {j} sums to {fmt(s)} != 1")
    return Check("matching", True)


def _first(name: str, failures: list[tuple[object, str]]) -> Check:
    if failures:
        witness, detail = failures[0]
        return Check(name, False, witness, detail)
    return Check(name, True)


# --------------------------------------------------------------- HZ / ADHZ


def verify_hz_equilibrium(utilities, budgets, x, p) -> Verdict:
    """Matching, budget, utility-maximizing and cheapest-bundle checks.

    Takes raw utility rows and budgets rather than a validated instance so
    that price systems shifted by :func:`~matchmarket.model.scale_prices`
    (which may carry negative budgets) can be checked too.
    """
    rows = utilities.rows if isinstance(utilities, UtilityMatrix) else as_matrix(utilities)
    b = as_vector(budgets)
    x = as_matrix(x)
    p = as_vector(p)
    n = len(rows)
    m = check_fractional_matching(x, n)
    if m.witness == "shape" or len(p) != n or len(b) != n:
        return Verdict((Check("matching", False, "shape", "allocation, prices or budgets have the wrong length"),))

    over, util, cost = [], [], []
    for i in range(n):
        spend = _dot(p, x[i])
        if spend > b[i]:
            over.append((i, f"agent {i} spends {fmt(spend)} > budget {fmt(b[i])}"))
        v = _dot(rows[i], x[i])
        try:
            best = _assess(rows[i], p, b[i])
        except (UnaffordableUnit, NoLikedGood) as exc:
            util.append((i, f"agent {i}: {exc}"))
            continue
        if v != best.max_utility:
            util.append((i, f"agent {i} gets utility {fmt(v)} != best affordable {fmt(best.max_utility)}"))
        elif spend != best.min_cost:
            cost.append((i, f"agent {i} spends {fmt(spend)} != cheapest optimal cost {fmt(best.min_cost)}"))
    return Verdict((m, _first("budget", over), _first("max_utility", util), _first("min_cost", cost)))


def verify_hz(inst: HZInstance, x, p) -> Verdict:
    return verify_hz_equilibrium(inst.utilities, inst.budgets, x, p)


def verify_eps_adhz(inst: ADHZInstance, x, p, b, eps) -> Verdict:
    """HZ equilibrium for ``b``, budgets inside the epsilon window, equal endowments give equal budgets."""
    eps = Fraction(eps)
    p = as_vector(p)
    b = as_vector(b)
    base = verify_hz_equilibrium(inst.utilities, b, x, p)
    n = inst.n
    if len(p) != n or len(b) != n:
        return base
    lower, upper = [], []
    for i in range(n):
        worth = _dot(p, inst.endowments[i])
        if (1 - eps) * worth > b[i]:
            lower.append((i, f"agent {i}: (1 - eps) * {fmt(worth)} > budget {fmt(b[i])}"))
        if b[i] > eps + worth:
            upper.append((i, f"agent {i}: budget {fmt(b[i])} > eps + {fmt(worth)}"))
    unequal = []
    for i, k in combinations(range(n), 2):
        if inst.endowments[i] == inst.endowments[k] and b[i] != b[k]:
            unequal.append(((i, k), f"agents {i} and {k} share an endowment but have budgets {fmt(b[i])} and {fmt(b[k])}"))
    return Verdict.merge(
        base,
        Verdict((_first("window_lower", lower), _first("window_upper", upper), _first("equal_budgets", unequal))),
    )


def verify_envy_free_equal_type(inst: ADHZInstance, x) -> Verdict:
    x = as_matrix(x)
    rows = inst.utilities.rows
    envy = []
    for i in range(inst.n):
        for k in range(inst.n):
            if i != k and inst.endowments[i] == inst.endowments[k]:
                own, other = _dot(rows[i], x[i]), _dot(rows[i], x[k])
                if own < other:
                    envy.append(((i, k), f"agent {i} values own bundle {fmt(own)} < bundle of {k} {fmt(other)}"))
    return Verdict((_first("envy_free_equal_type", envy),))


def verify_individual_rationality_approx(inst: ADHZInstance, x, eps) -> Verdict:
    eps = Fraction(eps)
    x = as_matrix(x)
    rows = inst.utilities.rows
    bad = []
    for i in range(inst.n):
        got, own = _dot(rows[i], x[i]), _dot(rows[i], inst.endowments[i])
        if got < (1 - eps) * own:
            bad.append((i, f"agent {i} gets {fmt(got)} < (1 - eps) * {fmt(own)}"))
    return Verdict((_first("individual_rationality", bad),))


def _blocking_slack(targets, liked, pool) -> Fraction:
    """Largest ``delta`` such that the pool can give every member ``targets[i] + delta`` units of liked goods.

    Members are keys of ``targets``; a unit cap per member bounds ``delta`` by
    ``1 - max target``. Found by Newton steps on the min cut from above.
    """
    members = sorted(targets)
    delta = min(1 - targets[i] for i in members)
    if delta <= 0:
        return delta
    goods = [j for j in range(len(pool)) if pool[j] > 0]
    aidx = {i: 1 + k for k, i in enumerate(members)}
    gidx = {j: 1 + len(members) + k for k, j in enumerate(goods)}
    sink = 1 + len(members) + len(goods)
    while True:
        net = FlowNetwork(sink + 1, 0, sink)
        for i in members:
            net.add_arc(0, aidx[i], targets[i] + delta)
        for i in members:
            for j in liked[i]:
                if j in gidx:
                    net.add_arc(aidx[i], gidx[j], INFINITE)
        for j in goods:
            net.add_arc(gidx[j], sink, pool[j])
        mf = MaxFlow(net)
        want = sum((targets[i] + delta for i in members), ZERO)
        if mf.value == want:
            return delta
        side = mf.source_reachable()
        X = [i for i in members if aidx[i] in side]
        reach = {j for i in X for j in liked[i] if j in gidx}
        delta = (sum((pool[j] for j in reach), ZERO) - sum((targets[i] for i in X), ZERO)) / len(X)
        if delta <= 0:
            return delta


def verify_weak_core_small(inst: ADHZInstance, x, eps) -> Verdict:
    """No coalition can pool its endowments so every member beats ``v_i / (1 - eps)``.

    Exhaustive over all coalitions, so limited to ``n <= 12``. Exactly
    reaching the factor does not block.
    """
    n = inst.n
    if n > WEAK_CORE_MAX_N:
        raise TooLarge(n, WEAK_CORE_MAX_N)
    eps = Fraction(eps)
    x = as_matrix(x)
    d, maps = bivalued_normalize(inst.utilities)
    rows = inst.utilities.rows
    liked = [d.liked(i) for i in range(n)]
    v = [_dot(rows[i], x[i]) for i in range(n)]
    # target on the amount of liked goods; constant rows can never improve
    target: dict[int, Fraction | None] = {}
    for i, (lo, hi) in enumerate(maps):
        goal = v[i] / (1 - eps)
        target[i] = None if hi == lo else (goal - lo) / (hi - lo)
    for size in range(1, n + 1):
        for coalition in combinations(range(n), size):
            if any(target[i] is None or target[i] >= 1 for i in coalition):
                continue
            pool = [sum((inst.endowments[i][j] for i in coalition), ZERO) for j in range(n)]
            slack = _blocking_slack({i: target[i] for i in coalition}, liked, pool)
            if slack > 0:
                return Verdict((Check("weak_core", False, coalition, f"coalition {list(coalition)} blocks with slack {fmt(slack)}"),))
    return Verdict((Check("weak_core", True),))


# --------------------------------------------------------------------- 1DLAD


def verify_1dlad_kkt(inst: NBInstance, x, p, q) -> Verdict:
    """The six optimality conditions of the Nash-bargaining program, checked exactly."""
    n = inst.n
    x = as_matrix(x)
    p = as_vector(p)
    q = as_vector(q)
    c = inst.disagreement
    rows = inst.utilities.rows
    m = check_fractional_matching(x, n)
    if m.witness == "shape" or len(p) != n or len(q) != n:
        return Verdict((Check("matching", False, "shape", "allocation, prices or offsets have the wrong length"),))
    v = [_dot(rows[i], x[i]) for i in range(n)]
    for i in range(n):
        if v[i] <= c[i]:
            raise DisagreementNotExceeded(i, v[i], c[i])

    k1 = [(i, f"q[{i}] = {fmt(q[i])} < 0") for i in range(n) if q[i] < 0]
    k2 = [(j, f"p[{j}] = {fmt(p[j])} < 0") for j in range(n) if p[j] < 0]
    k3 = []
    for i in range(n):
        s = sum(x[i], ZERO)
        if q[i] > 0 and s != 1:
            k3.append((i, f"q[{i}] > 0 but row {i} sums to {fmt(s)}"))
    k4 = []
    for j in range(n):
        s = sum((x[i][j] for i in range(n)), ZERO)
        if p[j] > 0 and s != 1:
            k4.append((j, f"p[{j}] > 0 but column {j} sums to {fmt(s)}"))
    k5, k6 = [], []
    for i in range(n):
        gamma = 1 / (v[i] - c[i])
        for j in range(n):
            need = rows[i][j] * gamma
            have = p[j] + q[i]
            if have < need:
                k5.append(((i, j), f"p[{j}] + q[{i}] = {fmt(have)} < {fmt(need)}"))
            if x[i][j] > 0 and have != need:
                k6.append(((i, j), f"x[{i}][{j}] > 0 but p[{j}] + q[{i}] = {fmt(have)} != {fmt(need)}"))
    return Verdict(
        (
            m,
            _first("kkt1_offsets_nonnegative", k1),
            _first("kkt2_prices_nonnegative", k2),
            _first("kkt3_offset_row_full", k3),
            _first("kkt4_price_column_full", k4),
            _first("kkt5_bang_per_buck_bound", k5),
            _first("kkt6_tight_on_support", k6),
        )
    )
