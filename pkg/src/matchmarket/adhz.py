"""Approximate exchange-market (ADHZ) equilibria by repeated budget updates."""
from __future__ import annotations

from fractions import Fraction

from .errors import InvalidEpsilon
from .hz import reprice_warm_start, solve_hz
from .model import (
    ADHZInstance,
    Check,
    EquilibriumReport,
    HZInstance,
    Matrix,
    PriceSystem,
    TraceStep,
    Vector,
    Verdict,
    as_vector,
    validate_instance,
)
from .rational import as_rational
from .verify import verify_eps_adhz


def _check_epsilon(eps) -> Fraction:
    eps = as_rational(eps)
    if not (0 < eps < 1):
        raise InvalidEpsilon(eps)
    return eps


def budget_update(endowments: Matrix, p, eps) -> Vector:
    """``eps/2 + (1 - eps/2) * (value of agent i's endowment at prices p)``."""
    eps = _check_epsilon(eps)
    p = as_vector(p)
    half = eps / 2
    return tuple(half + (1 - half) * sum((pj * eij for pj, eij in zip(p, row)), Fraction(0)) for row in endowments)


def growth_factor(eps) -> Fraction:
    eps = _check_epsilon(eps)
    return (1 - eps / 2) / (1 - eps)


def iteration_bound(n: int, eps) -> int:
    """``ceil(n * log_r(n / eps)) + 1`` with ``r`` the growth factor, computed without floats.

    ``ceil(n * log_r(y))`` is the least integer ``m`` with ``r**m >= y**n``.
    """
    r = growth_factor(eps)
    target = (Fraction(n) / as_rational(eps)) ** n
    m = 0
    power = Fraction(1)
    while power < target:
        power *= r
        m += 1
    return m + 1


def solve_eps_adhz(inst: ADHZInstance, eps) -> EquilibriumReport:
    """Iterate budgets from the previous prices until no price grew by more than the growth factor.

    The returned report carries the last budgets as ``prices.budgets`` and
    the whole sequence in ``trace``.
    """
    validate_instance(inst)
    eps = _check_epsilon(eps)
    n = inst.n
    r = growth_factor(eps)
    budgets = (eps / 2,) * n
    rep = solve_hz(HZInstance(inst.utilities, budgets))
    trace = [TraceStep(budgets, rep.prices.prices, rep.allocation)]
    while True:
        prev_b, prev_p, prev_x = budgets, rep.prices.prices, rep.allocation
        budgets = budget_update(inst.endowments, prev_p, eps)
        rep = reprice_warm_start(HZInstance(inst.utilities, prev_b), budgets, prev_x, prev_p)
        trace.append(TraceStep(budgets, rep.prices.prices, rep.allocation))
        if all(pj <= r * qj for pj, qj in zip(rep.prices.prices, prev_p)):
            break
    k = len(trace)
    bound = iteration_bound(n, eps)
    p, x = rep.prices.prices, rep.allocation
    verdict = Verdict.merge(
        verify_eps_adhz(inst, x, p, budgets, eps),
        Verdict((Check("iteration_bound", k <= bound, None if k <= bound else k, f"K = {k}, bound {bound}"),)),
    )
    return EquilibriumReport(
        kind="adhz",
        allocation=x,
        prices=PriceSystem(p, None, budgets),
        utilities=rep.utilities,
        iterations=k,
        verdict=verdict,
        trace=tuple(trace),
        epsilon=eps,
        extra={"iteration_bound": bound},
    )
