import math
import random
import time
from fractions import Fraction as F

import pytest

from matchmarket import ADHZInstance, budget_update, counterexample_instance, iteration_bound, solve_eps_adhz
from matchmarket.errors import InvalidEpsilon
from matchmarket.model import identity, utilities_of_allocation

from conftest import grouped_adhz, random_adhz


def test_budgets_from_zero_prices():
    assert budget_update(identity(3), (0, 0, 0), F(1, 4)) == (F(1, 8),) * 3


def test_budget_update_substitution():
    assert budget_update(identity(2), (F(1, 4), F(1, 4)), F(1, 2)) == (F(7, 16), F(7, 16))


@pytest.mark.parametrize("eps", [0, 1, F(-1, 2), F(3, 2)])
def test_epsilon_range(eps):
    with pytest.raises(InvalidEpsilon):
        budget_update(identity(1), (0,), eps)


def test_iteration_bound_small_case():
    # 1.5**7 is the first power of 3/2 reaching (2 / (1/2))**2 = 16
    assert iteration_bound(2, F(1, 2)) == 8


@pytest.mark.parametrize("n, eps", [(1, F(1, 2)), (3, F(1, 4)), (7, F(1, 10)), (20, F(1, 3))])
def test_iteration_bound_matches_float_logs(n, eps):
    r = (1 - eps / 2) / (1 - eps)
    approx = n * math.log(n / eps) / math.log(r)
    assert iteration_bound(n, eps) == math.ceil(approx - 1e-9) + 1


def test_symmetric_trace():
    report = solve_eps_adhz(ADHZInstance([[1, 1], [1, 1]], identity(2)), F(1, 2))
    prices = [step.prices for step in report.trace]
    assert prices == [(F(1, 4),) * 2, (F(7, 16),) * 2, (F(37, 64),) * 2]
    assert report.iterations == 3
    assert report.prices.prices == (F(37, 64),) * 2
    assert report.utilities == (1, 1)
    assert report.verdict.ok


def test_counterexample_at_one_tenth():
    inst = counterexample_instance()
    start = time.perf_counter()
    report = solve_eps_adhz(inst, F(1, 10))
    assert time.perf_counter() - start < 1.0
    assert report.verdict.ok


@pytest.mark.parametrize("eps", [F(1, 2), F(1, 7)])
def test_perfect_matching_gives_everyone_a_unit(eps):
    inst = ADHZInstance([[0, 1, 0], [1, 0, 0], [0, 0, 1]], identity(3))
    report = solve_eps_adhz(inst, eps)
    for step in report.trace:
        assert utilities_of_allocation(inst.utilities, step.allocation) == (1, 1, 1)


def check_trace(inst, report, eps):
    n = inst.n
    steps = report.trace
    for prev, cur in zip(steps, steps[1:]):
        assert all(a <= b for a, b in zip(prev.budgets, cur.budgets))
        assert all(a <= b for a, b in zip(prev.prices, cur.prices))
    for step in steps:
        assert sum(step.prices) <= sum(step.budgets) <= n
    assert report.iterations <= iteration_bound(n, eps)
    assert report.verdict.ok


@pytest.mark.parametrize("seed", range(30))
def test_random_trace_invariants(seed):
    rng = random.Random(seed)
    inst = random_adhz(rng, rng.randint(1, 10))
    eps = rng.choice([F(1, 2), F(1, 4), F(1, 10)])
    check_trace(inst, solve_eps_adhz(inst, eps), eps)


@pytest.mark.parametrize("seed", range(15))
def test_equal_endowments_give_equal_budgets(seed):
    rng = random.Random(500 + seed)
    inst = grouped_adhz(rng, rng.randint(2, 9))
    eps = F(1, 4)
    report = solve_eps_adhz(inst, eps)
    check_trace(inst, report, eps)
    rows = inst.endowments
    for step in report.trace:
        for i in range(inst.n):
            for k in range(i):
                if rows[i] == rows[k]:
                    assert step.budgets[i] == step.budgets[k]
