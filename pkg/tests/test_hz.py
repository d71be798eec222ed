import random
from fractions import Fraction as F
from itertools import combinations

import pytest

from matchmarket import HZInstance, allocation_from_prices, reprice_warm_start, solve_hz, verify_hz
from matchmarket.errors import BudgetsDecreased, NotAnEquilibrium
from matchmarket.hz import effective_budgets, price_classes

from conftest import random_hz


def test_nested_likes_instance():
    report = solve_hz(HZInstance([[1, 0], [1, 1]], [1, 1]))
    assert report.utilities == (1, 1)
    assert report.verdict.ok


def test_shared_good():
    report = solve_hz(HZInstance([[1, 0], [1, 0]], [1, 1]))
    assert report.prices.prices == (2, 0)
    half = F(1, 2)
    assert report.allocation == ((half, half), (half, half))
    assert report.utilities == (half, half)
    assert [e.theta for e in report.events] == [2]


def test_single_agent_spends_its_budget():
    report = solve_hz(HZInstance([[1]], [5]))
    assert report.allocation == ((1,),)
    assert report.utilities == (1,)
    assert report.prices.prices == (5,)
    assert report.verdict.ok


def test_bivalued_utilities_are_normalised():
    report = solve_hz(HZInstance([[5, 2], [3, 3]], [1, 1]))
    assert report.verdict.ok


def test_allocation_at_nested_likes_prices():
    x = allocation_from_prices(HZInstance([[1, 0], [1, 1]], [1, 1]), (1, 0))
    assert x == ((1, 0), (0, 1))


def test_allocation_at_shared_good_prices():
    x = allocation_from_prices(HZInstance([[1, 0], [1, 0]], [1, 1]), (2, 0))
    assert x[0][0] == x[1][0] == F(1, 2)


def test_zero_prices_use_the_matching():
    x = allocation_from_prices(HZInstance([[0, 1], [1, 0]], [1, 1]), (0, 0))
    assert x == ((0, 1), (1, 0))


def test_warm_start_identity():
    inst = HZInstance([[1, 0], [1, 0]], [1, 1])
    base = solve_hz(inst)
    again = reprice_warm_start(inst, inst.budgets, base.allocation, base.prices.prices)
    assert again.allocation == base.allocation and again.prices.prices == base.prices.prices


def test_warm_start_shared_good():
    inst = HZInstance([[1, 0], [1, 0]], [1, 1])
    base = solve_hz(inst)
    warm = reprice_warm_start(inst, (2, 2), base.allocation, base.prices.prices)
    assert warm.prices.prices == (4, 0)
    assert warm.utilities == (F(1, 2), F(1, 2))
    assert warm.verdict.ok


def test_warm_start_rejects_lower_budgets():
    inst = HZInstance([[1, 0], [1, 0]], [1, 1])
    base = solve_hz(inst)
    with pytest.raises(BudgetsDecreased):
        reprice_warm_start(inst, (1, F(1, 2)), base.allocation, base.prices.prices)


def test_warm_start_rejects_non_equilibrium():
    inst = HZInstance([[1, 0], [1, 1]], [1, 1])
    half = F(1, 2)
    with pytest.raises(NotAnEquilibrium):
        reprice_warm_start(inst, (2, 2), ((half, half), (half, half)), (2, 0))


@pytest.mark.parametrize("seed", range(100))
def test_random_solve_and_warm_start(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    inst = random_hz(rng, n)
    base = solve_hz(inst)
    assert base.verdict.ok
    assert all(sum(row) == 1 for row in base.allocation)
    assert all(sum(col) == 1 for col in zip(*base.allocation))
    thetas = [e.theta for e in base.events]
    assert thetas == sorted(set(thetas))

    new_b = tuple(b + F(rng.randint(0, 4), rng.randint(1, 3)) for b in inst.budgets)
    warm = reprice_warm_start(inst, new_b, base.allocation, base.prices.prices)
    assert warm.verdict.ok
    assert all(a >= b for a, b in zip(warm.prices.prices, base.prices.prices))
    # utilities are not guaranteed unique for arbitrary budgets; observed equal on this suite
    assert warm.utilities == solve_hz(HZInstance(inst.utilities, new_b)).utilities


@pytest.mark.parametrize("seed", range(40))
def test_tightness_inequalities_at_termination(seed):
    rng = random.Random(1000 + seed)
    inst = random_hz(rng, rng.randint(1, 6))
    report = solve_hz(inst)
    p = report.prices.prices
    adj = [inst.utilities.liked(i) for i in range(inst.n)]
    beta = effective_budgets(adj, p, inst.budgets)
    for rho, (goods, agents) in price_classes(adj, p).items():
        if rho == 0:
            continue
        for k in range(1, len(goods) + 1):
            for S in combinations(goods, k):
                demand = sum((beta[i] for i in agents if set(adj[i]) & set(S)), F(0))
                assert demand >= rho * k
        assert sum((beta[i] for i in agents), F(0)) == rho * len(goods)


def test_verdict_matches_independent_check():
    inst = HZInstance([[1, 1, 0], [0, 1, 0], [0, 1, 1]], [1, 2, 3])
    report = solve_hz(inst)
    assert verify_hz(inst, report.allocation, report.prices.prices).ok
