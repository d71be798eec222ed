import random
from fractions import Fraction as F

import pytest

from matchmarket import NBInstance, agent_money, solve_1dlad
from matchmarket.errors import Infeasible, ThetaBelowOne
from matchmarket.nb import find_tight_set, flow_subroutine
from matchmarket.oracle import nb_objective_oracle

from conftest import feasible_nb_instances


@pytest.mark.parametrize(
    "c, theta, expected",
    [(0, 2, (1, F(1, 2), F(1, 2))), (F(1, 2), 4, (3, F(1, 4), F(3, 4))), (0, 1, (1, 1, 1))],
)
def test_agent_money(c, theta, expected):
    money, gamma, v = agent_money(c, theta)
    assert (money, gamma, v) == expected
    assert money == v / (v - c)
    assert money * gamma == v


def test_theta_below_one():
    with pytest.raises(ThetaBelowOne):
        agent_money(0, F(1, 2))


def test_tight_set_single_good():
    ts = find_tight_set([0, 1], [0], [F(1, 2), 0], {0: [0], 1: [0]})
    assert ts.theta == 4 and ts.goods == {0}


def test_tight_set_private_goods():
    ts = find_tight_set([0, 1], [0, 1], [0, 0], {0: [0], 1: [1]})
    assert ts.theta == 1 and ts.goods == {0, 1}


def test_tight_set_infeasible():
    with pytest.raises(Infeasible) as info:
        find_tight_set([0, 1], [0], [F(3, 5), F(1, 2)], {0: [0], 1: [0]})
    assert set(info.value.goods) == {0}


def test_flow_single_tight_set():
    alloc, prices, offsets, events = flow_subroutine([0, 1], [0], [F(1, 2), 0], {0: [0], 1: [0]})
    assert prices == {0: 4}
    assert alloc == {(0, 0): F(3, 4), (1, 0): F(1, 4)}
    assert offsets == {}
    assert [e.theta for e in events] == [4]


def test_worked_instance():
    inst = NBInstance([[1, 0], [1, 0]], [F(1, 2), 0])
    report = solve_1dlad(inst)
    assert report.utilities == (F(3, 4), F(1, 4))
    assert report.prices.prices == (4, 0)
    assert report.prices.offsets == (0, 0)
    assert report.allocation == ((F(3, 4), F(1, 4)), (F(1, 4), F(3, 4)))
    assert report.verdict.ok and len(report.verdict.checks) == 7


def test_perfect_matching_step():
    report = solve_1dlad(NBInstance([[1, 0], [0, 1]], [F(1, 3), F(1, 3)]))
    assert report.allocation == ((1, 0), (0, 1))
    assert report.prices.prices == (0, 0)
    assert report.prices.offsets == (F(3, 2), F(3, 2))
    assert report.utilities == (1, 1)


def test_zero_disagreement_one_dollar():
    report = solve_1dlad(NBInstance([[1, 0], [1, 0]], [0, 0]))
    assert report.prices.prices == (2, 0)
    assert report.utilities == (F(1, 2), F(1, 2))
    assert report.prices.budgets == (1, 1)


def test_two_stage_instance():
    inst = NBInstance([[1, 0, 0], [1, 0, 0], [1, 1, 0]], [0, 0, 0])
    report = solve_1dlad(inst)
    assert [e.theta for e in report.events] == [1, 2]
    assert report.utilities == (F(1, 2), F(1, 2), 1)
    approx = nb_objective_oracle(inst)
    assert max(abs(float(a) - b) for a, b in zip(report.utilities, approx)) < 1e-9


def test_infeasible_disagreement():
    with pytest.raises(Infeasible) as info:
        solve_1dlad(NBInstance([[1, 0], [1, 0]], [F(3, 5), F(1, 2)]))
    assert list(info.value.goods) == [0] and list(info.value.agents) == [0, 1]


def test_large_disagreement_needs_a_unit_cap():
    # tightening all liked goods at once hands agent 2 more than one unit unless spending is capped
    inst = NBInstance([[0, 0, 1], [0, 1, 0], [0, 1, 1]], [F(7, 10), 0, F(9, 10)])
    literal = solve_1dlad(inst, unit_cap=False)
    assert not literal.verdict.ok
    assert literal.verdict.first_failure().name == "matching"
    capped = solve_1dlad(inst)
    assert capped.verdict.ok
    assert capped.prices.offsets[2] > 0
    approx = nb_objective_oracle(inst)
    assert max(abs(float(a) - b) for a, b in zip(capped.utilities, approx)) < 1e-9


@pytest.mark.parametrize("inst, report", feasible_nb_instances(seed=11, count=60, max_n=7))
def test_random_certificates(inst, report):
    n, c = inst.n, inst.disagreement
    u, x = inst.utilities.rows, report.allocation
    p, q, money = report.prices.prices, report.prices.offsets, report.prices.budgets
    v = report.utilities
    assert report.verdict.ok
    for i in range(n):
        assert money[i] == v[i] / (v[i] - c[i])
        assert sum((p[j] + q[i]) * x[i][j] for j in range(n)) == money[i]
        gamma = max(u[i][j] / (p[j] + q[i]) for j in range(n) if p[j] + q[i] > 0)
        assert gamma == v[i] - c[i]
        assert money[i] - c[i] / gamma == 1
    thetas = [e.theta for e in report.events]
    assert thetas == sorted(set(thetas))
    assert all(t >= 1 for t in thetas)
    for e in report.events:
        # the closed form holds whenever no agent in the set is capped at one unit
        if all(q[i] == 0 for i in e.agents):
            assert e.theta == F(len(e.agents)) / (len(e.goods) - sum(c[i] for i in e.agents))


def test_kkt_implies_no_pareto_improvement():
    rng = random.Random(8)
    checked = 0
    for inst, report in feasible_nb_instances(seed=5, count=20, max_n=5):
        n = inst.n
        x = report.allocation
        v = report.utilities
        for _ in range(50):
            perm = list(range(n))
            rng.shuffle(perm)
            t = F(rng.randint(1, 20), 100)
            y = [[(1 - t) * x[i][j] + t * int(perm[i] == j) for j in range(n)] for i in range(n)]
            w = [sum(a * b for a, b in zip(inst.utilities[i], y[i])) for i in range(n)]
            assert not all(wi > vi for wi, vi in zip(w, v))
            checked += 1
    assert checked == 1000
