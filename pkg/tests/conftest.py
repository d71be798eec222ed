import random
from fractions import Fraction

import pytest
from hypothesis import settings

from matchmarket import ADHZInstance, HZInstance, NBInstance
from matchmarket.errors import Infeasible
from matchmarket.nb import solve_1dlad

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def random_likes(rng: random.Random, n: int, density: float = 0.4) -> list[list[int]]:
    rows = []
    for _ in range(n):
        row = [1 if rng.random() < density else 0 for _ in range(n)]
        if not any(row):
            row[rng.randrange(n)] = 1
        rows.append(row)
    return rows


def random_permutation_matrix(rng: random.Random, n: int) -> list[list[Fraction]]:
    perm = list(range(n))
    rng.shuffle(perm)
    return [[Fraction(int(perm[i] == j)) for j in range(n)] for i in range(n)]


def random_doubly_stochastic(rng: random.Random, n: int, terms: int = 3) -> list[list[Fraction]]:
    weights = [Fraction(rng.randint(1, 6)) for _ in range(terms)]
    total = sum(weights)
    out = [[Fraction(0)] * n for _ in range(n)]
    for w in weights:
        perm = random_permutation_matrix(rng, n)
        for i in range(n):
            for j in range(n):
                out[i][j] += w / total * perm[i][j]
    return out


def random_hz(rng: random.Random, n: int) -> HZInstance:
    budgets = [Fraction(rng.randint(1, 8), rng.randint(1, 4)) for _ in range(n)]
    return HZInstance(random_likes(rng, n), budgets)


def random_adhz(rng: random.Random, n: int) -> ADHZInstance:
    if rng.random() < 0.5:
        endow = random_permutation_matrix(rng, n)
    else:
        endow = random_doubly_stochastic(rng, n)
    return ADHZInstance(random_likes(rng, n), endow)


def grouped_adhz(rng: random.Random, n: int) -> ADHZInstance:
    """Agents in the same group share a block of goods equally, so their endowment rows coincide."""
    goods = list(range(n))
    rng.shuffle(goods)
    endow = [[Fraction(0)] * n for _ in range(n)]
    start = 0
    while start < n:
        size = min(rng.randint(1, 3), n - start)
        block = goods[start : start + size]
        for i in range(start, start + size):
            for j in block:
                endow[i][j] = Fraction(1, size)
        start += size
    return ADHZInstance(random_likes(rng, n), endow)


def random_nb(rng: random.Random, n: int, grid: int = 10) -> NBInstance:
    c = [Fraction(rng.randint(0, grid - 1), grid) for _ in range(n)]
    return NBInstance(random_likes(rng, n, density=0.45), c)


def feasible_nb_instances(seed: int, count: int, max_n: int, grid: int = 10):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        inst = random_nb(rng, rng.randint(1, max_n), grid)
        try:
            out.append((inst, solve_1dlad(inst)))
        except Infeasible:
            continue
    return out


@pytest.fixture
def rng():
    return random.Random(20240611)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
