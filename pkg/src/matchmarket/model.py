"""Instances, allocations, prices and the small closed-form transformations.

Matrices are tuples of tuples of :class:`~fractions.Fraction`; every container
here is frozen, so values can be shared freely between threads.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import (
    AgentLikesNothing,
    DisagreementOutOfRange,
    MoreThanTwoValues,
    NegativeEntry,
    NonPositiveBudget,
    NonPositiveScale,
    NonSquare,
    NonUnitBudgets,
    NotDichotomous,
    NotDoublyStochastic,
    ShapeMismatch,
)
from .rational import ONE, ZERO, as_rational

Matrix = tuple[tuple[Fraction, ...], ...]
Vector = tuple[Fraction, ...]


def as_vector(values: Iterable) -> Vector:
    return tuple(as_rational(v) for v in values)


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(as_vector(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class UtilityMatrix:
    rows: Matrix

    def __init__(self, rows: Iterable[Iterable]):
        object.__setattr__(self, "rows", as_matrix(rows))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, i: int) -> tuple[Fraction, ...]:
        return self.rows[i]

    @property
    def is_dichotomous(self) -> bool:
        return all(v in (ZERO, ONE) for row in self.rows for v in row)

    @property
    def is_bivalued(self) -> bool:
        return all(len(set(row)) <= 2 for row in self.rows)

    def liked(self, i: int) -> tuple[int, ...]:
        """Goods for which agent ``i`` has positive utility."""
        return tuple(j for j, v in enumerate(self.rows[i]) if v > 0)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self.rows) for j, v in enumerate(row) if v > 0]


@dataclass(frozen=True)
class HZInstance:
    utilities: UtilityMatrix
    budgets: Vector

    def __init__(self, utilities, budgets):
        if not isinstance(utilities, UtilityMatrix):
            utilities = UtilityMatrix(utilities)
        object.__setattr__(self, "utilities", utilities)
        object.__setattr__(self, "budgets", as_vector(budgets))

    kind = "hz"

    @property
    def n(self) -> int:
        return self.utilities.n


@dataclass(frozen=True)
class ADHZInstance:
    utilities: UtilityMatrix
    endowments: Matrix
    names: tuple[str, ...] | None = None

    def __init__(self, utilities, endowments, names=None):
        if not isinstance(utilities, UtilityMatrix):
            utilities = UtilityMatrix(utilities)
        object.__setattr__(self, "utilities", utilities)
        object.__setattr__(self, "endowments", as_matrix(endowments))
        object.__setattr__(self, "names", tuple(names) if names is not None else None)

    kind = "adhz"

    @property
    def n(self) -> int:
        return self.utilities.n


@dataclass(frozen=True)
class NBInstance:
    """Nash-bargaining (1DLAD) instance: dichotomous utilities plus a disagreement point."""

    utilities: UtilityMatrix
    disagreement: Vector

    def __init__(self, utilities, disagreement):
        if not isinstance(utilities, UtilityMatrix):
            utilities = UtilityMatrix(utilities)
        object.__setattr__(self, "utilities", utilities)
        object.__setattr__(self, "disagreement", as_vector(disagreement))

    kind = "1dlad"

    @property
    def n(self) -> int:
        return self.utilities.n


Instance = Union[HZInstance, ADHZInstance, NBInstance]


@dataclass(frozen=True)
class PriceSystem:
    prices: Vector
    offsets: Vector
    budgets: Vector

    def __init__(self, prices, offsets=None, budgets=None):
        prices = as_vector(prices)
        n = len(prices)
        object.__setattr__(self, "prices", prices)
        object.__setattr__(self, "offsets", as_vector(offsets) if offsets is not None else (ZERO,) * n)
        object.__setattr__(self, "budgets", as_vector(budgets) if budgets is not None else (ZERO,) * n)


@dataclass(frozen=True)
class Check:
    """Outcome of one named condition; failures carry a witness and the violated relation."""

    name: str
    passed: bool
    witness: object = None
    detail: str = ""


@dataclass(frozen=True)
class Verdict:
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def first_failure(self) -> Check | None:
        fails = self.failures()
        return fails[0] if fails else None

    def by_name(self) -> dict[str, bool]:
        out: dict[str, bool] = {}
        for c in self.checks:
            out[c.name] = out.get(c.name, True) and c.passed
        return out

    @classmethod
    def merge(cls, *verdicts: "Verdict") -> "Verdict":
        return cls(tuple(c for v in verdicts for c in v.checks))


@dataclass(frozen=True)
class TraceStep:
    budgets: Vector
    prices: Vector
    allocation: Matrix


@dataclass(frozen=True)
class TightEvent:
    theta: Fraction
    goods: tuple[int, ...]
    agents: tuple[int, ...]


@dataclass(frozen=True)
class EquilibriumReport:
    kind: str
    allocation: Matrix
    prices: PriceSystem
    utilities: Vector
    iterations: int = 1
    verdict: Verdict | None = None
    trace: tuple[TraceStep, ...] = ()
    events: tuple[TightEvent, ...] = ()
    epsilon: Fraction | None = None
    extra: dict = field(default_factory=dict, compare=False)


# ---------------------------------------------------------------- validation


def _check_square(m: Sequence[Sequence], what: str) -> int:
    n = len(m)
    if n == 0:
        raise NonSquare(f"{what} is empty")
    for i, row in enumerate(m):
        if len(row) != n:
            raise NonSquare(f"{what} row {i} has {len(row)} entries, expected {n}")
    return n


def _check_doubly_stochastic(m: Matrix, what: str = "endowments") -> None:
    n = len(m)
    for i, row in enumerate(m):
        for j, v in enumerate(row):
            if v < 0:
                raise NegativeEntry(what, (i, j))
    for i, row in enumerate(m):
        s = sum(row, ZERO)
        if s != 1:
            raise NotDoublyStochastic("row", i, s)
    for j in range(n):
        s = sum((m[i][j] for i in range(n)), ZERO)
        if s != 1:
            raise NotDoublyStochastic("col", j, s)


def validate_utilities(u: UtilityMatrix) -> UtilityMatrix:
    _check_square(u.rows, "utilities")
    for i, row in enumerate(u.rows):
        for j, v in enumerate(row):
            if v < 0:
                raise NegativeEntry("utilities", (i, j))
    if u.is_dichotomous:
        for i, row in enumerate(u.rows):
            if not any(row):
                raise AgentLikesNothing(i)
    return u


def validate_instance(inst: Instance) -> Instance:
    """Return ``inst`` unchanged if every invariant of its type holds, else raise."""
    u = validate_utilities(inst.utilities)
    n = u.n
    if isinstance(inst, HZInstance):
        if len(inst.budgets) != n:
            raise ShapeMismatch(f"{len(inst.budgets)} budgets for {n} agents")
        for i, b in enumerate(inst.budgets):
            if b <= 0:
                raise NonPositiveBudget(i, b)
    elif isinstance(inst, ADHZInstance):
        _check_square(inst.endowments, "endowments")
        if len(inst.endowments) != n:
            raise ShapeMismatch(f"{len(inst.endowments)}x{len(inst.endowments)} endowments for {n} agents")
        _check_doubly_stochastic(inst.endowments)
    elif isinstance(inst, NBInstance):
        if len(inst.disagreement) != n:
            raise ShapeMismatch(f"{len(inst.disagreement)} disagreement values for {n} agents")
        for i, row in enumerate(u.rows):
            if any(v not in (ZERO, ONE) for v in row):
                raise NotDichotomous(i)
        for i, c in enumerate(inst.disagreement):
            if not (0 <= c < 1):
                raise DisagreementOutOfRange(i, c)
    else:
        raise TypeError(f"not an instance: {type(inst).__name__}")
    return inst


def check_matching(x: Matrix) -> None:
    """Raise unless ``x`` is a fractional perfect matching."""
    _check_square(x, "allocation")
    _check_doubly_stochastic(x, "allocation")


# ------------------------------------------------------------ transformations


def utilities_of_allocation(u: UtilityMatrix | Matrix, x: Matrix) -> Vector:
    rows = u.rows if isinstance(u, UtilityMatrix) else u
    if len(rows) != len(x) or any(len(a) != len(b) for a, b in zip(rows, x)):
        raise ShapeMismatch("utility matrix and allocation differ in shape")
    return tuple(sum((uij * xij for uij, xij in zip(ur, xr)), ZERO) for ur, xr in zip(rows, x))


def bivalued_normalize(u: UtilityMatrix) -> tuple[UtilityMatrix, tuple[tuple[Fraction, Fraction], ...]]:
    """Split a bi-valued matrix into a 0/1 matrix and per-agent ``(low, high)`` values.

    Row ``i`` of the input equals ``low + (high - low) * d[i]`` for the returned
    0/1 row ``d[i]``. A constant row becomes all ones with ``low == high``.
    """
    rows = []
    maps = []
    for i, row in enumerate(u.rows):
        values = sorted(set(row))
        if len(values) > 2:
            raise MoreThanTwoValues(i)
        lo, hi = values[0], values[-1]
        rows.append(tuple(ONE if v == hi else ZERO for v in row))
        maps.append((lo, hi))
    return UtilityMatrix(rows), tuple(maps)


def bivalued_reconstruct(d: UtilityMatrix, maps: Sequence[tuple[Fraction, Fraction]]) -> UtilityMatrix:
    return UtilityMatrix(
        tuple(lo + (hi - lo) * v for v in row) for row, (lo, hi) in zip(d.rows, maps)
    )


def dichotomous_view(u: UtilityMatrix) -> UtilityMatrix:
    """0/1 matrix the solvers run on (identity for dichotomous input)."""
    if u.is_dichotomous:
        return u
    return bivalued_normalize(u)[0]


def scale_prices(p: Sequence, r) -> Vector:
    """Map every price ``p_j`` to ``1 + r (p_j - 1)``; equilibria survive this for ``r > 0``."""
    r = as_rational(r)
    if r <= 0:
        raise NonPositiveScale(r)
    return tuple(ONE + r * (as_rational(pj) - ONE) for pj in p)


def hz_to_adhz(hz: HZInstance) -> ADHZInstance:
    for i, b in enumerate(hz.budgets):
        if b != 1:
            raise NonUnitBudgets(i)
    n = hz.n
    share = Fraction(1, n)
    return ADHZInstance(hz.utilities, tuple((share,) * n for _ in range(n)))


COUNTEREXAMPLE_NAMES = ("s", "t", "a", "b", "c", "d", "e", "f", "g", "h")

_COUNTEREXAMPLE_EDGES = {
    "s": "ab",
    "a": "cd",
    "b": "fg",
    "c": "e",
    "d": "e",
    "f": "h",
    "g": "h",
    "e": "t",
    "h": "t",
    "t": "s",
}


def counterexample_instance() -> ADHZInstance:
    """Ten-agent dichotomous exchange market with a strongly connected demand graph and no equilibrium.

    Agent ``k`` owns good ``k``; ``f``, ``g`` and ``h`` label the three nodes the
    drawing leaves unnamed (``b -> f, g -> h -> t``).
    """
    idx = {name: k for k, name in enumerate(COUNTEREXAMPLE_NAMES)}
    n = len(COUNTEREXAMPLE_NAMES)
    u = [[0] * n for _ in range(n)]
    for src, targets in _COUNTEREXAMPLE_EDGES.items():
        for t in targets:
            u[idx[src]][idx[t]] = 1
    return ADHZInstance(u, identity(n), names=COUNTEREXAMPLE_NAMES)


def demand_graph(inst: ADHZInstance) -> list[list[int]]:
    """Adjacency lists: ``i -> k`` iff ``i`` likes some good that ``k`` is endowed with."""
    n = inst.n
    out = []
    for i in range(n):
        liked = inst.utilities.liked(i)
        out.append([k for k in range(n) if any(inst.endowments[k][j] > 0 for j in liked)])
    return out


def is_strongly_connected(adj: Sequence[Sequence[int]]) -> bool:
    n = len(adj)
    rev: list[list[int]] = [[] for _ in range(n)]
    for i, nbrs in enumerate(adj):
        for k in nbrs:
            rev[k].append(i)

    def reach(graph) -> int:
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in graph[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen)

    return reach(adj) == n and reach(rev) == n
