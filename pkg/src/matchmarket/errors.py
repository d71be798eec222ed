"""Exception hierarchy.

Validation problems derive from :class:`ValidationError`; problems found while
solving derive from :class:`SolverError`. Every exception names the offending
index or set so the CLI can print something actionable.
"""
from __future__ import annotations


class MarketError(Exception):
    """Base class for everything raised by this package."""


class ValidationError(MarketError, ValueError):
    pass


class NonSquare(ValidationError):
    def __init__(self, detail: str):
        super().__init__(f"matrix is not square: {detail}")


class ShapeMismatch(ValidationError):
    def __init__(self, detail: str):
        super().__init__(f"shape mismatch: {detail}")


class NegativeEntry(ValidationError):
    def __init__(self, where: str, index):
        super().__init__(f"negative entry in {where} at {index}")
        self.where = where
        self.index = index


class NotDoublyStochastic(ValidationError):
    def __init__(self, kind: str, index: int, total):
        super().__init__(f"{kind} {index} sums to {total}, expected 1")
        self.kind = kind
        self.index = index
        self.total = total


class AgentLikesNothing(ValidationError):
    def __init__(self, agent: int):
        super().__init__(f"agent {agent} likes no good")
        self.agent = agent


class NotDichotomous(ValidationError):
    def __init__(self, agent: int):
        super().__init__(f"utility row of agent {agent} is not 0/1")
        self.agent = agent


class MoreThanTwoValues(ValidationError):
    def __init__(self, agent: int):
        super().__init__(f"utility row of agent {agent} has more than two distinct values")
        self.agent = agent


class DisagreementOutOfRange(ValidationError):
    def __init__(self, agent: int, value):
        super().__init__(f"disagreement utility of agent {agent} is {value}, need 0 <= c < 1")
        self.agent = agent
        self.value = value


class NonPositiveBudget(ValidationError):
    def __init__(self, agent: int, value):
        super().__init__(f"budget of agent {agent} is {value}, need > 0")
        self.agent = agent


class NonPositiveScale(ValidationError):
    def __init__(self, r):
        super().__init__(f"price scale factor must be positive, got {r}")


class NonUnitBudgets(ValidationError):
    def __init__(self, agent: int):
        super().__init__(f"budget of agent {agent} is not 1")
        self.agent = agent


class InvalidEpsilon(ValidationError):
    def __init__(self, eps):
        super().__init__(f"epsilon must lie strictly between 0 and 1, got {eps}")


class ThetaBelowOne(ValidationError):
    def __init__(self, theta):
        super().__init__(f"price level {theta} is below 1")


class SolverError(MarketError):
    pass


class Infeasible(SolverError):
    """No fractional perfect matching gives every agent more than its disagreement utility.

    ``goods`` is the witness set S whose neighbourhood T satisfies |S| - c(T) <= 0
    in the residual graph where the failure was detected.
    """

    def __init__(self, goods, agents):
        self.goods = tuple(sorted(goods))
        self.agents = tuple(sorted(agents))
        super().__init__(
            f"infeasible: goods {list(self.goods)} cannot lift agents {list(self.agents)} "
            "above their disagreement utilities"
        )


class ZeroClassUncoverable(SolverError):
    def __init__(self, agents):
        self.agents = tuple(sorted(agents))
        super().__init__(f"agents {list(self.agents)} cannot be matched into zero-priced liked goods")


class FlowDeficit(SolverError):
    def __init__(self, price, got, want):
        self.price = price
        super().__init__(f"price class {price}: max flow {got} falls short of {want}")


class BudgetsDecreased(SolverError):
    def __init__(self, agent: int):
        self.agent = agent
        super().__init__(f"new budget of agent {agent} is below the old one")


class NotAnEquilibrium(SolverError):
    def __init__(self, verdict):
        self.verdict = verdict
        super().__init__(f"starting point is not an HZ equilibrium: {verdict.first_failure()}")


class UnaffordableUnit(SolverError):
    def __init__(self, cheapest, budget):
        super().__init__(f"cheapest good costs {cheapest} which exceeds budget {budget}")


class NoLikedGood(SolverError):
    def __init__(self):
        super().__init__("utility row has no positive entry")


class DisagreementNotExceeded(SolverError):
    def __init__(self, agent: int, v, c):
        self.agent = agent
        super().__init__(f"agent {agent} has utility {v} <= disagreement {c}")


class TooLarge(SolverError):
    def __init__(self, n: int, bound: int):
        super().__init__(f"n = {n} exceeds the exhaustive bound {bound}")
