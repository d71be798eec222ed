"""Single-agent misreport audit for the Nash-bargaining mechanism.

The disagreement vector is public and fixed; an agent may only lie about
which goods it likes. Its true utility is always evaluated with the true row.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator

from .errors import Infeasible
from .model import NBInstance, UtilityMatrix, validate_instance
from .nb import solve_1dlad
from .rational import ZERO


def _true_utility(row, x_row) -> Fraction:
    return sum((a * b for a, b in zip(row, x_row)), ZERO)


def misreport_audit(inst: NBInstance, agent: int, reported_row) -> tuple[Fraction, Fraction]:
    """``(true utility when honest, true utility when reporting reported_row)``.

    Raises :class:`Infeasible` if the misreported instance has no solution.
    """
    true_row = inst.utilities[agent]
    honest = solve_1dlad(inst)
    rows = list(inst.utilities.rows)
    rows[agent] = tuple(Fraction(v) for v in reported_row)
    lying = NBInstance(UtilityMatrix(rows), inst.disagreement)
    validate_instance(lying)
    out = solve_1dlad(lying)
    return _true_utility(true_row, honest.allocation[agent]), _true_utility(true_row, out.allocation[agent])


def dichotomous_rows(n: int) -> Iterator[tuple[int, ...]]:
    """All nonzero 0/1 rows of length ``n``."""
    for bits in product((0, 1), repeat=n):
        if any(bits):
            yield bits


@dataclass
class AuditSummary:
    checked: int = 0
    skipped: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def audit_instance(inst: NBInstance, exhaustive: bool = True, summary: AuditSummary | None = None) -> AuditSummary:
    """Try misreports for every agent: all nonzero 0/1 rows, or only single flips of the true row."""
    summary = summary if summary is not None else AuditSummary()
    n = inst.n
    honest = solve_1dlad(inst)
    every_row = list(dichotomous_rows(n))
    for agent in range(n):
        true_row = inst.utilities[agent]
        gain_honest = _true_utility(true_row, honest.allocation[agent])
        for row in every_row if exhaustive else single_flip_rows(true_row):
            if tuple(Fraction(v) for v in row) == tuple(true_row):
                continue
            rows_ = list(inst.utilities.rows)
            rows_[agent] = row
            try:
                out = solve_1dlad(NBInstance(rows_, inst.disagreement))
            except Infeasible:
                summary.skipped += 1
                continue
            summary.checked += 1
            gain_lie = _true_utility(true_row, out.allocation[agent])
            if gain_lie > gain_honest:
                summary.violations.append(
                    {"agent": agent, "report": list(row), "honest": gain_honest, "misreport": gain_lie}
                )
    return summary


def single_flip_rows(row) -> list[tuple[int, ...]]:
    """Reports differing from ``row`` in exactly one position (zero rows dropped)."""
    out = []
    base = [1 if v > 0 else 0 for v in row]
    for j in range(len(base)):
        r = list(base)
        r[j] ^= 1
        if any(r):
            out.append(tuple(r))
    return out
