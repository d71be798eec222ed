"""Floating-point oracle for the Nash-bargaining objective.

Used only to cross-check the exact solver in tests and to derive expected
values; it never feeds a verdict.
"""
from __future__ import annotations

import cvxpy as cp
import numpy as np

from .errors import Infeasible
from .model import NBInstance

ORACLE_MAX_N = 8


def _matching_polytope(n: int):
    x = cp.Variable((n, n), nonneg=True)
    return x, [cp.sum(x, axis=0) == 1, cp.sum(x, axis=1) == 1]


def nb_objective_oracle(inst: NBInstance, tol: float = 1e-10) -> np.ndarray:
    """Maximize ``sum log(v_i - c_i)`` over fractional perfect matchings; returns ``v`` as floats."""
    n = inst.n
    if n > ORACLE_MAX_N:
        raise ValueError(f"oracle limited to n <= {ORACLE_MAX_N}")
    u = np.array([[float(v) for v in row] for row in inst.utilities.rows])
    c = np.array([float(ci) for ci in inst.disagreement])

    # feasibility: can every agent clear its disagreement point at once?
    x, cons = _matching_polytope(n)
    slack = cp.Variable()
    v = cp.sum(cp.multiply(u, x), axis=1)
    cp.Problem(cp.Maximize(slack), cons + [v - c >= slack, slack <= 1]).solve(solver=cp.CLARABEL)
    if slack.value is None or slack.value <= 1e-12:
        raise Infeasible(range(n), range(n))

    x, cons = _matching_polytope(n)
    v = cp.sum(cp.multiply(u, x), axis=1)
    prob = cp.Problem(cp.Maximize(cp.sum(cp.log(v - c))), cons)
    prob.solve(
        solver=cp.CLARABEL,
        tol_gap_abs=tol,
        tol_gap_rel=tol,
        tol_feas=tol,
        max_iter=500,
    )
    if prob.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        raise RuntimeError(f"oracle solver status {prob.status}")
    x0 = np.clip(np.asarray(x.value), 0.0, None)
    return (u * _polish(u, c, x0)).sum(axis=1)


def _objective(u, c, x) -> float:
    gap = (u * x).sum(axis=1) - c
    return float(np.sum(np.log(gap))) if np.all(gap > 0) else -np.inf


def _polish(u, c, x0, support_tol: float = 1e-9, max_iter: int = 100) -> np.ndarray:
    """Newton steps on the support of ``x0``, dropping entries that reach zero.

    The conic solution is accurate in objective but utilities converge only
    like the square root of the objective gap; a few Newton steps fix that.
    Falls back to ``x0`` if polishing would lower the objective.
    """
    n = len(c)
    support = [(i, j) for i in range(n) for j in range(n) if x0[i, j] > support_tol]
    z = np.array([x0[e] for e in support])
    for _ in range(max_iter):
        m = len(support)
        A = np.zeros((2 * n, m))
        B = np.zeros((n, m))
        for k, (i, j) in enumerate(support):
            A[i, k] = A[n + j, k] = 1.0
            B[i, k] = u[i, j]
        gap = B @ z - c
        if np.any(gap <= 0):
            break
        grad = B.T @ (1.0 / gap)
        hess = -(B.T * (1.0 / gap**2)) @ B
        kkt = np.block([[hess, A.T], [A, np.zeros((2 * n, 2 * n))]])
        rhs = np.concatenate([-grad, 1.0 - A @ z])
        dz = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:m]
        if np.max(np.abs(dz)) < 1e-15:
            break
        shrinking = dz < 0
        limit = np.min(-z[shrinking] / dz[shrinking]) if np.any(shrinking) else np.inf
        step = min(1.0, limit)
        while step > 1e-12 and np.any(B @ (z + step * dz) - c <= 0):
            step /= 2
        z = np.clip(z + step * dz, 0.0, None)
        if step == limit:
            keep = z > 0
            support = [e for e, k in zip(support, keep) if k]
            z = z[keep]
    x = np.zeros((n, n))
    for e, ze in zip(support, z):
        x[e] = ze
    ok = np.allclose(x.sum(axis=0), 1, atol=1e-12) and np.allclose(x.sum(axis=1), 1, atol=1e-12)
    # x0 violates the constraints slightly, which can inflate its objective
    if ok and _objective(u, c, x) >= _objective(u, c, x0) - 1e-8:
        return x
    return x0
