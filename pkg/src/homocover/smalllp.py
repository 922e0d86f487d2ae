"""Dense two-phase simplex method for small linear programs.

Problems are stated as maximization with ``<=`` and ``==`` rows and an
optional box per variable (variables are free by default).  Bland's rule is
used for both the entering and the leaving variable, so the method cannot
cycle.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .config import PIVOT_TOL
from .errors import LpStallError

__all__ = ["Status", "LinearProgram", "LpOutcome", "solve"]

_OPT_TOL = 1e-9
_FEAS_TOL = 1e-8


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LinearProgram:
    """maximize ``objective @ x`` subject to ``constraints`` and ``bounds``.

    ``constraints`` holds ``(row, relation, rhs)`` triples with relation
    ``"<="`` or ``"=="``.  ``bounds`` is either None (all variables free) or
    one ``(lo, hi)`` pair per variable; ``None`` or an infinite value means
    no bound on that side.
    """

    objective: Sequence[float]
    constraints: list = field(default_factory=list)
    bounds: Optional[Sequence[tuple]] = None

    @classmethod
    def from_arrays(cls, c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, bounds=None):
        cons = []
        if A_ub is not None:
            for row, rhs in zip(np.atleast_2d(A_ub), np.atleast_1d(b_ub)):
                cons.append((row, "<=", float(rhs)))
        if A_eq is not None:
            for row, rhs in zip(np.atleast_2d(A_eq), np.atleast_1d(b_eq)):
                cons.append((row, "==", float(rhs)))
        return cls(objective=c, constraints=cons, bounds=bounds)

    @property
    def n_vars(self):
        return len(self.objective)


@dataclass
class LpOutcome:
    status: Status
    solution: Optional[np.ndarray] = None
    objective_value: float = math.nan

    @property
    def optimal(self):
        return self.status is Status.OPTIMAL


def _bound(v, default):
    if v is None:
        return default
    v = float(v)
    if math.isnan(v):
        raise ValueError("NaN bound")
    return v


def _standardize(lp):
    """Rewrite ``lp`` over nonnegative variables ``y`` with ``x = shift + T y``."""
    c = np.asarray(lp.objective, dtype=float)
    n = c.size
    if n == 0:
        raise ValueError("empty objective")
    bounds = lp.bounds if lp.bounds is not None else [(None, None)] * n
    if len(bounds) != n:
        raise ValueError(f"{len(bounds)} bounds for {n} variables")

    shift = np.zeros(n)
    cols = []  # (variable index, sign)
    box_rows = []  # (column index, upper limit on y)
    for j, (lo, hi) in enumerate(bounds):
        lo = _bound(lo, -math.inf)
        hi = _bound(hi, math.inf)
        if lo > hi:
            return None
        if math.isfinite(lo):
            shift[j] = lo
            cols.append((j, 1.0))
            if math.isfinite(hi):
                box_rows.append((len(cols) - 1, hi - lo))
        elif math.isfinite(hi):
            shift[j] = hi
            cols.append((j, -1.0))
        else:
            cols.append((j, 1.0))
            cols.append((j, -1.0))
    T = np.zeros((n, len(cols)))
    for k, (j, s) in enumerate(cols):
        T[j, k] = s

    rows, rels, rhs = [], [], []
    for row, rel, b in lp.constraints:
        row = np.asarray(row, dtype=float)
        if row.shape != (n,):
            raise ValueError(f"constraint row of shape {row.shape}, expected ({n},)")
        if rel in ("<=", "le"):
            rels.append(True)
        elif rel in ("==", "=", "eq"):
            rels.append(False)
        else:
            raise ValueError(f"unknown relation {rel!r}")
        b = float(b)
        if not (np.all(np.isfinite(row)) and math.isfinite(b)):
            raise ValueError("non-finite constraint data")
        rows.append(row @ T)
        rhs.append(b - row @ shift)
    for k, ub in box_rows:
        e = np.zeros(len(cols))
        e[k] = 1.0
        rows.append(e)
        rels.append(True)
        rhs.append(ub)
    A = np.array(rows).reshape(len(rows), len(cols))
    return c @ T, A, np.array(rhs), np.array(rels, dtype=bool), T, shift


class _Tableau:
    def __init__(self, A, b, is_ineq):
        m, n = A.shape
        sign = np.where(b < 0, -1.0, 1.0)
        A = A * sign[:, None]
        b = b * sign
        n_slack = int(is_ineq.sum())
        needs_art = ~is_ineq | (sign < 0)
        n_art = int(needs_art.sum())
        self.n_struct = n
        self.n_slack = n_slack
        self.n_art = n_art
        width = n + n_slack + n_art
        T = np.zeros((m + 1, width + 1))
        T[:m, :n] = A
        T[:m, -1] = b
        basis = np.empty(m, dtype=int)
        s = a = 0
        for i in range(m):
            if is_ineq[i]:
                T[i, n + s] = sign[i]
                if sign[i] > 0:
                    basis[i] = n + s
                s += 1
            if needs_art[i]:
                T[i, n + n_slack + a] = 1.0
                basis[i] = n + n_slack + a
                a += 1
        self.T = T
        self.basis = basis

    @property
    def m(self):
        return self.T.shape[0] - 1

    def set_objective(self, cost):
        """Install ``maximize cost @ z``; reduced costs live in the last row."""
        T = self.T
        T[-1, :] = 0.0
        T[-1, : cost.size] = -cost
        for i, j in enumerate(self.basis):
            if T[-1, j] != 0.0:
                T[-1] -= T[-1, j] * T[i]

    def pivot(self, r, s):
        T = self.T
        T[r] /= T[r, s]
        col = T[:, s].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        self.basis[r] = s

    def run(self, n_cols, max_iter):
        """Bland's-rule iterations over the first ``n_cols`` columns."""
        T = self.T
        for _ in range(max_iter):
            red = T[-1, :n_cols]
            entering = np.flatnonzero(red < -_OPT_TOL)
            if entering.size == 0:
                return Status.OPTIMAL
            s = int(entering[0])
            col = T[:-1, s]
            cand = np.flatnonzero(col > PIVOT_TOL)
            if cand.size == 0:
                return Status.UNBOUNDED
            ratios = T[cand, -1] / col[cand]
            best = ratios.min()
            ties = cand[ratios <= best + 1e-12 * max(1.0, abs(best))]
            r = int(ties[np.argmin(self.basis[ties])])
            self.pivot(r, s)
        raise LpStallError(f"simplex did not terminate in {max_iter} pivots")


def solve(lp: LinearProgram, max_iter: Optional[int] = None) -> LpOutcome:
    std = _standardize(lp)
    if std is None:
        return LpOutcome(Status.INFEASIBLE)
    cost, A, b, is_ineq, Tmap, shift = std
    m, n = A.shape
    if m == 0:
        if np.any(cost > _OPT_TOL):
            return LpOutcome(Status.UNBOUNDED)
        x = shift.copy()
        return LpOutcome(Status.OPTIMAL, x, float(np.asarray(lp.objective, float) @ x))

    tab = _Tableau(A, b, is_ineq)
    if max_iter is None:
        max_iter = 50 * (m + tab.T.shape[1])
    n_real = tab.n_struct + tab.n_slack
    scale = max(1.0, float(np.abs(b).max()))

    if tab.n_art:
        phase1 = np.zeros(tab.T.shape[1] - 1)
        phase1[n_real:] = -1.0
        tab.set_objective(phase1)
        tab.run(tab.T.shape[1] - 1, max_iter)
        if tab.T[-1, -1] < -_FEAS_TOL * scale:
            return LpOutcome(Status.INFEASIBLE)
        # drive artificials out of the basis; drop rows that are redundant
        keep = []
        for i in range(tab.m):
            if tab.basis[i] >= n_real:
                row = tab.T[i, :n_real]
                nz = np.flatnonzero(np.abs(row) > PIVOT_TOL)
                if nz.size:
                    tab.pivot(i, int(nz[0]))
                    keep.append(i)
            else:
                keep.append(i)
        T = tab.T
        tab.T = np.vstack([T[keep][:, list(range(n_real)) + [-1]], T[-1:, list(range(n_real)) + [-1]]])
        tab.basis = tab.basis[keep]

    full_cost = np.zeros(tab.T.shape[1] - 1)
    full_cost[: tab.n_struct] = cost
    tab.set_objective(full_cost)
    status = tab.run(tab.T.shape[1] - 1, max_iter)
    if status is Status.UNBOUNDED:
        return LpOutcome(Status.UNBOUNDED)

    y = np.zeros(tab.T.shape[1] - 1)
    y[tab.basis] = tab.T[:-1, -1]
    x = shift + Tmap @ y[: tab.n_struct]
    _check_feasible(lp, x)
    return LpOutcome(Status.OPTIMAL, x, float(np.asarray(lp.objective, float) @ x))


def _check_feasible(lp, x):
    for row, rel, b in lp.constraints:
        lhs = float(np.asarray(row, float) @ x)
        slack = 1e-8 * max(1.0, abs(float(b)), float(np.abs(row).max(initial=0.0)) * float(np.abs(x).max(initial=0.0)))
        bad = lhs > b + slack if rel in ("<=", "le") else abs(lhs - b) > slack
        if bad:
            raise LpStallError(f"reported optimum violates a constraint by {lhs - b:.3g}")
    if lp.bounds is not None:
        for xj, (lo, hi) in zip(x, lp.bounds):
            lo = _bound(lo, -math.inf)
            hi = _bound(hi, math.inf)
            if xj < lo - 1e-8 * max(1.0, abs(lo)) or xj > hi + 1e-8 * max(1.0, abs(hi)):
                raise LpStallError("reported optimum violates a variable bound")
