"""Dense two-phase tableau simplex with Bland's rule.

Every DEA model in the package is lowered onto :func:`solve` or
:func:`solve_lexicographic`.  Problems are small (tens to a few hundred
columns), so a dense tableau is simple and fast enough.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import LpInputError, SolverError

logger = logging.getLogger(__name__)

MINIMIZE = "min"
MAXIMIZE = "max"

LE, EQ, GE = "<=", "==", ">="
_RELATIONS = {"<=": LE, "<": LE, "==": EQ, "=": EQ, ">=": GE, ">": GE}

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

DEFAULT_TOL = 1e-9
# entries below this are treated as structural zeros when choosing pivots
PIVOT_TOL = 1e-9


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class LpProblem:
    """``sense cost @ x`` subject to ``A @ x (rel) rhs`` and ``lower <= x <= upper``.

    ``upper`` entries may be ``inf`` (no upper bound); lower bounds must be finite.
    """

    cost: np.ndarray
    A: np.ndarray
    relations: tuple
    rhs: np.ndarray
    sense: str = MINIMIZE
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None

    def __post_init__(self):
        cost = np.atleast_1d(np.asarray(self.cost, dtype=float))
        if cost.ndim != 1:
            raise LpInputError("cost must be a vector")
        n = cost.shape[0]
        A = np.asarray(self.A, dtype=float)
        if A.size == 0:
            A = A.reshape(0, n) if A.ndim < 2 or A.shape[1] != n else A
        if A.ndim != 2 or A.shape[1] != n:
            raise LpInputError(f"constraint matrix has shape {A.shape}, expected (R, {n})")
        r = A.shape[0]
        rhs = np.atleast_1d(np.asarray(self.rhs, dtype=float)) if r else np.zeros(0)
        if rhs.shape != (r,):
            raise LpInputError(f"rhs has shape {rhs.shape}, expected ({r},)")
        if isinstance(self.relations, str):
            rels = (self.relations,) * r
        else:
            rels = tuple(self.relations)
        if len(rels) != r:
            raise LpInputError(f"{len(rels)} relations given for {r} rows")
        try:
            rels = tuple(_RELATIONS[x] for x in rels)
        except KeyError as exc:
            raise LpInputError(f"unknown relation {exc.args[0]!r}") from None
        if self.sense not in (MINIMIZE, MAXIMIZE):
            raise LpInputError(f"sense must be 'min' or 'max', got {self.sense!r}")
        lower = np.zeros(n) if self.lower is None else np.asarray(self.lower, dtype=float)
        upper = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float)
        if lower.shape != (n,) or upper.shape != (n,):
            raise LpInputError("bounds must have one entry per variable")
        for name, arr in (("cost", cost), ("matrix", A), ("rhs", rhs), ("lower bound", lower)):
            if not np.all(np.isfinite(arr)):
                raise LpInputError(f"non-finite entry in {name}")
        if np.any(np.isnan(upper)) or np.any(upper == -np.inf):
            raise LpInputError("upper bounds must be finite or +inf")
        if np.any(lower > upper):
            j = int(np.argmax(lower > upper))
            raise LpInputError(f"variable {j}: lower bound {lower[j]} exceeds upper bound {upper[j]}")
        object.__setattr__(self, "cost", _frozen(cost))
        object.__setattr__(self, "A", _frozen(A))
        object.__setattr__(self, "rhs", _frozen(rhs))
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "lower", _frozen(lower))
        object.__setattr__(self, "upper", _frozen(upper))

    @property
    def n_vars(self) -> int:
        return self.cost.shape[0]

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    def with_cost(self, cost, sense: Optional[str] = None) -> "LpProblem":
        return LpProblem(cost, self.A, self.relations, self.rhs, sense or self.sense, self.lower, self.upper)

    def with_row(self, row, relation: str, rhs: float) -> "LpProblem":
        A = np.vstack([self.A, np.asarray(row, dtype=float).reshape(1, -1)])
        return LpProblem(self.cost, A, self.relations + (relation,), np.append(self.rhs, rhs),
                         self.sense, self.lower, self.upper)

    def violation(self, x) -> float:
        """Largest constraint or bound violation at ``x``."""
        x = np.asarray(x, dtype=float)
        worst = 0.0
        if self.n_rows:
            lhs = self.A @ x
            for rel, a, b in zip(self.relations, lhs, self.rhs):
                if rel == LE:
                    worst = max(worst, a - b)
                elif rel == GE:
                    worst = max(worst, b - a)
                else:
                    worst = max(worst, abs(a - b))
        worst = max(worst, float(np.max(self.lower - x, initial=0.0)))
        finite = np.isfinite(self.upper)
        if finite.any():
            worst = max(worst, float(np.max(x[finite] - self.upper[finite])))
        return worst


@dataclass(frozen=True)
class StandardForm:
    """``min c @ z`` s.t. ``A @ z == b``, ``z >= 0``, with ``b >= 0``.

    The first ``n_orig`` columns are the original variables shifted by their
    lower bounds; the rest are slack, surplus and artificial columns.
    """

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    n_orig: int
    artificial: np.ndarray
    initial_basis: list
    shift: np.ndarray
    offset: float


def standard_form(problem: LpProblem) -> StandardForm:
    n = problem.n_vars
    lower = problem.lower
    A = problem.A
    rhs = problem.rhs - A @ lower if problem.n_rows else np.zeros(0)
    rows = [(A[i], problem.relations[i], rhs[i]) for i in range(problem.n_rows)]
    for j in np.flatnonzero(np.isfinite(problem.upper)):
        e = np.zeros(n)
        e[j] = 1.0
        rows.append((e, LE, problem.upper[j] - lower[j]))

    flipped = []
    for a, rel, b in rows:
        if b < 0:
            a, b = -a, -b
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        flipped.append((a, rel, b))

    n_slack = sum(rel != EQ for _, rel, _ in flipped)
    n_art = sum(rel != LE for _, rel, _ in flipped)
    total = n + n_slack + n_art
    r = len(flipped)
    As = np.zeros((r, total))
    b = np.zeros(r)
    basis = []
    artificial = []
    k_slack, k_art = n, n + n_slack
    for i, (a, rel, bi) in enumerate(flipped):
        As[i, :n] = a
        b[i] = bi
        if rel == LE:
            As[i, k_slack] = 1.0
            basis.append(k_slack)
            k_slack += 1
        else:
            if rel == GE:
                As[i, k_slack] = -1.0
                k_slack += 1
            As[i, k_art] = 1.0
            basis.append(k_art)
            artificial.append(k_art)
            k_art += 1

    sign = 1.0 if problem.sense == MINIMIZE else -1.0
    c = np.zeros(total)
    c[:n] = sign * problem.cost
    return StandardForm(As, b, c, n, np.array(artificial, dtype=int), basis,
                        lower.copy(), float(problem.cost @ lower))


@dataclass(frozen=True)
class LpSolution:
    """Outcome of a solve.

    ``x`` and ``objective`` are ``None`` unless ``status == "optimal"``.
    ``basis`` and ``reduced_costs`` refer to the columns of
    :func:`standard_form` (minimization sense, artificial columns excluded)
    and form the optimality certificate: every reduced cost is ``>= -tol``.
    """

    status: str
    x: Optional[np.ndarray] = None
    objective: Optional[float] = None
    iterations: int = 0
    basis: tuple = ()
    reduced_costs: Optional[np.ndarray] = None
    stage_objectives: tuple = field(default=())

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Simplex tableau ``B^-1 [A | b]`` with its reduced-cost row.

    The tableau is rebuilt from the original rows after every basis change,
    so rounding error never accumulates across pivots.
    """

    def __init__(self, A, b, basis):
        self.Ab = np.hstack([A, b.reshape(-1, 1)])
        self.basis = list(basis)
        self.c = None
        self.iterations = 0
        self.T = None
        self.d = None

    def drop_rows(self, keep):
        self.Ab = self.Ab[keep]
        self.basis = [self.basis[i] for i in keep]

    def refresh(self):
        B = self.Ab[:, self.basis]
        try:
            T = np.linalg.solve(B, self.Ab)
        except np.linalg.LinAlgError:
            T = np.linalg.lstsq(B, self.Ab, rcond=None)[0]
        T[:, self.basis] = np.eye(len(self.basis))
        self.T = T
        if self.c is not None:
            c = np.append(self.c, 0.0)
            self.d = c - c[self.basis] @ T
            self.d[self.basis] = 0.0

    def set_cost(self, c):
        self.c = np.asarray(c, dtype=float)
        self.refresh()

    def pivot(self, row, col):
        self.basis[row] = col
        self.iterations += 1
        self.refresh()

    def run(self, allowed: np.ndarray, opt_tol: float, max_iter: int) -> bool:
        """Bland-rule primal simplex; returns False if a ray of improvement is found."""
        while True:
            if self.iterations >= max_iter:
                raise SolverError(f"simplex did not terminate within {max_iter} pivots")
            candidates = np.flatnonzero(allowed & (self.d[:-1] < -opt_tol))
            if candidates.size == 0:
                return True
            col = int(candidates[0])
            column = self.T[:, col]
            rows = np.flatnonzero(column > PIVOT_TOL)
            if rows.size == 0:
                return False
            ratios = np.maximum(self.T[rows, -1], 0.0) / column[rows]
            best = ratios.min()
            ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            row = min(ties, key=lambda i: self.basis[i])
            self.pivot(int(row), col)


def solve(problem: LpProblem, tol: float = DEFAULT_TOL, max_iter: Optional[int] = None) -> LpSolution:
    """Solve ``problem`` with the two-phase simplex method."""
    sf = standard_form(problem)
    r, total = sf.A.shape
    if max_iter is None:
        max_iter = 50 * (r + total) + 1000
    is_art = np.zeros(total, dtype=bool)
    is_art[sf.artificial] = True

    tab = _Tableau(sf.A, sf.b, sf.initial_basis)
    if sf.artificial.size:
        c1 = np.zeros(total)
        c1[sf.artificial] = 1.0
        tab.set_cost(c1)
        tab.run(np.ones(total, dtype=bool), tol, max_iter)
        infeas = float(c1[tab.basis] @ tab.T[:, -1])
        if infeas > tol:
            logger.debug("phase 1 optimum %.3g > tol: infeasible", infeas)
            return LpSolution(INFEASIBLE, iterations=tab.iterations)
        # drive zero-level artificials out of the basis, dropping redundant rows
        redundant = []
        for i in range(len(tab.basis)):
            if is_art[tab.basis[i]]:
                row = tab.T[i, :-1]
                cand = np.flatnonzero(~is_art & (np.abs(row) > 1e-7))
                if cand.size:
                    tab.pivot(i, int(cand[np.argmax(np.abs(row[cand]))]))
                else:
                    redundant.append(i)
        if redundant:
            tab.drop_rows([i for i in range(len(tab.basis)) if i not in redundant])

    tab.set_cost(sf.c)
    if not tab.run(~is_art, tol, max_iter):
        return LpSolution(UNBOUNDED, iterations=tab.iterations)

    z = np.zeros(total)
    z[tab.basis] = np.maximum(tab.T[:, -1], 0.0)
    rc = tab.d[: total - sf.artificial.size].copy()
    x = z[: sf.n_orig] + sf.shift
    obj = float(problem.cost @ x)
    return LpSolution(OPTIMAL, x, obj, tab.iterations, tuple(tab.basis), rc, (obj,))


def solve_lexicographic(problem: LpProblem, primary, secondary, *,
                        secondary_sense: Optional[str] = None,
                        tol: float = DEFAULT_TOL) -> LpSolution:
    """Optimize ``secondary`` over the optimal face of ``primary``.

    The primary objective uses ``problem.sense``; the secondary defaults to
    the same sense.  The returned ``objective`` is the secondary value and
    ``stage_objectives`` holds ``(primary, secondary)``.
    """
    primary = np.asarray(primary, dtype=float)
    secondary = np.asarray(secondary, dtype=float)
    if primary.shape != (problem.n_vars,) or secondary.shape != (problem.n_vars,):
        raise LpInputError("both cost vectors must have one entry per variable")
    first = solve(problem.with_cost(primary), tol)
    if not first.is_optimal:
        return first
    staged = problem.with_row(primary, EQ, first.objective).with_cost(
        secondary, secondary_sense or problem.sense)
    second = solve(staged, tol)
    iters = first.iterations + second.iterations
    if not second.is_optimal:
        return LpSolution(second.status, iterations=iters)
    return LpSolution(OPTIMAL, second.x, second.objective, iters, second.basis,
                      second.reduced_costs, (float(primary @ second.x), second.objective))


def lp(cost: Sequence[float], A, relations, rhs, sense: str = MINIMIZE, **bounds) -> LpProblem:
    """Shorthand constructor used throughout the tests and models."""
    return LpProblem(np.asarray(cost, dtype=float), np.asarray(A, dtype=float), relations, rhs,
                     sense, bounds.get("lower"), bounds.get("upper"))
