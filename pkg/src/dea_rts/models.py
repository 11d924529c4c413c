"""Input-oriented envelopment models: CCR, BCC, the maximal-element model and
the intensity-sum bound used for the nearest MPSS.

The slack term with a non-Archimedean weight is handled exactly: the radial
score is minimized first, then the slack sum is maximized over the set of
radial optima (see :func:`dea_rts.lp.solve_lexicographic`).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import lp
from .errors import ContractViolation, DataError, InfeasibleModelError, WrongDirectionError


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds.

    feasibility    simplex residuals and reduced costs
    classification "theta == 1", "slack sum == 0", "lambda sum == 1"
    support        a maximal-element weight counts as positive above this
    """

    feasibility: float = 1e-9
    classification: float = 1e-6
    support: float = 1e-7

    def __post_init__(self):
        for name in ("feasibility", "classification", "support"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise DataError(f"{name} tolerance must be strictly positive, got {value!r}")


DEFAULT_TOLERANCES = Tolerances()

# cap for the unbounded scale variable of the maximal-element model
SCALE_CAP = 1e6


def _readonly(a) -> np.ndarray:
    arr = np.array(a, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Point:
    """An input/output pair, observed or synthetic."""

    inputs: np.ndarray
    outputs: np.ndarray

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.inputs, dtype=float))
        y = np.atleast_1d(np.asarray(self.outputs, dtype=float))
        if x.ndim != 1 or y.ndim != 1:
            raise DataError("point inputs and outputs must be vectors")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise DataError("point has non-finite components")
        object.__setattr__(self, "inputs", _readonly(x))
        object.__setattr__(self, "outputs", _readonly(y))

    def allclose(self, other: "Point", atol: float = 1e-6) -> bool:
        return (self.inputs.shape == other.inputs.shape
                and self.outputs.shape == other.outputs.shape
                and np.allclose(self.inputs, other.inputs, rtol=0, atol=atol)
                and np.allclose(self.outputs, other.outputs, rtol=0, atol=atol))

    def __repr__(self):
        fmt = lambda v: ", ".join(f"{c:.6g}" for c in v)
        return f"Point(({fmt(self.inputs)}; {fmt(self.outputs)}))"


@dataclass(frozen=True)
class Dataset:
    """Observed units: ``X`` is m x n (inputs), ``Y`` is s x n (outputs)."""

    names: tuple
    X: np.ndarray
    Y: np.ndarray
    input_labels: tuple = ()
    output_labels: tuple = ()

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        X = np.asarray(self.X, dtype=float)
        Y = np.asarray(self.Y, dtype=float)
        if X.ndim != 2 or Y.ndim != 2:
            raise DataError("X and Y must be 2-d arrays (rows = factors, columns = units)")
        n = len(names)
        if n < 1:
            raise DataError("empty dataset")
        if X.shape[1] != n or Y.shape[1] != n:
            raise DataError(f"{n} names but X has {X.shape[1]} and Y has {Y.shape[1]} columns")
        if X.shape[0] < 1 or Y.shape[0] < 1:
            raise DataError("need at least one input and one output")
        if len(set(names)) != n:
            dup = next(x for x in names if names.count(x) > 1)
            raise DataError(f"duplicate DMU name {dup!r}")
        for label, M in (("input", X), ("output", Y)):
            if not np.all(np.isfinite(M)):
                raise DataError(f"non-finite {label} value")
            if np.any(M < 0):
                i, j = np.argwhere(M < 0)[0]
                raise DataError(f"negative {label} {i + 1} for DMU {names[j]!r}")
            bad = np.flatnonzero(~np.any(M > 0, axis=0))
            if bad.size:
                raise DataError(f"DMU {names[bad[0]]!r} has no strictly positive {label}")
        in_labels = tuple(self.input_labels) or tuple(f"x{i + 1}" for i in range(X.shape[0]))
        out_labels = tuple(self.output_labels) or tuple(f"y{r + 1}" for r in range(Y.shape[0]))
        if len(in_labels) != X.shape[0] or len(out_labels) != Y.shape[0]:
            raise DataError("factor label count does not match the data")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "X", _readonly(X))
        object.__setattr__(self, "Y", _readonly(Y))
        object.__setattr__(self, "input_labels", in_labels)
        object.__setattr__(self, "output_labels", out_labels)

    @classmethod
    def from_rows(cls, rows: Sequence, n_inputs: int, **labels) -> "Dataset":
        """Build from ``(name, x1, ..., xm, y1, ..., ys)`` rows."""
        names = [r[0] for r in rows]
        data = np.array([r[1:] for r in rows], dtype=float)
        return cls(tuple(names), data[:, :n_inputs].T, data[:, n_inputs:].T, **labels)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def m(self) -> int:
        return self.X.shape[0]

    @property
    def s(self) -> int:
        return self.Y.shape[0]

    def point(self, j: int) -> Point:
        return Point(self.X[:, j], self.Y[:, j])

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise DataError(f"unknown DMU {name!r}") from None

    def subset(self, indices: Sequence[int]) -> "Dataset":
        idx = list(indices)
        return Dataset(tuple(self.names[j] for j in idx), self.X[:, idx], self.Y[:, idx],
                       self.input_labels, self.output_labels)

    def with_point(self, name: str, point: Point) -> "Dataset":
        return Dataset(self.names + (name,), np.column_stack([self.X, point.inputs]),
                       np.column_stack([self.Y, point.outputs]),
                       self.input_labels, self.output_labels)

    def rescaled(self, input_scale=None, output_scale=None) -> "Dataset":
        ki = np.ones(self.m) if input_scale is None else np.asarray(input_scale, dtype=float)
        ko = np.ones(self.s) if output_scale is None else np.asarray(output_scale, dtype=float)
        return Dataset(self.names, self.X * ki[:, None], self.Y * ko[:, None],
                       self.input_labels, self.output_labels)


@dataclass(frozen=True)
class EfficiencyOutcome:
    theta: float
    lambdas: np.ndarray
    input_slacks: np.ndarray
    output_slacks: np.ndarray
    slack_sum: float
    lambda_sum: float
    is_efficient: bool
    model: str = "ccr"


@dataclass(frozen=True)
class MaximalElementOutcome:
    """A maximal element of the set of intensity vectors behind the BCC projections.

    ``mu_max`` is indexed like ``efficient`` (positions in the dataset of the
    BCC-efficient units).  Weights are one optimal witness; only ``support``
    is unique.
    """

    mu_max: np.ndarray
    efficient: tuple
    delta1: float
    delta2: float
    support: tuple
    input_slacks: np.ndarray
    output_slacks: np.ndarray

    @property
    def support_units(self) -> tuple:
        """Dataset indices of the units with positive weight."""
        return tuple(self.efficient[k] for k in self.support)


def _check_target(dataset: Dataset, target: Point) -> None:
    if target.inputs.shape != (dataset.m,) or target.outputs.shape != (dataset.s,):
        raise DataError(
            f"target has {target.inputs.size} inputs/{target.outputs.size} outputs, "
            f"dataset has {dataset.m}/{dataset.s}")
    if np.any(target.inputs < 0) or np.any(target.outputs < 0):
        raise DataError("target has negative components")
    if not np.any(target.inputs > 0):
        raise DataError("target needs a strictly positive input")


def _envelopment(dataset: Dataset, target: Point, convex: bool, tol: Tolerances) -> EfficiencyOutcome:
    _check_target(dataset, target)
    m, s, n = dataset.m, dataset.s, dataset.n
    # columns: theta | lambda (n) | s- (m) | s+ (s)
    N = 1 + n + m + s
    A = np.zeros((m + s + int(convex), N))
    A[:m, 0] = -target.inputs
    A[:m, 1:1 + n] = dataset.X
    A[:m, 1 + n:1 + n + m] = np.eye(m)
    A[m:m + s, 1:1 + n] = dataset.Y
    A[m:m + s, 1 + n + m:] = -np.eye(s)
    rhs = np.concatenate([np.zeros(m), target.outputs])
    if convex:
        A[-1, 1:1 + n] = 1.0
        rhs = np.append(rhs, 1.0)
    radial = np.zeros(N)
    radial[0] = 1.0
    slacks = np.zeros(N)
    slacks[1 + n:] = 1.0
    problem = lp.LpProblem(radial, A, lp.EQ, rhs)
    sol = lp.solve_lexicographic(problem, radial, slacks, secondary_sense=lp.MAXIMIZE,
                                 tol=tol.feasibility)
    model = "bcc" if convex else "ccr"
    if not sol.is_optimal:
        raise InfeasibleModelError(
            f"{model.upper()} model is {sol.status} for target {target!r}; "
            "the point is not enveloped by the observed units")
    x = sol.x
    theta = float(x[0])
    lam = x[1:1 + n].copy()
    sm = x[1 + n:1 + n + m].copy()
    sp = x[1 + n + m:].copy()
    slack_sum = float(sm.sum() + sp.sum())
    efficient = theta >= 1 - tol.classification and slack_sum <= tol.classification
    return EfficiencyOutcome(theta, lam, sm, sp, slack_sum, float(lam.sum()), bool(efficient), model)


def ccr_evaluate(dataset: Dataset, target: Point, tol: Tolerances = DEFAULT_TOLERANCES) -> EfficiencyOutcome:
    """Radial CCR score of ``target`` against the observed units, max-slack optimum."""
    return _envelopment(dataset, target, False, tol)


def bcc_evaluate(dataset: Dataset, target: Point, tol: Tolerances = DEFAULT_TOLERANCES) -> EfficiencyOutcome:
    """As :func:`ccr_evaluate` with the convexity row ``sum(lambda) == 1``."""
    return _envelopment(dataset, target, True, tol)


def _maximal_element_lp(dataset: Dataset, efficient: Sequence[int], target: Point,
                        theta_bcc: float, slack_sum_star: float, cap: float) -> lp.LpProblem:
    XE = dataset.X[:, efficient]
    YE = dataset.Y[:, efficient]
    m, s, e = dataset.m, dataset.s, len(efficient)
    # columns: mu1 (e) | mu2 (e) | s- (m) | s+ (s) | d1 | d2
    N = 2 * e + m + s + 2
    A = np.zeros((m + s + 2, N))
    rhs_block = np.concatenate([theta_bcc * target.inputs, target.outputs, [1.0, slack_sum_star]])
    A[:m, :e] = XE
    A[:m, e:2 * e] = XE
    A[:m, 2 * e:2 * e + m] = np.eye(m)
    A[m:m + s, :e] = YE
    A[m:m + s, e:2 * e] = YE
    A[m:m + s, 2 * e + m:2 * e + m + s] = -np.eye(s)
    A[m + s, :2 * e] = 1.0
    A[m + s + 1, 2 * e:2 * e + m + s] = 1.0
    A[:, -2] = -rhs_block
    A[:, -1] = -rhs_block
    cost = np.zeros(N)
    cost[:e] = 1.0
    cost[-2] = 1.0
    upper = np.full(N, np.inf)
    upper[:e] = 1.0
    upper[-2] = 1.0
    upper[-1] = cap
    return lp.LpProblem(cost, A, lp.EQ, np.zeros(m + s + 2), lp.MAXIMIZE, upper=upper)


def _solve_maximal(dataset, efficient, target, theta_bcc, slack_sum_star, cap, tol):
    problem = _maximal_element_lp(dataset, efficient, target, theta_bcc, slack_sum_star, cap)
    sol = lp.solve(problem, tol.feasibility)
    if not sol.is_optimal:
        raise ContractViolation(f"maximal-element model is {sol.status}")
    e, m = len(efficient), dataset.m
    x = sol.x
    d1, d2 = float(x[-2]), float(x[-1])
    scale = d1 + d2
    if scale <= tol.classification:
        raise ContractViolation(
            "maximal-element model only admits the zero solution: theta_bcc and the slack sum "
            "do not come from a BCC solve of this target")
    mu = (x[:e] + x[e:2 * e]) / (1.0 + d2)
    sm = x[2 * e:2 * e + m] / (1.0 + d2)
    sp = x[2 * e + m:-2] / (1.0 + d2)
    return mu, sm, sp, d1, d2


def solve_maximal_element(dataset: Dataset, efficient_index_set: Sequence[int], target: Point,
                          theta_bcc: float, slack_sum_star: float,
                          tol: Tolerances = DEFAULT_TOLERANCES) -> MaximalElementOutcome:
    """Intensity vector with the most positive components among all BCC projections of ``target``.

    ``theta_bcc`` and ``slack_sum_star`` must come from ``bcc_evaluate(dataset, target)``.
    """
    _check_target(dataset, target)
    efficient = tuple(int(j) for j in efficient_index_set)
    if not efficient:
        raise ContractViolation("empty efficient set")
    mu, sm, sp, d1, d2 = _solve_maximal(dataset, efficient, target, theta_bcc, slack_sum_star,
                                        SCALE_CAP, tol)
    if d2 >= SCALE_CAP * (1 - 1e-9):
        # the cap must not bind: a looser cap has to give the same element
        mu10, *_ = _solve_maximal(dataset, efficient, target, theta_bcc, slack_sum_star,
                                  10 * SCALE_CAP, tol)
        if not np.allclose(mu, mu10, rtol=0, atol=1e-6):
            raise ContractViolation("scale cap of the maximal-element model is binding")
    total = float(mu.sum())
    if abs(total - 1.0) > tol.classification:
        raise ContractViolation(f"maximal element weights sum to {total:.9g}, expected 1")
    mu = np.where(mu > tol.support, mu, 0.0)
    support = tuple(int(k) for k in np.flatnonzero(mu))
    return MaximalElementOutcome(_readonly(mu), efficient, d1, d2, support, _readonly(sm), _readonly(sp))


LOWER = "lower"
UPPER = "upper"


def intensity_sum_bound(dataset: Dataset, target: Point, theta_ccr: float, direction: str,
                        tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Smallest (``lower``) or largest (``upper``) intensity sum over the CCR optimum face.

    ``lower`` adds ``sum(lambda) >= 1`` and minimizes; ``upper`` adds
    ``sum(lambda) <= 1`` and maximizes.
    """
    _check_target(dataset, target)
    if direction not in (LOWER, UPPER):
        raise ValueError(f"direction must be 'lower' or 'upper', got {direction!r}")
    m, s, n = dataset.m, dataset.s, dataset.n
    A = np.vstack([dataset.X, dataset.Y, np.ones((1, n))])
    rhs = np.concatenate([theta_ccr * target.inputs, target.outputs, [1.0]])
    side = lp.GE if direction == LOWER else lp.LE
    relations = (lp.LE,) * m + (lp.GE,) * s + (side,)
    sense = lp.MINIMIZE if direction == LOWER else lp.MAXIMIZE
    sol = lp.solve(lp.LpProblem(np.ones(n), A, relations, rhs, sense), tol.feasibility)
    if sol.status == lp.INFEASIBLE:
        raise WrongDirectionError(
            f"no CCR-optimal intensity vector satisfies the {direction} side constraint")
    if not sol.is_optimal:
        raise ContractViolation(f"intensity-sum bound model is {sol.status}")
    return float(sol.objective)
