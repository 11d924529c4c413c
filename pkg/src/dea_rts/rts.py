"""Returns-to-scale classification with interior projections.

Per unit the pipeline is:

1. BCC screening.  Efficient units are classified where they stand.
   Inefficient units with zero slack sum have a unique projection and are
   moved onto it; units with positive slack sum are moved to the strict
   convex combination of their global reference set given by a maximal
   element, which lies in the relative interior of the minimum face.
2. One CCR solve at that point: score 1 means constant RTS, otherwise the
   intensity sum says increasing (< 1) or decreasing (> 1).
3. Optionally, the nearest MPSS pattern from the intensity-sum bound model.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import AmbiguousClassificationError, ContractViolation, DeaError
from .models import (
    DEFAULT_TOLERANCES, LOWER, UPPER, Dataset, EfficiencyOutcome, MaximalElementOutcome, Point,
    Tolerances, bcc_evaluate, ccr_evaluate, intensity_sum_bound, solve_maximal_element,
)

logger = logging.getLogger(__name__)


class RtsClass(enum.Enum):
    CONSTANT = "C"
    INCREASING = "I"
    DECREASING = "D"

    def __str__(self):
        return self.value


class DmuGroup(enum.Enum):
    BCC_EFFICIENT = "efficient"
    ZERO_SLACK = "G1"
    POSITIVE_SLACK = "G2"

    def __str__(self):
        return self.value


class ProjectionKind(enum.Enum):
    SELF = "self"
    BCC = "bcc"
    INTERIOR = "interior"

    def __str__(self):
        return self.value


@dataclass
class RtsResult:
    dmu: str
    group: Optional[DmuGroup]
    point: Optional[Point]
    projection: Optional[ProjectionKind]
    theta_bcc: Optional[float]
    slack_sum: Optional[float]
    theta_ccr: Optional[float] = None
    lambda_sum: Optional[float] = None
    rts: Optional[RtsClass] = None
    grs: list = field(default_factory=list)
    nearest_mpss: Optional[Point] = None
    diagnostics: list = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return self.rts is None


@dataclass(frozen=True)
class EfficientSet:
    """BCC-efficient units together with every unit's BCC outcome."""

    indices: tuple
    outcomes: tuple

    def __contains__(self, j):
        return j in self.indices


def efficient_set(dataset: Dataset, tol: Tolerances = DEFAULT_TOLERANCES) -> EfficientSet:
    outcomes = tuple(bcc_evaluate(dataset, dataset.point(j), tol) for j in range(dataset.n))
    indices = tuple(j for j, out in enumerate(outcomes) if out.is_efficient)
    return EfficientSet(indices, outcomes)


def assign_group(outcome: EfficiencyOutcome, tol: Tolerances = DEFAULT_TOLERANCES) -> DmuGroup:
    if outcome.is_efficient:
        return DmuGroup.BCC_EFFICIENT
    if outcome.slack_sum <= tol.classification:
        return DmuGroup.ZERO_SLACK
    return DmuGroup.POSITIVE_SLACK


def _nonnegative(v: np.ndarray, tol: float, what: str) -> np.ndarray:
    if np.any(v < -tol):
        raise DeaError(f"{what} has a negative component {v.min():.3g}")
    return np.maximum(v, 0.0)


def bcc_projection(target: Point, outcome: EfficiencyOutcome,
                   tol: Tolerances = DEFAULT_TOLERANCES) -> Point:
    x = outcome.theta * target.inputs - outcome.input_slacks
    y = target.outputs + outcome.output_slacks
    return Point(_nonnegative(x, tol.classification, "BCC projection"), y)


def interior_projection(mu_max: MaximalElementOutcome, dataset: Dataset,
                        efficient_index_set: Sequence[int]) -> Point:
    idx = list(efficient_index_set)
    return Point(dataset.X[:, idx] @ mu_max.mu_max, dataset.Y[:, idx] @ mu_max.mu_max)


def classify_at_point(dataset: Dataset, point: Point, tol: Tolerances = DEFAULT_TOLERANCES):
    """Returns ``(RtsClass, theta_ccr, lambda_sum)`` for a BCC-efficient point.

    Any single CCR optimum decides the class: when the score is below one,
    the intensity sum is on the same side of one for every optimum.
    """
    out = ccr_evaluate(dataset, point, tol)
    band = tol.classification
    if out.theta >= 1 - band:
        return RtsClass.CONSTANT, out.theta, out.lambda_sum
    if out.lambda_sum > 1 + band:
        return RtsClass.DECREASING, out.theta, out.lambda_sum
    if out.lambda_sum < 1 - band:
        return RtsClass.INCREASING, out.theta, out.lambda_sum
    raise AmbiguousClassificationError(
        f"CCR score {out.theta:.9g} < 1 with intensity sum {out.lambda_sum:.9g} == 1; "
        "the point is probably not BCC-efficient")


def nearest_mpss(dataset: Dataset, point: Point, theta_ccr: float, rts: RtsClass,
                 tol: Tolerances = DEFAULT_TOLERANCES) -> Point:
    """Scale the radially contracted point onto the CRS frontier with the least rescaling."""
    if rts is RtsClass.CONSTANT:
        raise ContractViolation("nearest MPSS is only defined for non-constant RTS")
    direction = UPPER if rts is RtsClass.INCREASING else LOWER
    total = intensity_sum_bound(dataset, point, theta_ccr, direction, tol)
    if total <= 0:
        raise ContractViolation("intensity-sum bound is not positive")
    return Point(theta_ccr * point.inputs / total, point.outputs / total)


def classify_dmu(dataset: Dataset, o: int, with_mpss: bool = False,
                 tol: Tolerances = DEFAULT_TOLERANCES,
                 efficient: Optional[EfficientSet] = None) -> RtsResult:
    if not 0 <= o < dataset.n:
        raise IndexError(f"DMU index {o} out of range for {dataset.n} units")
    if efficient is None:
        efficient = efficient_set(dataset, tol)
    target = dataset.point(o)
    outcome = efficient.outcomes[o]
    group = assign_group(outcome, tol)
    result = RtsResult(dataset.names[o], group, None, None, outcome.theta, outcome.slack_sum)

    if group is DmuGroup.BCC_EFFICIENT:
        point, kind = target, ProjectionKind.SELF
    elif group is DmuGroup.ZERO_SLACK:
        point, kind = bcc_projection(target, outcome, tol), ProjectionKind.BCC
    else:
        me = solve_maximal_element(dataset, efficient.indices, target, outcome.theta,
                                   outcome.slack_sum, tol)
        point, kind = interior_projection(me, dataset, efficient.indices), ProjectionKind.INTERIOR
        result.grs = [(dataset.names[me.efficient[k]], float(me.mu_max[k])) for k in me.support]
    result.point, result.projection = point, kind

    rts, theta, lam = classify_at_point(dataset, point, tol)
    result.rts, result.theta_ccr, result.lambda_sum = rts, theta, lam
    if with_mpss:
        result.nearest_mpss = point if rts is RtsClass.CONSTANT else nearest_mpss(
            dataset, point, theta, rts, tol)
    return result


def classify_all(dataset: Dataset, with_mpss: bool = False,
                 tol: Tolerances = DEFAULT_TOLERANCES) -> list:
    """One result per DMU, in dataset order.

    Errors for an individual unit end up in its ``diagnostics`` and leave
    ``rts`` unset; the batch carries on.
    """
    efficient = efficient_set(dataset, tol)
    results = []
    for o in range(dataset.n):
        try:
            results.append(classify_dmu(dataset, o, with_mpss, tol, efficient))
        except DeaError as exc:
            logger.warning("DMU %s: %s", dataset.names[o], exc)
            outcome = efficient.outcomes[o]
            results.append(RtsResult(dataset.names[o], assign_group(outcome, tol), None, None,
                                     outcome.theta, outcome.slack_sum,
                                     diagnostics=[f"{type(exc).__name__}: {exc}"]))
    return results
