"""Returns-to-scale measurement in DEA using the CCR model.

Inefficient units whose BCC projection is not unique are evaluated at a
projection in the relative interior of their minimum face, so the RTS class
does not depend on which optimal solution the solver happens to return.
"""
from .errors import (
    AmbiguousClassificationError, ContractViolation, DataError, DeaError, InfeasibleModelError,
    LpInputError, SolverError, WrongDirectionError,
)
from .lp import LpProblem, LpSolution, solve, solve_lexicographic
from .models import (
    Dataset, EfficiencyOutcome, MaximalElementOutcome, Point, Tolerances, bcc_evaluate,
    ccr_evaluate, intensity_sum_bound, solve_maximal_element,
)
from .report import render_report
from .rts import (
    DmuGroup, ProjectionKind, RtsClass, RtsResult, assign_group, bcc_projection,
    classify_all, classify_at_point, classify_dmu, efficient_set, interior_projection,
    nearest_mpss,
)
from .tables import parse_csv, table1

__version__ = "0.1.0"

__all__ = [
    "AmbiguousClassificationError", "ContractViolation", "DataError", "DeaError",
    "InfeasibleModelError", "LpInputError", "SolverError", "WrongDirectionError",
    "LpProblem", "LpSolution", "solve", "solve_lexicographic",
    "Dataset", "EfficiencyOutcome", "MaximalElementOutcome", "Point", "Tolerances",
    "bcc_evaluate", "ccr_evaluate", "intensity_sum_bound", "solve_maximal_element",
    "render_report",
    "DmuGroup", "ProjectionKind", "RtsClass", "RtsResult", "assign_group", "bcc_projection",
    "classify_all", "classify_at_point", "classify_dmu", "efficient_set", "interior_projection",
    "nearest_mpss",
    "parse_csv", "table1",
]
