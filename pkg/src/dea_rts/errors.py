"""Exception hierarchy shared by the solver, the DEA models and the CLI."""


class DeaError(Exception):
    """Base class for every error raised by this package."""


class DataError(DeaError, ValueError):
    """Malformed user data: bad shapes, negative or non-finite values, duplicate names."""


class LpInputError(DataError):
    """An LP problem whose dimensions or entries are inconsistent."""


class ContractViolation(DeaError):
    """A model was called with inputs that break its preconditions.

    Raised, for instance, when the scalars handed to the maximal-element model
    do not come from the same BCC solve as the target.
    """


class InfeasibleModelError(ContractViolation):
    """An envelopment model that should always be feasible was not."""


class WrongDirectionError(ContractViolation):
    """The side constraint requested for the intensity-sum bound contradicts the optimum face."""


class AmbiguousClassificationError(DeaError):
    """CCR score below one with an intensity sum of exactly one at a BCC-efficient point."""


class SolverError(DeaError):
    """The simplex kernel failed to converge within its iteration budget."""
