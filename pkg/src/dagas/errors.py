"""Exception hierarchy shared by all dagas modules.

The CLI maps these onto exit codes: ValidationError and subclasses exit
with 2, BudgetExceededError with 3.
"""


class DagasError(Exception):
    pass


class ValidationError(DagasError):
    """Bad input: invalid vertex, malformed lattice spec, bad parameters."""


class InvalidVertexError(ValidationError):
    pass


class WidthError(ValidationError):
    """Cylinder width too small for the edge rule, or too large to enumerate."""


class NotFreeSetError(ValidationError):
    pass


class DivergentBoundError(ValidationError):
    """Tail of an alternating series cannot be bounded (rho * p >= 1)."""


class InconsistentSourceError(ValidationError):
    """Source constraints force a probability-zero window configuration."""


class BudgetExceededError(DagasError):
    """An exploration or enumeration exceeded its cell/node budget."""


class DominanceError(DagasError):
    """A transfer matrix has no simple, real, strictly dominant eigenvalue."""


class ZeroNormalizerError(DagasError):
    """Cyclic normalizer or trace is zero; the conditioned law is undefined."""
