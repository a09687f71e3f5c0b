"""Exception hierarchy shared across the package.

Two broad families matter to callers: `ValidationError` for malformed or
out-of-contract inputs (bad shapes, labels, parameter ranges, unparseable
files) and `NumericalFailure` for computations that could not be completed
(LP breakdown, exhausted resampling, objectives that blow up).  The CLI maps
the first family to exit code 3 and the second to exit code 4.
"""


class CredcalError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(CredcalError):
    """An input violates a documented precondition."""


class NonSimplexRow(ValidationError):
    """A probability vector has negative mass or does not sum to one."""


class ShapeMismatch(ValidationError):
    """Arrays that must agree in shape do not."""


class DimensionMismatch(ValidationError):
    """A weight or point has the wrong number of coordinates."""


class LabelOutOfRange(ValidationError):
    """A class label falls outside the valid range."""


class ValueOutOfUnit(ValidationError):
    """A value expected in [0, 1] falls outside it."""


class TooFewInstances(ValidationError):
    """Not enough instances for the requested computation."""


class NonPositiveDof(ValidationError):
    """A chi-square reference has no positive degrees of freedom."""


class NonPositiveParameter(ValidationError):
    """A strictly positive parameter is zero or negative."""


class EmptyStats(ValidationError):
    """A quantile was requested from an empty sample."""


class EmptyTable(ValidationError):
    """A summary was requested for an empty result set."""


class DegenerateSegment(ValidationError):
    """Two segment endpoints coincide, so no interior point exists."""


class StartOutsideHull(ValidationError):
    """A boundary search started from a point not inside the hull."""


class ParseError(ValidationError):
    """A dataset file could not be parsed.

    Carries the 1-based line number when one is known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericalFailure(CredcalError):
    """A numerical routine failed to produce a usable result."""


class ObjectiveFailure(NumericalFailure):
    """A user-supplied objective raised during minimization."""


class BoundaryDegenerate(NumericalFailure):
    """Repeated resampling failed to produce a usable synthetic instance."""


class StudyFailure(NumericalFailure):
    """Too many replications of a simulation study errored."""
