"""Exception types raised across the package."""


class QuotlabError(Exception):
    """Base class for all package errors."""


class ArithmeticDomainError(QuotlabError):
    """Scalars from incompatible fields were combined."""


class ShapeError(QuotlabError):
    """Matrix or tuple dimensions do not fit together."""


class SingularMatrixError(QuotlabError):
    """An invertible matrix was required."""


class SupportNotSplit(QuotlabError):
    """Eigenvalues are not all in the base field, or the support is not at the origin."""


class PreconditionError(QuotlabError):
    """Input does not satisfy the stated precondition of an operation."""


class StabilityError(QuotlabError):
    """The vectors of a pair do not generate the whole space."""


class GradingError(QuotlabError):
    """A graded operation received inhomogeneous data."""


class NotFoundError(QuotlabError):
    """Unknown catalog name."""


class OutOfCatalogError(QuotlabError):
    """Enumeration requested outside the range where the classification is known."""


class NotCommutingError(PreconditionError):
    """A tuple failed the commutativity check; carries the first failing pair."""

    def __init__(self, pair):
        self.pair = pair
        i, j = pair
        super().__init__(f"matrices {i + 1} and {j + 1} do not commute")


class ResolutionWindowError(QuotlabError):
    """A syzygy generator appeared at the boundary of the computed degree window."""
