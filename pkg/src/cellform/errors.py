"""Exception hierarchy for the cellform package.

Every library error derives from CellformError and carries an optional
``detail`` dict with machine-readable context (offending indices, witnesses,
thresholds). The CLI and the HTTP service map exception class names to exit
codes and error envelopes, so class names are part of the public contract.
"""


class CellformError(Exception):
    """Base class for all cellform errors."""

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail if detail is not None else {}


class ValidationError(CellformError):
    """A complex, document, or parameter failed structural validation."""


class DanglingFace(ValidationError):
    """A boundary entry references a cell id that does not exist."""


class BadSign(ValidationError):
    """An incidence sign is not +1 or -1."""


class BoundaryNotSquareZero(ValidationError):
    """The composite boundary operator has a nonzero integer entry."""


class NonPositiveWeight(ValidationError):
    """A cell weight is zero, negative, or not finite."""


class DimensionOutOfRange(ValidationError):
    """A dimension argument lies outside the valid range for the complex."""


class UnknownCell(ValidationError):
    """A cell id does not belong to the complex."""


class UnsupportedDimension(ValidationError):
    """The operation is only defined for cells of certain dimensions."""


class MissingValue(ValidationError):
    """A cell function is missing a value on some cell (functions are total)."""


class NotQuasiconvex(ValidationError):
    """The complex fails the quasiconvexity condition required here."""


class NotClosedSurface(ValidationError):
    """The complex is not a closed surface where one is required."""


class UnsupportedComplexClass(ValidationError):
    """The complex is neither a graph nor a closed 2-complex surface."""


class NonConstantWeights(ValidationError):
    """The operation requires all cell weights to be equal."""


class NormalizationViolated(ValidationError):
    """An input form does not satisfy the required unit normalization."""


class SelfLoop(ValidationError):
    """An edge list contains an edge from a vertex to itself."""


class DuplicateEdge(ValidationError):
    """An edge list contains the same undirected edge twice."""


class BadParameter(ValidationError):
    """A generator or command parameter is out of its legal range."""


class NotClosed(CellformError):
    """A form required to be closed (d = 0) is not."""


class ParseError(CellformError):
    """An input document could not be parsed. detail carries the position."""


class EigensolverFailure(CellformError):
    """The symmetric eigendecomposition did not converge."""


class ToleranceAmbiguous(CellformError):
    """An eigenvalue sits too close to the zero threshold to classify.

    Raised when some eigenvalue lies within a factor of 10 of the kernel
    threshold on either side, so the harmonic dimension would depend on an
    arbitrary cutoff. This signals an ill-conditioned input, not a bug.
    """
