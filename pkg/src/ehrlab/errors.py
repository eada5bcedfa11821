class EhrlabError(Exception):
    """Base class for errors raised by this package."""


class InsufficientSamplesError(EhrlabError, ValueError):
    pass


class InconsistentSamplesError(EhrlabError, ValueError):
    pass


class GeometryError(EhrlabError):
    """An internal geometric defect, or a polytope unsuitable for the operation."""


class NotFullDimensionalError(GeometryError, ValueError):
    pass


class ValidationMismatchError(GeometryError):
    """Interpolated Ehrhart data disagreed with a direct count."""


class PeriodViolationError(GeometryError):
    pass


class FacetValidationError(GeometryError):
    pass


class SearchBudgetExceeded(EhrlabError):
    def __init__(self, message, last_tried):
        super().__init__(message)
        self.last_tried = last_tried
