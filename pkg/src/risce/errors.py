"""Exception hierarchy shared across the package."""


class RisceError(Exception):
    """Base class for all package errors."""


class ShapeError(RisceError, ValueError):
    """Array shapes are incompatible with the declared system dimensions."""


class ConfigError(RisceError, ValueError):
    """A configuration object violates one of its invariants."""


class EstimationError(RisceError):
    """An estimator could not produce an estimate from the given data."""


class ScheduleMisuseError(EstimationError, ValueError):
    """An estimator was handed an observation taken with the wrong schedule."""


class IdentifiabilityError(EstimationError):
    """The stacked measurement system does not determine the unknowns."""


class DegenerateColumnError(IdentifiabilityError):
    """Reference channel columns are too small to scale from.

    ``indices`` lists the offending column indices.
    """

    def __init__(self, message, indices):
        super().__init__(message)
        self.indices = list(indices)


class UndefinedMetricError(RisceError, ValueError):
    """A metric is undefined for the given input (e.g. NMSE of a zero channel)."""
