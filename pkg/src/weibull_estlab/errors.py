"""Exception types shared across the estimators and the CLI."""


class DataError(ValueError):
    """Invalid observations: non-positive, non-finite, empty or unparseable."""


class EstimationError(Exception):
    """Base class for estimator failures on an otherwise valid sample."""


class DegenerateSampleError(EstimationError):
    """The sample carries no information for the method (e.g. all values equal)."""


class InvalidRatioError(EstimationError):
    """A moment ratio fell outside the range the estimating equation can invert."""


class BracketError(EstimationError):
    """No sign change found for a root after exhausting bracket expansion."""


class SingularSystemError(EstimationError):
    """A linear system in a regression fit could not be solved."""
