"""Exception types shared across the package."""


class ObPursuitError(Exception):
    """Base class for errors raised by this package."""


class InvalidSparsityError(ObPursuitError, ValueError):
    """Requested sparsity level is outside the valid range."""


class RankDeficiencyError(ObPursuitError):
    """A weighted least-squares system was singular or nearly so.

    Carries the reciprocal-condition estimate of the offending system so
    callers can report how close to singular it was.
    """

    def __init__(self, message, rcond):
        super().__init__(message)
        self.rcond = rcond


class InvalidDensityError(ObPursuitError, ValueError):
    """A sampling density has nonpositive or otherwise unusable weights."""


class DegenerateFrameError(ObPursuitError):
    """A frame operator (or dictionary Gram) is singular."""


class EnumerationBudgetError(ObPursuitError):
    """Exact subset enumeration would exceed the configured budget.

    Use the Monte-Carlo lower-bound mode for problems of this size.
    """

    def __init__(self, message, count, budget):
        super().__init__(message)
        self.count = count
        self.budget = budget


class ConfigError(ObPursuitError, ValueError):
    """An experiment or CLI configuration is malformed."""
