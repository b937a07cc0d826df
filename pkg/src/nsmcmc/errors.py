"""Exception types shared across the package."""


class NsmcmcError(Exception):
    """Base class for all package-specific errors."""


class NumericalError(NsmcmcError):
    """A numerical routine failed hard (e.g. SVD did not converge)."""

    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class DomainError(NsmcmcError):
    """A potential or gradient was evaluated outside its valid domain."""


class UnsupportedOperationError(NsmcmcError):
    """The model does not expose the structure required by the operation."""


class FactorValidationError(NsmcmcError):
    """Factor decomposition failed coverage or reconstruction checks."""

    def __init__(self, message, worst_point=None, missing_coords=None):
        super().__init__(message)
        self.worst_point = worst_point
        self.missing_coords = missing_coords


class BoundViolationError(NsmcmcError):
    """A thinning bound was exceeded by the true event rate.

    Always a bug in the supplied bound, never recoverable: the simulated
    process would no longer target the correct distribution.
    """

    def __init__(self, message, time=None, rate=None, bound=None, coordinate=None):
        super().__init__(message)
        self.time = time
        self.rate = rate
        self.bound = bound
        self.coordinate = coordinate


class ChainDivergedError(NsmcmcError):
    """A sampler produced a non-finite or runaway state.

    Carries the partial chain collected so far for post-mortem inspection.
    """

    def __init__(self, message, state=None, partial_chain=None):
        super().__init__(message)
        self.state = state
        self.partial_chain = partial_chain


class InsufficientDataError(NsmcmcError):
    """Too few (effective) samples for the requested diagnostic."""
