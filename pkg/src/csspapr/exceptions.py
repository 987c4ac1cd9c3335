"""Exception types raised by csspapr."""


class ConfigurationError(ValueError):
    """Inconsistent or unsupported dimensions, sizes or options."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class PreconditionError(ValueError):
    """An operation was called on input that fails its stated precondition."""


class SearchFailedError(RuntimeError):
    """A randomized search produced no acceptable candidate."""

    def __init__(self, message: str, attempts: int):
        super().__init__(f"{message} (after {attempts} attempts)")
        self.attempts = attempts
