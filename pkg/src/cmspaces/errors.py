"""Exception types shared across the package."""


class DomainError(ValueError):
    """Arguments outside the mathematical domain of an operation."""


class PrecisionError(ValueError):
    """Requested precision is too low for the requested search."""

    def __init__(self, message: str, required_bits: int):
        super().__init__(message)
        self.required_bits = required_bits


class NotRationalError(ValueError):
    """An exact computation expected to land in Q did not."""
