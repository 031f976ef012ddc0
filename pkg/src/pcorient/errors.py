"""Exception types shared across the package."""


class InvalidInstanceError(ValueError):
    """The instance violates a structural invariant (bad ids, self-loop, ...)."""


class InvalidDocumentError(ValueError):
    """A file could not be parsed into an instance or orientation."""


class UnsupportedError(RuntimeError):
    """The instance is valid but outside what the chosen solver can handle."""


class OracleLimitError(RuntimeError):
    """The brute-force oracle refused an instance above its size budget."""
