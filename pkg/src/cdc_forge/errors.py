"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """Raised when inputs violate an operation's preconditions."""


class MissingDataError(KeyError):
    """Raised when a registry lookup has no entry for the required key."""

    def __init__(self, key, message=None):
        self.key = key
        super().__init__(message or f"missing registry entry {key!r}")

    def __str__(self):
        return self.args[0]


class FieldDivisionError(ZeroDivisionError):
    """Inverse of zero requested in a finite field."""


class ResourceError(RuntimeError):
    """An enumeration would exceed the configured budget."""


class UnsupportedDiagramError(InvalidParameterError):
    """The Ferrers diagram does not satisfy the construction's column condition."""
