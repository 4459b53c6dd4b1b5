class RiscodesError(Exception):
    """Base class for errors raised by this package."""


class ResolutionInfeasible(RiscodesError, ValueError):
    """The requested code cannot be represented with the given phase resolution."""


class ConstructionUnsupported(RiscodesError):
    """No registered construction produces a matrix of the required order."""

    def __init__(self, message: str, missing_order: int | None = None):
        super().__init__(message)
        self.missing_order = missing_order


class InvalidCode(RiscodesError, ValueError):
    """A phase code matrix failed exact orthogonality verification."""


class SearchSpaceTooLarge(RiscodesError, ValueError):
    pass


class CatalogError(RiscodesError, ValueError):
    """Malformed catalog text, or an entry that does not verify."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
