"""Exception types shared across the package."""


class FolnerLabError(Exception):
    pass


class BackendMismatchError(FolnerLabError):
    """Operands belong to different group backends."""


class UnsupportedOperationError(FolnerLabError):
    """Operation not defined for this backend (e.g. sign of an integer)."""


class DomainError(FolnerLabError, ValueError):
    """Argument outside the operation's domain."""


class BudgetExceededError(FolnerLabError):
    """A combinatorial search exceeded its query or size budget."""

    def __init__(self, message, queries=None):
        super().__init__(message)
        self.queries = queries


class CalibrationError(FolnerLabError):
    """Density calibration failed for a named index."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index
