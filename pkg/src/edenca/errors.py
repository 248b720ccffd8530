"""Exception types shared across the package."""


class EdenError(Exception):
    """Base class for all package errors."""


class UsageError(EdenError, ValueError):
    """Raised when an operation is called outside its contract."""


class BudgetExceeded(EdenError):
    """An enumeration or solver budget was exhausted before an answer was known."""


class DataError(EdenError, ValueError):
    """Input data (a correspondence, a pattern file) is internally inconsistent."""


class NotCompressible(UsageError):
    """The tree construction does not apply to this Cayley graph."""
