"""Exception types shared across the package."""


class ValidationError(ValueError):
    """User input failed validation (bad group, bad form, bad flags)."""


class BudgetExceeded(ValidationError):
    """A group is larger than the configured enumeration budget."""


class ConsistencyError(RuntimeError):
    """An internal cross-check failed; signals a bug rather than bad input."""
