"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A function was called with out-of-range or inconsistent parameters."""


class DataInputError(ValueError):
    """An observation stream contained a value that cannot be monitored."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration would exceed its configured budget."""


class InfeasibleStateError(RuntimeError):
    """A forward vector carried mass on a count-infeasible state."""


class DegenerateConditioningError(ArithmeticError):
    """A conditional probability was requested for a zero-probability event."""


class ChartUsageError(RuntimeError):
    """A monitor was driven after it had already signalled."""
