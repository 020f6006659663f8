"""Exception types shared across the package."""


class ContractError(ValueError):
    """An input violates a documented precondition (shape, symmetry, range)."""


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured size budget."""

    def __init__(self, message: str, required: int, budget: int) -> None:
        super().__init__(message)
        self.required = required
        self.budget = budget


class ConvergenceError(RuntimeError):
    """An iterative solver hit its iteration limit before certifying optimality.

    The best iterate is attached so callers can decide whether to keep it.
    """

    def __init__(self, message: str, povm, value: float, gap: float) -> None:
        super().__init__(message)
        self.povm = povm
        self.value = value
        self.gap = gap
