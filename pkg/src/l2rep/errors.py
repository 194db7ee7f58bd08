"""Shared exception types.

Exit-code mapping used by the CLI: UsageError -> 2, BudgetExceededError -> 3,
MathDiscrepancyError -> 4.
"""


class UsageError(ValueError):
    """Invalid configuration or arguments (bad modulus, malformed input, ...)."""


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed the allowed element budget."""

    def __init__(self, message: str, required: int | None = None, budget: int | None = None):
        super().__init__(message)
        self.required = required
        self.budget = budget


class MathDiscrepancyError(RuntimeError):
    """A computation contradicts a structural result it was expected to confirm.

    Raised only when a verification that should always succeed produces a
    counterexample witness; carries the witness for inspection.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
