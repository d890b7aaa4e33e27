"""Exception types shared across the package."""


class DocumentError(ValueError):
    """A source/function/plan document is malformed or violates an invariant."""


class BudgetError(RuntimeError):
    """An exhaustive enumeration would exceed the caller's sequence budget."""

    def __init__(self, required: int, budget: int, what: str = "enumeration"):
        self.required = required
        self.budget = budget
        super().__init__(
            f"{what} needs {required} sequences but the budget is {budget}"
        )
