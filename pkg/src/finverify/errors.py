"""Shared error types and the default element budget."""

DEFAULT_BUDGET = 4096


class TableError(ValueError):
    """A finite table violates a stated axiom; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetError(RuntimeError):
    """A construction would materialize more elements than the budget allows."""

    def __init__(self, message, needed=None, budget=None):
        super().__init__(message)
        self.needed = needed
        self.budget = budget


def guard_budget(needed, budget, what):
    if budget is not None and needed > budget:
        raise BudgetError(
            f"{what} needs {needed} elements, budget is {budget}",
            needed=needed, budget=budget)
