"""Exceptions raised by the code constructions and their oracles."""


class QccError(Exception):
    """Base exception for strabs.mdsqcc."""

    pass


class PreconditionError(QccError, ValueError):
    """An input violates a construction hypothesis or an operation precondition."""

    pass


class ConsistencyError(QccError):
    """An internal cross-check failed."""

    pass


class DegenerateCodeError(QccError):
    """A distance was requested for a code (or dual) with no nonzero words."""

    pass


class BudgetExceeded(QccError):
    """An exhaustive oracle would exceed its work budget."""

    def __init__(self, oracle: str, required: int, budget: int):
        self.oracle = oracle
        self.required = required
        self.budget = budget
        super().__init__(
            f"{oracle} needs {required} units of work but the budget is {budget}"
        )

    def __reduce__(self):
        return (BudgetExceeded, (self.oracle, self.required, self.budget))
