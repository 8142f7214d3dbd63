"""Exception types shared across the package."""


class RadoRamseyError(Exception):
    """Base class for all package errors."""


class DomainError(RadoRamseyError):
    """An argument is outside the domain of the operation (bad index, m > |s|, ...)."""


class DepthError(RadoRamseyError):
    """A depth/level request exceeds what a tree or the configuration provides."""


class StructureError(RadoRamseyError):
    """An input violates a structural precondition (not meet-closed, not an antichain, ...)."""


class BudgetError(RadoRamseyError):
    """A combinatorial size cap was exceeded."""


class ContextError(RadoRamseyError):
    """An extension context fails validation; carries the individual violations."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
