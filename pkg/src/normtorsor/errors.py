"""Exception hierarchy shared by every module."""


class NormTorsorError(Exception):
    """Base class for all library errors."""


class DomainError(NormTorsorError, ValueError):
    """An input lies outside the domain of an operation."""


class BudgetError(NormTorsorError):
    """A search or factorization ran out of its configured effort budget.

    ``partial`` carries whatever was learned before giving up (a transcript
    fragment, an unfactored cofactor, certified failures, ...).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial if partial is not None else {}


class UnsupportedCase(NormTorsorError):
    """The input is valid but falls outside the configurations we handle."""
