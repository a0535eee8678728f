"""Exception hierarchy for the lotto toolkit."""


class LottoError(Exception):
    """Base class for every error raised by this package."""


class DomainError(LottoError, ValueError):
    """Input outside the domain of an operation.

    Raised for negative bids, supports beyond the bid cap, mismatched
    thresholds between strategies and malformed strategies.
    """


class RegimeError(LottoError, ValueError):
    """A closed-form constructor was asked to solve outside its regime."""


class SolverError(LottoError, RuntimeError):
    """Internal numerical failure (non-finite utilities, broken ordering)."""


class UsageError(LottoError):
    """Invalid command-line or configuration usage."""
