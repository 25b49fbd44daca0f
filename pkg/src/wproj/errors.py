"""Exception types raised by wproj.

Everything derives from :class:`UsageError` so the command line front end can
map any of them to exit code 1.
"""


class UsageError(ValueError):
    pass


class NotPrimeError(UsageError):
    pass


class ExtensionDegreeError(UsageError):
    pass


class FieldSizeError(UsageError):
    pass


class ParseError(UsageError):
    pass


class HomogeneityError(UsageError):
    pass


class ZeroPolynomialError(UsageError):
    pass


class BudgetError(UsageError):
    pass


class EmptyDegreeError(UsageError):
    """Raised when no monomial has the requested weighted degree."""
