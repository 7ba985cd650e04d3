"""Exception types shared across the package.

The CLI maps these onto process exit codes: parameter errors exit 2,
format errors exit 3, capacity errors exit 4.
"""


class AddrepError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(AddrepError):
    """An argument violates a documented precondition."""


class FormatError(AddrepError):
    """An input file is malformed or inconsistent with its declared layout."""


class CapacityError(AddrepError):
    """The requested computation exceeds a stated size or memory budget."""


class ExactnessError(AddrepError):
    """A floating-point fast path could not certify an exact integer result."""
