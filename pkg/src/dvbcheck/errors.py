"""Exceptions raised when inputs violate an operation's preconditions."""


class DimensionError(ValueError):
    """Array dimensions do not match the declared shape."""


class UndefinedOperation(ValueError):
    """The operation is not defined for these elements (e.g. base points differ)."""
