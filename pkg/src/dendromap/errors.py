"""Exceptions shared across the package."""


class DendromapError(Exception):
    """Base class for package errors."""


class DomainError(DendromapError):
    """Input lies outside the domain an operation is defined on."""


class PrecisionError(DendromapError):
    """An exact answer was requested at a point only approximable."""


class BudgetExceeded(DendromapError):
    """A search or refinement hit its configured budget before finishing."""
