"""Exception hierarchy shared by every module.

Each class name doubles as the machine-readable error name emitted by the CLI.
"""

from __future__ import annotations


class QWittError(Exception):
    """Base class for all library errors."""

    exit_code = 3

    @property
    def name(self) -> str:
        return type(self).__name__


class ConstantTermNotOne(QWittError):
    pass


class ConstantTermNotZero(QWittError):
    pass


class RingLacksRationalDivision(QWittError):
    pass


class NotInvertible(QWittError):
    pass


class UnboundVariable(QWittError):
    pass


class RingMismatch(QWittError):
    pass


class NoPsiStructure(QWittError):
    pass


class NotDivisible(QWittError):
    """An exact division had no solution in the coefficient ring."""


class ContextMismatch(QWittError):
    pass


class IntegralityViolation(QWittError):
    """A quantity that must be integral was not; always indicates a bug."""

    exit_code = 4


class DegenerateDeformation(QWittError):
    pass


class NotUnital(QWittError):
    pass


class TruncationTooShort(QWittError):
    pass


class DegreeExceedsAlphabet(QWittError):
    pass


class ParseError(QWittError):
    exit_code = 2


__all__ = [
    "QWittError",
    "ConstantTermNotOne",
    "ConstantTermNotZero",
    "RingLacksRationalDivision",
    "NotInvertible",
    "UnboundVariable",
    "RingMismatch",
    "NoPsiStructure",
    "NotDivisible",
    "ContextMismatch",
    "IntegralityViolation",
    "DegenerateDeformation",
    "NotUnital",
    "TruncationTooShort",
    "DegreeExceedsAlphabet",
    "ParseError",
]
