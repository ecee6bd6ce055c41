"""Exception hierarchy.

Every domain failure raised by the kernel derives from :class:`DomainError`,
which the CLI maps to exit code 1. :class:`MalformedInput` is the only
parse-level error and maps to exit code 2.
"""

from __future__ import annotations


class DomainError(ValueError):
    """Base class for all mathematical/domain errors."""


class MalformedInput(Exception):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


# graded_linalg
class NonInvertibleBlock(DomainError):
    pass


class OddParityViolation(DomainError):
    pass


class RankMismatch(DomainError):
    pass


class GeneratorCapExceeded(DomainError):
    pass


# artin_super
class NotAnAlgebra(DomainError):
    pass


class NotLocal(DomainError):
    pass


class NotAModule(DomainError):
    pass


class NotAMorphism(DomainError):
    pass


# curve_local
class ZeroFunction(DomainError):
    pass


class UnknownPoint(DomainError):
    pass


class NoEvenBasis(DomainError):
    pass


class NotEven(DomainError):
    pass


class NotFlat(DomainError):
    pass


# supercycles
class MissingMapData(DomainError):
    pass


class MissingPullbackData(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


# cohomology
class AmbiguousGenericity(DomainError):
    pass


class InconsistentDescriptor(DomainError):
    pass


class CutoffTooLarge(DomainError):
    pass


# moduli_check
class Disconnected(DomainError):
    pass


class MalformedGraph(DomainError):
    pass


class MissingImage(DomainError):
    pass


# nori
class IncompleteCompositionTable(DomainError):
    pass


class ShapeMismatch(DomainError):
    pass


class NotAPoset(DomainError):
    pass
