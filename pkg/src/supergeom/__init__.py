"""Exact computations on split superschemes: Z²-valued lengths and cycles,
Berezinians, super curve divisors, de Rham and Hodge tables, dual graph
stability and Nori diagrams."""

from __future__ import annotations

from .errors import DomainError, MalformedInput
from .z2 import Z2Value
from .grassmann import GrassmannScalar, SuperMatrix, berezinian
from .artin import FiniteSuperAlgebra, GradedModule, super_length
from .cycles import SuperCycle

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "MalformedInput",
    "Z2Value",
    "GrassmannScalar",
    "SuperMatrix",
    "berezinian",
    "FiniteSuperAlgebra",
    "GradedModule",
    "super_length",
    "SuperCycle",
    "__version__",
]
