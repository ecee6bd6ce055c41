"""Supercycles: finite Z²-combinations of named subvarieties.

Subvarieties are opaque names with a dimension. All geometry is supplied
from outside as map degrees, fiber algebras or curve models.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .artin import FiniteSuperAlgebra, GradedModule, super_length
from .errors import (DimensionMismatch, DomainError, MissingMapData,
                     MissingPullbackData, UnknownPoint)
from .z2 import ZERO, Z2Value


@dataclass(frozen=True)
class SuperCycle:
    dim: int
    terms: tuple[tuple[str, Z2Value], ...] = ()

    def __init__(self, dim: int, terms: Mapping[str, Z2Value] | Iterable[tuple[str, Z2Value]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[str, Z2Value] = {}
        for name, coeff in items:
            if not isinstance(coeff, Z2Value):
                coeff = Z2Value.from_json(coeff)
            acc[name] = acc.get(name, ZERO) + coeff
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "terms", tuple(sorted((n, c) for n, c in acc.items() if c)))

    @classmethod
    def zero(cls, dim: int) -> SuperCycle:
        return cls(dim, ())

    def coeff(self, name: str) -> Z2Value:
        return dict(self.terms).get(name, ZERO)

    def support(self) -> list[str]:
        return [n for n, _ in self.terms]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _check_dim(self, other: SuperCycle) -> None:
        if self.dim != other.dim and self.terms and other.terms:
            raise DimensionMismatch(f"cannot combine {self.dim}-cycle with {other.dim}-cycle")

    def __add__(self, other: SuperCycle) -> SuperCycle:
        self._check_dim(other)
        dim = self.dim if self.terms else other.dim
        return SuperCycle(dim, list(self.terms) + list(other.terms))

    def __neg__(self) -> SuperCycle:
        return SuperCycle(self.dim, [(n, -c) for n, c in self.terms])

    def __sub__(self, other: SuperCycle) -> SuperCycle:
        return self + (-other)

    def scale(self, a: Z2Value) -> SuperCycle:
        """Multiply every coefficient by ``a`` in Z²."""
        return SuperCycle(self.dim, [(n, a * c) for n, c in self.terms])

    def same_as(self, other: SuperCycle) -> bool:
        # the zero cycle has no meaningful dimension
        if not self.terms and not other.terms:
            return True
        return self.dim == other.dim and self.terms == other.terms

    def to_json(self) -> dict:
        return {"dim": self.dim, "terms": [[n, c.to_json()] for n, c in self.terms]}

    @classmethod
    def from_json(cls, data: dict) -> SuperCycle:
        return cls(data["dim"], [(n, Z2Value.from_json(c)) for n, c in data.get("terms", [])])

    def __repr__(self) -> str:
        if not self.terms:
            return f"0 (dim {self.dim})"
        return " + ".join(f"{c}[{n}]" for n, c in self.terms)


class AmbientSpace:
    """Named subvarieties with dimensions; used to validate cycles."""

    def __init__(self, dims: Mapping[str, int], ambient_dim: int | None = None):
        self.dims = dict(dims)
        self.ambient_dim = ambient_dim if ambient_dim is not None else max(self.dims.values(), default=0)
        for name, h in self.dims.items():
            if h < 0 or h > self.ambient_dim:
                raise DimensionMismatch(f"{name} has dimension {h} outside [0, {self.ambient_dim}]")

    def cycle(self, dim: int, terms) -> SuperCycle:
        c = SuperCycle(dim, terms)
        self.validate(c)
        return c

    def validate(self, c: SuperCycle) -> None:
        for name in c.support():
            if name not in self.dims:
                raise UnknownPoint(f"{name} is not a subvariety of this space")
            if self.dims[name] != c.dim:
                raise DimensionMismatch(f"{name} has dimension {self.dims[name]}, cycle has {c.dim}")


@dataclass(frozen=True)
class ProperMapData:
    """Per source subvariety: (image name, degree of the function field extension).

    Degree 0 encodes a drop in dimension, which kills the class.
    """

    images: Mapping[str, tuple[str, int]]

    def then(self, other: ProperMapData) -> ProperMapData:
        """Map data of the composite ``other ∘ self``."""
        out = {}
        for name, (img, deg) in self.images.items():
            if img not in other.images:
                raise MissingMapData(f"no map data for {img} in the second map")
            img2, deg2 = other.images[img]
            out[name] = (img2, deg * deg2)
        return ProperMapData(out)

    def to_json(self) -> dict:
        return {"images": [[n, img, d] for n, (img, d) in sorted(self.images.items())]}

    @classmethod
    def from_json(cls, data: dict) -> ProperMapData:
        return cls({n: (img, int(d)) for n, img, d in data["images"]})


def pushforward(alpha: SuperCycle, f: ProperMapData) -> SuperCycle:
    out = []
    for name, coeff in alpha.terms:
        if name not in f.images:
            raise MissingMapData(f"no map data for {name}")
        img, deg = f.images[name]
        if deg < 0:
            raise DomainError(f"negative degree for {name}")
        if deg:
            out.append((img, deg * coeff))
    return SuperCycle(alpha.dim, out)


@dataclass(frozen=True)
class FiberComponent:
    """A component of f⁻¹(Z) with its generic local algebra, or a precomputed length."""

    name: str
    algebra: FiniteSuperAlgebra | None = None
    shortcut: Z2Value | None = None

    def multiplicity(self) -> Z2Value:
        if self.algebra is not None:
            return super_length(self.algebra, GradedModule.regular(self.algebra))
        if self.shortcut is None:
            raise MissingPullbackData(f"component {self.name} has neither algebra nor length")
        return self.shortcut


@dataclass(frozen=True)
class FlatPullbackData:
    m: int
    components: Mapping[str, tuple[FiberComponent, ...]] = field(default_factory=dict)

    def to_json(self) -> dict:
        comps = []
        for z, parts in sorted(self.components.items()):
            rec = []
            for c in parts:
                item = {"name": c.name}
                if c.algebra is not None:
                    item["algebra"] = c.algebra.to_json()
                else:
                    item["length"] = c.shortcut.to_json()
                rec.append(item)
            comps.append([z, rec])
        return {"m": self.m, "components": comps}

    @classmethod
    def from_json(cls, data: dict) -> FlatPullbackData:
        comps = {}
        for z, parts in data["components"]:
            rec = []
            for item in parts:
                alg = FiniteSuperAlgebra.from_json(item["algebra"]) if "algebra" in item else None
                short = Z2Value.from_json(item["length"]) if "length" in item else None
                rec.append(FiberComponent(item["name"], alg, short))
            comps[z] = tuple(rec)
        return cls(int(data["m"]), comps)


def flat_pullback(alpha: SuperCycle, d: FlatPullbackData) -> SuperCycle:
    out = []
    for name, coeff in alpha.terms:
        if name not in d.components:
            raise MissingPullbackData(f"no pullback data for {name}")
        for comp in d.components[name]:
            out.append((comp.name, coeff * comp.multiplicity()))
    return SuperCycle(alpha.dim + d.m, out)


def divisor_cycle(embedding: Mapping[str, str] | None, model, g) -> SuperCycle:
    """Image under ``embedding`` (model point name → ambient name) of div(g)."""
    div = model.div(g)
    if embedding is None:
        return div
    out = []
    for name, coeff in div.terms:
        if name not in embedding:
            raise UnknownPoint(f"point {name} has no image under the embedding")
        out.append((embedding[name], coeff))
    return SuperCycle(div.dim, out)


def verify_rational_equivalence(alpha: SuperCycle, witnesses) -> bool:
    """True iff alpha is exactly the sum of the witnesses' divisors.

    Each witness is (embedding, model, g) with the model of odd dimension 0 or 1.
    """
    total = SuperCycle.zero(alpha.dim)
    for embedding, model, g in witnesses:
        if model.odd_rank not in (0, 1):
            raise DomainError(f"witness models must have odd dimension 0 or 1, got {model.odd_rank}")
        total = total + divisor_cycle(embedding, model, g)
    return alpha.same_as(total)


def product_with_odd_point(names: Iterable[str], suffix: str = "xQ<z>") -> FlatPullbackData:
    """Pullback data for the projection Y × Spec Q⟨ζ⟩ → Y: each [Z] ↦ (1,1)[Z × pt]."""
    C = FiniteSuperAlgebra.grassmann(1)
    return FlatPullbackData(0, {n: (FiberComponent(f"{n} {suffix}", algebra=C),) for n in names})


def identity_map(names: Iterable[str]) -> ProperMapData:
    return ProperMapData({n: (n, 1) for n in names})


__all__ = [
    "SuperCycle", "AmbientSpace", "ProperMapData", "FiberComponent", "FlatPullbackData",
    "pushforward", "flat_pullback", "divisor_cycle", "verify_rational_equivalence",
    "product_with_odd_point", "identity_map",
]
