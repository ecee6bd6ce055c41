"""Dual graphs of punctured nodal supercurves and stable supermaps.

Only the numerical side is checked: genera, special point counts, the
degree identity 2·deg L = 2g − 2 + (node branches) + (RR markings) on each
component, and fiber classes pushed into a free Z²-module on named curve
classes of the target.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .cycles import SuperCycle
from .errors import Disconnected, MalformedGraph, MissingImage
from .z2 import Z2Value


@dataclass(frozen=True)
class DualGraph:
    components: tuple[tuple[str, int], ...]
    nodes: tuple[tuple[str, str], ...] = ()
    ns: tuple[tuple[str, str], ...] = ()
    rr: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple((str(n), int(g)) for n, g in self.components))
        object.__setattr__(self, "nodes", tuple((str(a), str(b)) for a, b in self.nodes))
        object.__setattr__(self, "ns", tuple((str(c), str(l)) for c, l in self.ns))
        object.__setattr__(self, "rr", tuple((str(c), str(l)) for c, l in self.rr))
        self.validate()

    @classmethod
    def from_json(cls, data: dict) -> DualGraph:
        return cls(tuple(map(tuple, data["components"])), tuple(map(tuple, data.get("nodes", []))),
                   tuple(map(tuple, data.get("ns", []))), tuple(map(tuple, data.get("rr", []))))

    def to_json(self) -> dict:
        return {"components": [list(c) for c in self.components], "nodes": [list(n) for n in self.nodes],
                "ns": [list(m) for m in self.ns], "rr": [list(m) for m in self.rr]}

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.components]

    def genus_of(self, name: str) -> int:
        return dict(self.components)[name]

    def validate(self) -> None:
        names = self.names
        if not names:
            raise MalformedGraph("a dual graph needs at least one component")
        if len(set(names)) != len(names):
            raise MalformedGraph("component names must be unique")
        for n, g in self.components:
            if g < 0:
                raise MalformedGraph(f"component {n} has negative genus")
        known = set(names)
        for a, b in self.nodes:
            if a not in known or b not in known:
                raise MalformedGraph(f"node ({a}, {b}) has an unknown endpoint")
        labels: dict[str, list[str]] = {n: [] for n in names}
        for kind, marks in (("NS", self.ns), ("RR", self.rr)):
            for c, label in marks:
                if c not in known:
                    raise MalformedGraph(f"{kind} marking {label} sits on unknown component {c}")
                labels[c].append(label)
        for c, ls in labels.items():
            dup = [l for l, k in Counter(ls).items() if k > 1]
            if dup:
                raise MalformedGraph(f"markings {dup} repeated on component {c}")

    def is_connected(self) -> bool:
        names = self.names
        adj = {n: set() for n in names}
        for a, b in self.nodes:
            adj[a].add(b)
            adj[b].add(a)
        seen = {names[0]}
        stack = [names[0]]
        while stack:
            for m in adj[stack.pop()]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return len(seen) == len(names)

    def require_connected(self) -> None:
        if not self.is_connected():
            raise Disconnected("dual graph is not connected")

    def branches(self, name: str) -> int:
        """Node branches on a component; a self-node contributes two."""
        return sum((a == name) + (b == name) for a, b in self.nodes)

    def markings(self, name: str) -> tuple[int, int]:
        return sum(c == name for c, _ in self.ns), sum(c == name for c, _ in self.rr)

    def special_points(self, name: str) -> int:
        ns, rr = self.markings(name)
        return ns + rr + self.branches(name)

    def relabel(self, comp_map: Mapping[str, str], label_map: Mapping[str, str] | None = None) -> DualGraph:
        label_map = label_map or {}
        cm = lambda n: comp_map.get(n, n)
        lm = lambda l: label_map.get(l, l)
        return DualGraph(
            tuple((cm(n), g) for n, g in self.components),
            tuple((cm(a), cm(b)) for a, b in self.nodes),
            tuple((cm(c), lm(l)) for c, l in self.ns),
            tuple((cm(c), lm(l)) for c, l in self.rr),
        )


def arithmetic_genus(G: DualGraph) -> int:
    G.require_connected()
    return sum(g for _, g in G.components) + len(G.nodes) - len(G.components) + 1


def stability_violations(G: DualGraph) -> list[str]:
    G.require_connected()
    out = []
    for name, g in G.components:
        n = G.special_points(name)
        value = 2 * g - 2 + n
        if value <= 0:
            out.append(f"component {name}: 2g-2+n = 2*{g}-2+{n} = {value} is not > 0")
    return out


def is_stable(G: DualGraph) -> bool:
    return not stability_violations(G)


def is_prestable(G: DualGraph) -> bool:
    # construction already validated the graph
    G.require_connected()
    return True


def susy_degree_violations(G: DualGraph, degL: Mapping[str, int]) -> list[str]:
    G.require_connected()
    out = []
    for name, g in G.components:
        if name not in degL:
            raise MalformedGraph(f"no degree of L given for component {name}")
        lhs = 2 * int(degL[name])
        _, rr = G.markings(name)
        rhs = 2 * g - 2 + G.branches(name) + rr
        if lhs != rhs:
            why = " (odd right-hand side)" if rhs % 2 else ""
            out.append(f"component {name}: 2*deg L = {lhs} but 2g-2+branches+n_R = {rhs}{why}")
    return out


def susy_degree_check(G: DualGraph, degL: Mapping[str, int]) -> bool:
    return not susy_degree_violations(G, degL)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComponentMap:
    contracted: bool
    image: str | None = None
    degree: int | None = None
    multiplicity: Z2Value = Z2Value(1, 1)

    def __post_init__(self):
        if self.contracted and (self.image is not None or self.degree is not None):
            raise MalformedGraph("contracted components carry no image or degree")
        if not self.contracted and self.degree is not None and self.degree < 1:
            raise MalformedGraph("map degree must be >= 1")

    @classmethod
    def from_json(cls, data: dict) -> ComponentMap:
        mult = Z2Value.from_json(data["multiplicity"]) if "multiplicity" in data else Z2Value(1, 1)
        return cls(bool(data.get("contracted", False)), data.get("image"), data.get("degree"), mult)


@dataclass(frozen=True)
class SuperMapFiberData:
    graph: DualGraph
    maps: Mapping[str, ComponentMap] = field(default_factory=dict)

    def component(self, name: str) -> ComponentMap:
        if name not in self.maps:
            raise MissingImage(f"no map data for component {name}")
        return self.maps[name]

    @classmethod
    def from_json(cls, data: dict) -> SuperMapFiberData:
        G = DualGraph.from_json(data["graph"])
        maps = {n: ComponentMap.from_json(rec) for n, rec in data.get("maps", {}).items()}
        return cls(G, maps)


def fiber_class(d: SuperMapFiberData) -> SuperCycle:
    terms = []
    for name, _ in d.graph.components:
        cm = d.component(name)
        if cm.contracted:
            continue
        if cm.image is None or cm.degree is None:
            raise MissingImage(f"component {name} is not contracted but has no image/degree")
        terms.append((cm.image, cm.degree * cm.multiplicity))
    return SuperCycle(1, terms)


def supermap_violations(fibers: Sequence[SuperMapFiberData], beta: SuperCycle) -> list[str]:
    out = []
    for k, d in enumerate(fibers):
        G = d.graph
        if not is_prestable(G):
            out.append(f"fiber {k}: not prestable")
        cls = fiber_class(d)
        if not cls.same_as(beta):
            out.append(f"fiber {k}: class {cls} differs from {beta}")
        for name, g in G.components:
            if not d.component(name).contracted:
                continue
            n = G.special_points(name)
            if g == 0 and n < 3:
                out.append(f"fiber {k}: contracted rational component {name} has {n} < 3 special points")
            if g == 1 and n < 1:
                out.append(f"fiber {k}: contracted genus-1 component {name} has no special point")
    return out


def is_stable_supermap(fibers: Sequence[SuperMapFiberData], beta: SuperCycle) -> bool:
    return not supermap_violations(fibers, beta)


def beta_good_filter(family: Iterable[tuple[str, Sequence[SuperMapFiberData]]], beta: SuperCycle) -> list[str]:
    return [label for label, fibers in family if is_stable_supermap(fibers, beta)]
