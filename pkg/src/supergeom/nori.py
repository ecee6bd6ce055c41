"""Nori graphs (flags with an involution), the diagrams built from finite
categories and from posets of closed embeddings, and endomorphism algebras
of their representations in finite-dimensional super vector spaces over Q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .errors import IncompleteCompositionTable, MalformedGraph, NotAPoset, ShapeMismatch
from .linalg import Echelon, nullspace


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    target: str
    degenerate: bool = False


@dataclass
class NoriGraph:
    flags: list[str] = field(default_factory=list)
    vertices: list[str] = field(default_factory=list)
    boundary: dict[str, str] = field(default_factory=dict)
    involution: dict[str, str] = field(default_factory=dict)
    labels: dict[str, str] = field(default_factory=dict)

    def add_edge(self, eid: str, source: str, target: str, label: str | None = None) -> None:
        a, b = f"{eid}^s", f"{eid}^t"
        self.flags += [a, b]
        self.boundary[a], self.boundary[b] = source, target
        self.involution[a], self.involution[b] = b, a
        if label:
            self.labels[eid] = label

    def add_degenerate(self, eid: str, vertex: str, label: str | None = None) -> None:
        self.flags.append(eid)
        self.boundary[eid] = vertex
        self.involution[eid] = eid
        if label:
            self.labels[eid] = label

    def edges(self) -> list[Edge]:
        """One edge per j-orbit; the first-listed flag names it and is its source."""
        seen = set()
        out = []
        for f in self.flags:
            if f in seen:
                continue
            g = self.involution[f]
            seen.update((f, g))
            eid = f[:-2] if f.endswith("^s") and g == f[:-2] + "^t" else f
            out.append(Edge(eid, self.boundary[f], self.boundary[g], f == g))
        return out

    def to_json(self) -> dict:
        out = {
            "flags": list(self.flags),
            "vertices": list(self.vertices),
            "boundary": [[f, self.boundary[f]] for f in self.flags if f in self.boundary],
            "involution": [[f, self.involution[f]] for f in self.flags if f in self.involution],
        }
        if self.labels:
            out["labels"] = [[k, v] for k, v in sorted(self.labels.items())]
        return out

    @classmethod
    def from_json(cls, data: dict) -> NoriGraph:
        return cls(list(data.get("flags", [])), list(data.get("vertices", [])),
                   dict(map(tuple, data.get("boundary", []))), dict(map(tuple, data.get("involution", []))),
                   dict(map(tuple, data.get("labels", []))))


@dataclass(frozen=True)
class GraphVerdict:
    valid: bool
    violations: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"valid": self.valid, "violations": list(self.violations)}


def check_graph(G: NoriGraph) -> GraphVerdict:
    bad = []
    flags = set(G.flags)
    if len(flags) != len(G.flags):
        bad.append("duplicate flags")
    vertices = set(G.vertices)
    for f in G.flags:
        if f not in G.boundary:
            bad.append(f"flag {f} has no boundary vertex")
        elif G.boundary[f] not in vertices:
            bad.append(f"flag {f} has unknown boundary vertex {G.boundary[f]}")
        jf = G.involution.get(f)
        if jf is None:
            bad.append(f"j is undefined on flag {f}")
        elif jf not in flags:
            bad.append(f"j sends flag {f} outside the flag set")
        elif G.involution.get(jf) != f:
            bad.append(f"j(j({f})) = {G.involution.get(jf)} differs from {f}")
    return GraphVerdict(not bad, tuple(bad))


# ---------------------------------------------------------------------------
# diagram of a finite category


@dataclass
class FiniteCategory:
    objects: list[str]
    morphisms: dict[str, tuple[str, str]]
    compose: dict[tuple[str, str], str]

    @classmethod
    def from_json(cls, data: dict) -> FiniteCategory:
        objs = list(data["objects"])
        morph = {m: (s, t) for m, s, t in data.get("morphisms", [])}
        comp = {(g, f): h for g, f, h in data.get("compose", [])}
        return cls(objs, morph, comp).with_identities()

    def identity(self, x: str) -> str:
        return f"id_{x}"

    def with_identities(self) -> FiniteCategory:
        morph = dict(self.morphisms)
        comp = dict(self.compose)
        for x in self.objects:
            i = self.identity(x)
            morph.setdefault(i, (x, x))
        for m, (s, t) in morph.items():
            comp.setdefault((self.identity(t), m), m)
            comp.setdefault((m, self.identity(s)), m)
        return FiniteCategory(list(self.objects), morph, comp)

    def check(self) -> None:
        objs = set(self.objects)
        for m, (s, t) in self.morphisms.items():
            if s not in objs or t not in objs:
                raise IncompleteCompositionTable(f"morphism {m} has an unknown endpoint")
        for f, (x, z) in self.morphisms.items():
            for g, (z2, y) in self.morphisms.items():
                if z2 != z:
                    continue
                h = self.compose.get((g, f))
                if h is None:
                    raise IncompleteCompositionTable(f"composite {g}∘{f} is missing")
                if self.morphisms.get(h) != (x, y):
                    raise IncompleteCompositionTable(f"composite {g}∘{f} = {h} has the wrong endpoints")


def category_diagram(C: FiniteCategory) -> NoriGraph:
    C = C.with_identities()
    C.check()
    G = NoriGraph(vertices=list(C.objects))
    for h, (x, y) in sorted(C.morphisms.items()):
        for (g, f), h2 in sorted(C.compose.items()):
            if h2 != h:
                continue
            label = f"{g}∘{f}"
            if g == f == C.identity(x) and x == y:
                G.add_degenerate(label, x, label)
            else:
                G.add_edge(label, x, y, label)
    return G


# ---------------------------------------------------------------------------
# effective pairs


@dataclass
class EmbeddingPoset:
    elements: list[str]
    relations: list[tuple[str, str]]
    good: set[str] | None = None
    _less: set = field(default_factory=set, init=False, repr=False)

    def __post_init__(self):
        known = set(self.elements)
        if len(known) != len(self.elements):
            raise NotAPoset("duplicate elements")
        less = set()
        for a, b in self.relations:
            if a not in known or b not in known:
                raise NotAPoset(f"relation ({a}, {b}) mentions an unknown element")
            if a == b:
                raise NotAPoset(f"{a} < {a} violates irreflexivity")
            less.add((a, b))
        # transitive closure
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in product(list(less), repeat=2):
                if b == c and (a, d) not in less:
                    less.add((a, d))
                    changed = True
        for a, b in less:
            if (b, a) in less or a == b:
                raise NotAPoset(f"{a} and {b} embed into each other")
        self._less = less
        if self.good is None:
            self.good = set(self.elements)

    def lt(self, a: str, b: str) -> bool:
        return (a, b) in self._less

    def le(self, a: str, b: str) -> bool:
        return a == b or self.lt(a, b)

    @classmethod
    def from_json(cls, data: dict) -> EmbeddingPoset:
        good = set(data["good"]) if "good" in data else None
        return cls(list(data["elements"]), [tuple(r) for r in data.get("relations", [])], good)


def _vname(s1: str, s2: str, i: int) -> str:
    return f"({s1},{s2},{i})"


def effective_pairs_diagram(P: EmbeddingPoset, imax: int) -> NoriGraph:
    if imax < 0:
        raise NotAPoset("imax must be >= 0")
    good = [e for e in P.elements if e in P.good]
    pairs = [(s1, s2) for s1 in good for s2 in good if P.lt(s2, s1)]
    G = NoriGraph()
    for i in range(imax + 1):
        for s1, s2 in pairs:
            v = _vname(s1, s2, i)
            G.vertices.append(v)
            G.add_degenerate(f"id:{v}", v, "id")
    for i in range(imax + 1):
        for (s1, s2), (t1, t2) in product(pairs, repeat=2):
            if (s1, s2) != (t1, t2) and P.le(t1, s1) and P.le(t2, s2):
                src, tgt = _vname(s1, s2, i), _vname(t1, t2, i)
                G.add_edge(f"h*:{src}->{tgt}", src, tgt, "h*")
    for s1, s2, s3 in product(good, repeat=3):
        if P.lt(s3, s2) and P.lt(s2, s1):
            for i in range(imax):
                src, tgt = _vname(s2, s3, i), _vname(s1, s2, i + 1)
                G.add_edge(f"d:{src}->{tgt}", src, tgt, "boundary")
    return G


# ---------------------------------------------------------------------------
# representations


def _frac_matrix(rows) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


@dataclass
class DiagramRep:
    dims: dict[str, tuple[int, int]]
    matrices: dict[str, list[list[Fraction]]]

    @classmethod
    def from_json(cls, data: dict) -> DiagramRep:
        dims = {v: (int(e), int(o)) for v, (e, o) in data["dims"].items()} if isinstance(data["dims"], dict) \
            else {v: (int(e), int(o)) for v, (e, o) in data["dims"]}
        mats = {eid: _frac_matrix(m) for eid, m in data.get("edges", [])}
        return cls(dims, mats)

    def to_json(self) -> dict:
        from .grassmann import fraction_str

        return {"dims": {v: list(d) for v, d in sorted(self.dims.items())},
                "edges": [[e, [[fraction_str(x) for x in row] for row in m]] for e, m in sorted(self.matrices.items())]}

    def size(self, v: str) -> int:
        return sum(self.dims[v])

    def validate(self, G: NoriGraph) -> list[Edge]:
        """Return the non-degenerate edges after shape and parity checks."""
        verdict = check_graph(G)
        if not verdict.valid:
            raise MalformedGraph("; ".join(verdict.violations))
        for v in G.vertices:
            if v not in self.dims:
                raise ShapeMismatch(f"no dimensions for vertex {v}")
        out = []
        for e in G.edges():
            if e.degenerate:
                m = self.matrices.get(e.id)
                n = self.size(e.source)
                if m is not None and m != [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]:
                    raise ShapeMismatch(f"degenerate edge {e.id} must carry the identity")
                continue
            if e.id not in self.matrices:
                raise ShapeMismatch(f"no matrix for edge {e.id}")
            m = self.matrices[e.id]
            rows, cols = self.size(e.target), self.size(e.source)
            if len(m) != rows or any(len(r) != cols for r in m):
                raise ShapeMismatch(f"edge {e.id} needs a {rows}x{cols} matrix")
            pt, ps = self.dims[e.target][0], self.dims[e.source][0]
            for i in range(rows):
                for j in range(cols):
                    if m[i][j] and (i < pt) != (j < ps):
                        raise ShapeMismatch(f"edge {e.id} mixes parities at ({i}, {j})")
            out.append(e)
        return out


@dataclass
class EndAlgebra:
    even: list[dict[str, list[list[Fraction]]]]
    odd: list[dict[str, list[list[Fraction]]]]

    @property
    def dimension(self) -> tuple[int, int]:
        return len(self.even), len(self.odd)

    def to_json(self) -> dict:
        from .grassmann import fraction_str

        ser = lambda sol: {v: [[fraction_str(x) for x in r] for r in m] for v, m in sorted(sol.items())}
        return {"dimension": list(self.dimension), "even": [ser(s) for s in self.even],
                "odd": [ser(s) for s in self.odd]}


def _unknowns(G: NoriGraph, T: DiagramRep, parity: int):
    """Index the free entries (v, i, j) of a parity-preserving (0) or reversing (1) family."""
    idx = {}
    for v in G.vertices:
        p = T.dims[v][0]
        n = T.size(v)
        for i in range(n):
            for j in range(n):
                if ((i < p) == (j < p)) == (parity == 0):
                    idx[(v, i, j)] = len(idx)
    return idx


def end_algebra(G: NoriGraph, T: DiagramRep) -> EndAlgebra:
    """Solve A_target·E = E·A_source over every edge, parity by parity."""
    edges = T.validate(G)
    result = []
    for parity in (0, 1):
        idx = _unknowns(G, T, parity)
        rows = []
        for e in edges:
            E = T.matrices[e.id]
            nt, ns = T.size(e.target), T.size(e.source)
            for i in range(nt):
                for j in range(ns):
                    row: dict[int, Fraction] = {}
                    # (A_t E)_{ij} = Σ_k A_t[i,k] E[k,j]
                    for k in range(nt):
                        key = (e.target, i, k)
                        if E[k][j] and key in idx:
                            row[idx[key]] = row.get(idx[key], 0) + E[k][j]
                    # (E A_s)_{ij} = Σ_k E[i,k] A_s[k,j]
                    for k in range(ns):
                        key = (e.source, k, j)
                        if E[i][k] and key in idx:
                            row[idx[key]] = row.get(idx[key], 0) - E[i][k]
                    row = {c: x for c, x in row.items() if x}
                    if row:
                        rows.append(row)
        sols = []
        inv = {c: key for key, c in idx.items()}
        for vec in nullspace(rows, len(idx)):
            sol = {v: [[Fraction(0)] * T.size(v) for _ in range(T.size(v))] for v in G.vertices}
            for c, x in vec.items():
                v, i, j = inv[c]
                sol[v][i][j] = x
            sols.append(sol)
        result.append(sols)
    return EndAlgebra(result[0], result[1])


def solution_vector(G: NoriGraph, T: DiagramRep, sol: Mapping[str, Sequence[Sequence]]) -> dict[int, Fraction]:
    """Flatten a vertex-indexed matrix family into one sparse vector."""
    out = {}
    off = 0
    for v in G.vertices:
        n = T.size(v)
        for i in range(n):
            for j in range(n):
                if sol[v][i][j]:
                    out[off + i * n + j] = Fraction(sol[v][i][j])
        off += n * n
    return out


def is_closed_under_product(G: NoriGraph, T: DiagramRep, alg: EndAlgebra) -> bool:
    basis = alg.even + alg.odd
    span = Echelon(solution_vector(G, T, s) for s in basis)
    for a, b in product(basis, repeat=2):
        prod = {}
        for v in G.vertices:
            n = T.size(v)
            prod[v] = [[sum(a[v][i][k] * b[v][k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        if not span.contains(solution_vector(G, T, prod)):
            return False
    return True
