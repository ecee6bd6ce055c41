"""Finite-dimensional supercommutative algebras and their graded modules.

Algebras are presented by structure constants on a homogeneous basis over Q.
The super length of a graded module over a local algebra with residue field
Q is read off the radical filtration ``M ⊃ rad·M ⊃ rad²·M ⊃ …``: each graded
piece is a super vector space over Q and each basis vector is one simple
factor of the parity it carries.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as cartesian
from typing import Iterable, Sequence

import sympy

from .errors import NotAModule, NotAMorphism, NotAnAlgebra, NotLocal
from .linalg import Echelon, Vector, add_scaled, nullspace, rref, scale, solve_in_span
from .z2 import Z2Value


def _sign(p: int, q: int) -> int:
    return -1 if (p & q & 1) else 1


class SpanBasis:
    """Fully reduced basis of a subspace, with coordinates read at pivots."""

    def __init__(self, vectors: Iterable[Vector]):
        self.rows, self.pivots = rref(vectors)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def coords(self, v: Vector) -> Vector:
        out = {i: v[p] for i, p in enumerate(self.pivots) if v.get(p)}
        residual = dict(v)
        for i, c in out.items():
            residual = add_scaled(residual, self.rows[i], -c)
        if residual:
            raise ValueError("vector outside the span")
        return out

    def lift(self, coords: Vector) -> Vector:
        out: Vector = {}
        for i, c in coords.items():
            out = add_scaled(out, self.rows[i], c)
        return out


class FiniteSuperAlgebra:
    """Supercommutative Q-algebra with homogeneous basis ``e_0..e_{n-1}``.

    ``mult[(i, j)]`` is the sparse vector of ``e_i·e_j``; missing pairs are zero.
    """

    def __init__(self, names: Sequence[str], parities: Sequence[int],
                 mult: dict[tuple[int, int], Vector], unit: Vector, check: bool = True):
        if len(names) != len(parities):
            raise NotAnAlgebra("names and parities differ in length")
        if len(set(names)) != len(names):
            raise NotAnAlgebra("basis names must be unique")
        self.names = tuple(names)
        self.parities = tuple(int(p) % 2 for p in parities)
        self.mult = {key: {k: Fraction(c) for k, c in v.items() if c} for key, v in mult.items()}
        self.mult = {key: v for key, v in self.mult.items() if v}
        self.unit = {k: Fraction(c) for k, c in unit.items() if c}
        if check:
            self.check()

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name) -> int:
        if isinstance(name, int):
            return name
        try:
            return self.names.index(name)
        except ValueError:
            raise NotAnAlgebra(f"unknown basis element {name!r}") from None

    def basis_mul(self, i: int, j: int) -> Vector:
        return self.mult.get((i, j), {})

    def mul(self, u: Vector, v: Vector) -> Vector:
        out: Vector = {}
        for i, a in u.items():
            for j, b in v.items():
                prod = self.mult.get((i, j))
                if prod:
                    out = add_scaled(out, prod, a * b)
        return out

    def basis_vector(self, i: int) -> Vector:
        return {i: Fraction(1)}

    def is_homogeneous(self, v: Vector, parity: int | None = None) -> bool:
        ps = {self.parities[i] for i in v}
        if len(ps) > 1:
            return False
        return parity is None or not ps or ps == {parity}

    def check(self) -> None:
        n = self.dim
        for i in range(n):
            if self.mul(self.unit, self.basis_vector(i)) != self.basis_vector(i):
                raise NotAnAlgebra(f"unit does not act as identity on {self.names[i]}")
        for (i, j), v in self.mult.items():
            want = (self.parities[i] + self.parities[j]) % 2
            if not self.is_homogeneous(v, want):
                raise NotAnAlgebra(f"product {self.names[i]}*{self.names[j]} is not of parity {want}")
        for i in range(n):
            for j in range(n):
                s = _sign(self.parities[i], self.parities[j])
                if self.basis_mul(i, j) != scale(self.basis_mul(j, i), s):
                    raise NotAnAlgebra(f"{self.names[i]}, {self.names[j]} do not supercommute")
        for i, j, k in cartesian(range(n), repeat=3):
            left = self.mul(self.basis_mul(i, j), self.basis_vector(k))
            right = self.mul(self.basis_vector(i), self.basis_mul(j, k))
            if left != right:
                raise NotAnAlgebra(
                    f"associativity fails on ({self.names[i]}, {self.names[j]}, {self.names[k]})")

    # -- standard examples --------------------------------------------------
    @classmethod
    def field(cls) -> FiniteSuperAlgebra:
        return cls(["1"], [0], {(0, 0): {0: 1}}, {0: 1})

    @classmethod
    def grassmann(cls, n: int) -> FiniteSuperAlgebra:
        """Q⟨θ₁..θ_n⟩, basis indexed by subsets."""
        masks = sorted(range(1 << n), key=lambda m: (bin(m).count("1"), m))
        pos = {m: i for i, m in enumerate(masks)}
        names = ["".join(f"th{j + 1}" for j in range(n) if m >> j & 1) or "1" for m in masks]
        parities = [bin(m).count("1") % 2 for m in masks]
        from .grassmann import merge_sign

        mult = {}
        for a in masks:
            for b in masks:
                if not a & b:
                    mult[(pos[a], pos[b])] = {pos[a | b]: merge_sign(a, b)}
        return cls(names, parities, mult, {0: 1})

    @classmethod
    def truncated_polynomial(cls, d: int, var: str = "x") -> FiniteSuperAlgebra:
        """Q[x]/(x^d) with x even."""
        names = ["1"] + [f"{var}^{i}" if i > 1 else var for i in range(1, d)]
        mult = {(i, j): {i + j: 1} for i in range(d) for j in range(d) if i + j < d}
        return cls(names, [0] * d, mult, {0: 1})

    def tensor(self, other: FiniteSuperAlgebra) -> FiniteSuperAlgebra:
        """Graded tensor product: (a⊗b)(a'⊗b') = (−1)^{|b||a'|} aa' ⊗ bb'."""
        n, m = self.dim, other.dim
        idx = lambda i, j: i * m + j
        names = [f"{a}*{b}" if a != "1" and b != "1" else (b if a == "1" else a)
                 for a in self.names for b in other.names]
        if len(set(names)) != len(names):
            names = [f"{a}|{b}" for a in self.names for b in other.names]
        parities = [(p + q) % 2 for p in self.parities for q in other.parities]
        mult = {}
        for (i, i2), u in self.mult.items():
            for (j, j2), w in other.mult.items():
                s = _sign(other.parities[j], self.parities[i2])
                vec = {}
                for a, ca in u.items():
                    for b, cb in w.items():
                        vec[idx(a, b)] = s * ca * cb
                mult[(idx(i, j), idx(i2, j2))] = vec
        unit = {idx(a, b): ca * cb for a, ca in self.unit.items() for b, cb in other.unit.items()}
        return FiniteSuperAlgebra(names, parities, mult, unit, check=False)

    def product(self, other: FiniteSuperAlgebra) -> FiniteSuperAlgebra:
        """Direct product A × B (a semilocal algebra when both are local)."""
        n = self.dim
        names = [f"{x}@0" for x in self.names] + [f"{x}@1" for x in other.names]
        parities = list(self.parities) + list(other.parities)
        mult = dict(self.mult)
        for (i, j), v in other.mult.items():
            mult[(i + n, j + n)] = {k + n: c for k, c in v.items()}
        unit = dict(self.unit)
        unit.update({k + n: c for k, c in other.unit.items()})
        return FiniteSuperAlgebra(names, parities, mult, unit, check=False)

    # -- radical ------------------------------------------------------------
    def odd_ideal_even_part(self) -> list[Vector]:
        """Spanning vectors of A₁·A₁, the even part of the ideal generated by odd elements."""
        odd = [i for i, p in enumerate(self.parities) if p]
        return [v for i in odd for j in odd if (v := self.basis_mul(i, j))]

    def radical(self) -> list[Vector]:
        """Homogeneous basis of the largest nilpotent (graded) ideal.

        rad = A₁ ⊕ preimage in A₀ of the nilradical of A₀/(A₁·A₁); the
        nilradical of that commutative quotient is the kernel of its trace
        form ``(x, y) ↦ tr(L_{xy})`` (characteristic zero).
        """
        even = [i for i, p in enumerate(self.parities) if p == 0]
        odd = [i for i, p in enumerate(self.parities) if p == 1]
        j0 = Echelon(self.odd_ideal_even_part())
        complement = [i for i in even if i not in j0.pivots]
        pos = {i: k for k, i in enumerate(complement)}

        def to_quot(v: Vector) -> Vector:
            r = j0.reduce(v)
            return {pos[i]: c for i, c in r.items()}

        qdim = len(complement)
        # L_{e_a} on the quotient, column-wise
        def left_trace(v: Vector) -> Fraction:
            t = Fraction(0)
            for b, i in enumerate(complement):
                img = to_quot(self.mul(v, self.basis_vector(i)))
                t += img.get(b, 0)
            return t

        gram = []
        for a in complement:
            row = {}
            for b, i in enumerate(complement):
                t = left_trace(self.basis_mul(a, i))
                if t:
                    row[b] = t
            gram.append(row)
        nil = nullspace(gram, qdim)
        lifted = [{complement[k]: c for k, c in v.items()} for v in nil]
        basis = Echelon()
        for i in odd:
            basis.add(self.basis_vector(i))
        for v in j0.basis() + lifted:
            basis.add(v)
        return basis.basis()

    def residue_dimension(self) -> int:
        return self.dim - len(self.radical())

    def is_local(self) -> bool:
        return self.residue_dimension() == 1

    # -- serialisation --------------------------------------------------------
    def to_json(self) -> dict:
        from .grassmann import fraction_str

        mult = []
        for (i, j), v in sorted(self.mult.items()):
            mult.append([self.names[i], self.names[j], [[self.names[k], fraction_str(c)] for k, c in sorted(v.items())]])
        return {
            "basis": [[n, p] for n, p in zip(self.names, self.parities)],
            "mult": mult,
            "unit": [[self.names[k], fraction_str(c)] for k, c in sorted(self.unit.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> FiniteSuperAlgebra:
        names = [b[0] for b in data["basis"]]
        parities = [int(b[1]) for b in data["basis"]]
        look = {n: i for i, n in enumerate(names)}

        def ix(x):
            if x not in look:
                raise NotAnAlgebra(f"unknown basis element {x!r}")
            return look[x]

        mult = {}
        for left, right, terms in data["mult"]:
            mult[(ix(left), ix(right))] = {ix(k): Fraction(c) for k, c in terms}
        unit = {ix(k): Fraction(c) for k, c in data.get("unit", [[names[0], "1"]])}
        return cls(names, parities, mult, unit)


class GradedModule:
    """Graded left module over a :class:`FiniteSuperAlgebra`.

    ``action[(a, m)]`` is the sparse vector of ``e_a · m_m``.
    """

    def __init__(self, algebra: FiniteSuperAlgebra, parities: Sequence[int],
                 action: dict[tuple[int, int], Vector], names: Sequence[str] | None = None,
                 check: bool = True):
        self.algebra = algebra
        self.parities = tuple(int(p) % 2 for p in parities)
        self.names = tuple(names) if names is not None else tuple(f"m{i}" for i in range(len(parities)))
        self.action = {key: {k: Fraction(c) for k, c in v.items() if c} for key, v in action.items()}
        self.action = {key: v for key, v in self.action.items() if v}
        if check:
            self.check()

    @property
    def dim(self) -> int:
        return len(self.parities)

    def superdim(self) -> Z2Value:
        odd = sum(self.parities)
        return Z2Value(self.dim - odd, odd)

    def act(self, a: Vector, m: Vector) -> Vector:
        out: Vector = {}
        for i, x in a.items():
            for j, y in m.items():
                img = self.action.get((i, j))
                if img:
                    out = add_scaled(out, img, x * y)
        return out

    def check(self) -> None:
        A = self.algebra
        for j in range(self.dim):
            mj = {j: Fraction(1)}
            if self.act(A.unit, mj) != mj:
                raise NotAModule(f"unit does not act as identity on {self.names[j]}")
        for (a, j), v in self.action.items():
            want = (A.parities[a] + self.parities[j]) % 2
            if any(self.parities[k] != want for k in v):
                raise NotAModule(f"{A.names[a]}·{self.names[j]} is not of parity {want}")
        for a, b, j in cartesian(range(A.dim), range(A.dim), range(self.dim)):
            mj = {j: Fraction(1)}
            left = self.act(A.basis_mul(a, b), mj)
            right = self.act(A.basis_vector(a), self.act(A.basis_vector(b), mj))
            if left != right:
                raise NotAModule(f"action is not associative on ({A.names[a]}, {A.names[b]}, {self.names[j]})")

    # -- constructions ----------------------------------------------------------
    @classmethod
    def regular(cls, A: FiniteSuperAlgebra) -> GradedModule:
        return cls(A, A.parities, dict(A.mult), names=A.names, check=False)

    @classmethod
    def residue(cls, A: FiniteSuperAlgebra, parity: int = 0) -> GradedModule:
        """A/rad(A), shifted to ``parity``."""
        M = cls.regular(A).quotient(A.radical())
        return M.parity_shift() if parity else M

    def parity_shift(self) -> GradedModule:
        """ΠM.  Left action gains the sign (−1)^{|a|} so that the result is a module."""
        action = {}
        for (a, j), v in self.action.items():
            action[(a, j)] = scale(v, -1) if self.algebra.parities[a] else dict(v)
        return GradedModule(self.algebra, [1 - p for p in self.parities], action,
                            names=[f"Pi({n})" for n in self.names], check=False)

    def direct_sum(self, other: GradedModule) -> GradedModule:
        if other.algebra is not self.algebra:
            raise NotAModule("direct sum of modules over different algebras")
        n = self.dim
        action = dict(self.action)
        for (a, j), v in other.action.items():
            action[(a, j + n)] = {k + n: c for k, c in v.items()}
        names = [f"{x}@0" for x in self.names] + [f"{x}@1" for x in other.names]
        return GradedModule(self.algebra, self.parities + other.parities, action, names=names, check=False)

    def submodule_span(self, generators: Iterable[Vector]) -> Echelon:
        """Echelon basis of the submodule generated by homogeneous vectors."""
        A = self.algebra
        ech = Echelon()
        for g in generators:
            for a in range(A.dim):
                ech.add(self.act(A.basis_vector(a), g))
        return ech

    def quotient(self, generators: Iterable[Vector]) -> GradedModule:
        """M / (submodule generated by ``generators``)."""
        sub = self.submodule_span(generators)
        keep = [j for j in range(self.dim) if j not in sub.pivots]
        pos = {j: k for k, j in enumerate(keep)}

        def proj(v: Vector) -> Vector:
            return {pos[j]: c for j, c in sub.reduce(v).items()}

        action = {}
        for a in range(self.algebra.dim):
            for k, j in enumerate(keep):
                img = proj(self.act(self.algebra.basis_vector(a), {j: Fraction(1)}))
                if img:
                    action[(a, k)] = img
        return GradedModule(self.algebra, [self.parities[j] for j in keep], action,
                            names=[self.names[j] for j in keep], check=False)

    def submodule(self, generators: Iterable[Vector]) -> GradedModule:
        """The submodule generated by ``generators`` as a module in its own right."""
        span = SpanBasis(self.submodule_span(generators).basis())
        parities = []
        for row in span.rows:
            ps = {self.parities[j] for j in row}
            if len(ps) != 1:
                raise NotAModule("generators must be homogeneous")
            parities.append(ps.pop())
        action = {}
        for a in range(self.algebra.dim):
            for k, row in enumerate(span.rows):
                img = self.act(self.algebra.basis_vector(a), row)
                if img:
                    action[(a, k)] = span.coords(img)
        return GradedModule(self.algebra, parities, action, check=False)

    # -- serialisation ------------------------------------------------------------
    def to_json(self) -> dict:
        from .grassmann import fraction_str

        A = self.algebra
        action = []
        for (a, j), v in sorted(self.action.items()):
            action.append([A.names[a], self.names[j], [[self.names[k], fraction_str(c)] for k, c in sorted(v.items())]])
        return {"basis": [[n, p] for n, p in zip(self.names, self.parities)], "action": action}

    @classmethod
    def from_json(cls, A: FiniteSuperAlgebra, data: dict) -> GradedModule:
        names = [b[0] for b in data["basis"]]
        parities = [int(b[1]) for b in data["basis"]]
        look = {n: i for i, n in enumerate(names)}
        action = {}
        for a, m, terms in data["action"]:
            if m not in look or any(k not in look for k, _ in terms):
                raise NotAModule(f"unknown module basis element in action entry {a!r}, {m!r}")
            action[(A.index(a), look[m])] = {look[k]: Fraction(c) for k, c in terms}
        return cls(A, parities, action, names=names)


def super_length(A: FiniteSuperAlgebra, M: GradedModule) -> Z2Value:
    """Z²-valued length of ``M`` over the local algebra ``A`` with residue field Q."""
    if M.algebra is not A:
        raise NotAModule("module is over a different algebra")
    rad = A.radical()
    if A.dim - len(rad) != 1:
        raise NotLocal(f"A/rad(A) has dimension {A.dim - len(rad)}; need a local algebra with residue field Q")
    even = odd = 0
    layer = Echelon({j: Fraction(1)} for j in range(M.dim))
    steps = 0
    while layer.dim:
        nxt = Echelon()
        for v in layer.basis():
            for r in rad:
                nxt.add(M.act(r, v))
        e_layer = sum(1 for p, _ in layer.rows if M.parities[p] == 0)
        e_next = sum(1 for p, _ in nxt.rows if M.parities[p] == 0)
        even += e_layer - e_next
        odd += (layer.dim - e_layer) - (nxt.dim - e_next)
        layer = nxt
        steps += 1
        if steps > M.dim + 1:
            raise NotLocal("radical filtration does not terminate; radical is not nilpotent")
    return Z2Value(even, odd)


# ---------------------------------------------------------------------------
# morphisms and base change


class AlgebraMap:
    """Unit-preserving even algebra morphism given by images of source basis vectors."""

    def __init__(self, source: FiniteSuperAlgebra, target: FiniteSuperAlgebra,
                 images: Sequence[Vector], check: bool = True):
        self.source = source
        self.target = target
        self.images = [{k: Fraction(c) for k, c in v.items() if c} for v in images]
        if check:
            self.check()

    def __call__(self, v: Vector) -> Vector:
        out: Vector = {}
        for i, c in v.items():
            out = add_scaled(out, self.images[i], c)
        return out

    def check(self) -> None:
        A, B = self.source, self.target
        if len(self.images) != A.dim:
            raise NotAMorphism("one image per source basis vector is required")
        if self(A.unit) != B.unit:
            raise NotAMorphism("map does not preserve the unit")
        for i, v in enumerate(self.images):
            if not B.is_homogeneous(v, A.parities[i]):
                raise NotAMorphism(f"image of {A.names[i]} has the wrong parity")
        for i in range(A.dim):
            for j in range(A.dim):
                if self(A.basis_mul(i, j)) != B.mul(self.images[i], self.images[j]):
                    raise NotAMorphism(f"map is not multiplicative on ({A.names[i]}, {A.names[j]})")

    @classmethod
    def identity(cls, A: FiniteSuperAlgebra) -> AlgebraMap:
        return cls(A, A, [A.basis_vector(i) for i in range(A.dim)], check=False)

    @classmethod
    def into_tensor(cls, A: FiniteSuperAlgebra, C: FiniteSuperAlgebra) -> tuple[AlgebraMap, FiniteSuperAlgebra]:
        """The free extension a ↦ a⊗1 into B = A⊗C."""
        B = A.tensor(C)
        unit_c = C.unit
        images = [{i * C.dim + j: c for j, c in unit_c.items()} for i in range(A.dim)]
        return cls(A, B, images), B


def base_change_module(M: GradedModule, f: AlgebraMap) -> GradedModule:
    """M ⊗_A B as a graded B-module.

    Basis ``m_i ⊗ b_j`` of M ⊗_Q B modulo the relations
    ``(m_i·a) ⊗ b = m_i ⊗ f(a)·b`` where ``m·a = (−1)^{|a||m|} a·m``.
    B acts by ``b'·(m⊗b) = (−1)^{|b'||m|} m ⊗ b'b``.
    """
    if M.algebra is not f.source:
        raise NotAMorphism("module is not over the source of the map")
    A, B = f.source, f.target
    nb = B.dim
    idx = lambda i, j: i * nb + j
    parities = [(M.parities[i] + B.parities[j]) % 2 for i in range(M.dim) for j in range(nb)]
    names = [f"{M.names[i]}(x){B.names[j]}" for i in range(M.dim) for j in range(nb)]
    relations = []
    for i in range(M.dim):
        for a in range(A.dim):
            s = _sign(A.parities[a], M.parities[i])
            am = M.act(A.basis_vector(a), {i: Fraction(1)})
            fa = f.images[a]
            for j in range(nb):
                rel: Vector = {}
                for k, c in am.items():
                    rel = add_scaled(rel, {idx(k, j): Fraction(1)}, s * c)
                fab = B.mul(fa, B.basis_vector(j))
                for l, c in fab.items():
                    rel = add_scaled(rel, {idx(i, l): Fraction(1)}, -c)
                if rel:
                    relations.append(rel)
    action = {}
    for b in range(nb):
        for i in range(M.dim):
            s = _sign(B.parities[b], M.parities[i])
            for j in range(nb):
                prod = B.basis_mul(b, j)
                if prod:
                    action[(b, idx(i, j))] = {idx(i, l): s * c for l, c in prod.items()}
    # relations span a B-submodule already; quotient by their span only
    free = GradedModule(B, parities, action, names=names, check=False)
    rel_span = Echelon(relations)
    keep = [j for j in range(free.dim) if j not in rel_span.pivots]
    pos = {j: k for k, j in enumerate(keep)}
    q_action = {}
    for b in range(nb):
        for k, j in enumerate(keep):
            img = rel_span.reduce(free.act(B.basis_vector(b), {j: Fraction(1)}))
            if img:
                q_action[(b, k)] = {pos[t]: c for t, c in img.items()}
    return GradedModule(B, [parities[j] for j in keep], q_action, names=[names[j] for j in keep])


def fiber_module(f: AlgebraMap) -> GradedModule:
    """B / m_A·B as a B-module, where m_A is the radical of the local source."""
    B = f.target
    gens = [B.mul(f(r), B.basis_vector(j)) for r in f.source.radical() for j in range(B.dim)]
    return GradedModule.regular(B).quotient([g for g in gens if g])


# ---------------------------------------------------------------------------
# semilocal decomposition


def _powers_min_poly(A: FiniteSuperAlgebra, x: Vector, reduce) -> list[Fraction]:
    """Monic minimal polynomial of ``x`` in the quotient described by ``reduce``."""
    powers = [reduce(A.unit)]
    while True:
        nxt = reduce(A.mul(powers[-1], x)) if len(powers) > 1 else reduce(x)
        coeffs = solve_in_span(powers, nxt)
        if coeffs is not None:
            # x^d = Σ c_i x^i  →  t^d − Σ c_i t^i
            d = len(powers)
            return [Fraction(1)] + [-coeffs.get(i, Fraction(0)) for i in range(d - 1, -1, -1)]
        powers.append(nxt)


def orthogonal_idempotents(A: FiniteSuperAlgebra) -> list[Vector]:
    """Complete set of primitive orthogonal even idempotents of A.

    Requires the semisimple quotient A/rad to be split (≅ Q^r); otherwise the
    residue fields are proper extensions of Q and NotLocal is raised.
    """
    rad = Echelon(A.radical())
    r = A.dim - rad.dim
    if r == 1:
        return [dict(A.unit)]
    even = [i for i, p in enumerate(A.parities) if p == 0]
    t = sympy.Symbol("t")
    for attempt in range(1, 4 * r + 8):
        # deterministic family of candidate separating elements
        x = {i: Fraction((k * attempt) % (2 * r + 3) + k + 1) for k, i in enumerate(even)}
        mp = _powers_min_poly(A, x, rad.reduce)
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in mp], t, domain="QQ")
        _, factors = poly.factor_list()
        if any(f.degree() > 1 for f, _ in factors):
            raise NotLocal("a residue field is a proper extension of Q")
        roots = [-f.all_coeffs()[1] / f.all_coeffs()[0] for f, _ in factors]
        if len(roots) < r:
            continue
        idems = []
        for i, ri in enumerate(roots):
            # Lagrange basis polynomial evaluated at x, then lifted
            e = dict(A.unit)
            for j, rj in enumerate(roots):
                if j == i:
                    continue
                shifted = add_scaled(x, A.unit, -Fraction(int(rj.p), int(rj.q)))
                e = A.mul(e, scale(shifted, 1 / (Fraction(int(ri.p), int(ri.q)) - Fraction(int(rj.p), int(rj.q)))))
            idems.append(_lift_idempotent(A, e))
        return idems
    raise NotLocal("could not separate the local factors")


def _lift_idempotent(A: FiniteSuperAlgebra, e: Vector) -> Vector:
    for _ in range(64):
        e2 = A.mul(e, e)
        if e2 == e:
            return e
        e3 = A.mul(e2, e)
        e = add_scaled(scale(e2, 3), e3, -2)
    raise NotLocal("idempotent lifting did not converge")


def local_factor(A: FiniteSuperAlgebra, e: Vector) -> tuple[FiniteSuperAlgebra, SpanBasis]:
    """The local algebra e·A with unit e, plus the basis used to embed it in A."""
    span = SpanBasis([v for j in range(A.dim) if (v := A.mul(e, A.basis_vector(j)))])
    parities = []
    for row in span.rows:
        parities.append(A.parities[next(iter(row))])
    mult = {}
    for a, ra in enumerate(span.rows):
        for b, rb in enumerate(span.rows):
            prod = A.mul(ra, rb)
            if prod:
                mult[(a, b)] = span.coords(prod)
    names = [f"f{i}" for i in range(span.dim)]
    return FiniteSuperAlgebra(names, parities, mult, span.coords(e), check=False), span


def semilocal_length(A: FiniteSuperAlgebra, M: GradedModule) -> Z2Value:
    """Length of M over a semilocal A whose residue fields are all Q.

    M = ⊕ e_i·M and the length is the sum over the local factors e_i·A.
    """
    total = Z2Value(0, 0)
    for e in orthogonal_idempotents(A):
        Ai, span = local_factor(A, e)
        sub = SpanBasis([v for j in range(M.dim) if (v := M.act(e, {j: Fraction(1)}))])
        parities = [M.parities[next(iter(row))] for row in sub.rows]
        action = {}
        for a, ra in enumerate(span.rows):
            for k, row in enumerate(sub.rows):
                img = M.act(ra, row)
                if img:
                    action[(a, k)] = sub.coords(img)
        Mi = GradedModule(Ai, parities, action, check=False)
        total = total + super_length(Ai, Mi)
    return total
