"""Split superdomains of even dimension one over the affine or projective line.

The structure sheaf is B = O ⊕ ΠL with L of generic rank ``odd_rank`` (0 or 1),
possibly with torsion. Points are monic irreducible polynomials in the
coordinate, or ``inf`` on the projective model. Even rational functions are
ordinary elements of Q(t).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import sympy
from sympy import Poly, QQ, Symbol

from .cycles import FiberComponent, FlatPullbackData, ProperMapData, SuperCycle
from .artin import FiniteSuperAlgebra
from .errors import (DomainError, MalformedInput, NoEvenBasis, NotEven, NotFlat,
                     RankMismatch, UnknownPoint, ZeroFunction)
from .grassmann import det, fraction_str
from .z2 import ZERO, Z2Value

INF = "inf"


def _sym(var: str) -> Symbol:
    return Symbol(var)


def _to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, sympy.Rational):
        return Fraction(int(c.p), int(c.q))
    return Fraction(c)


def _qq(c) -> sympy.Rational:
    c = _to_fraction(c)
    return sympy.Rational(c.numerator, c.denominator)


def make_poly(x, var: str = "t") -> Poly:
    """Poly over QQ from a Poly, an expression string, a number, or a coefficient list (leading first)."""
    t = _sym(var)
    if isinstance(x, Poly):
        if x.gens != (t,):
            x = Poly(x.as_expr(), t, domain=QQ)
        return x.set_domain(QQ)
    if isinstance(x, (list, tuple)):
        if not x:
            return Poly(0, t, domain=QQ)
        try:
            return Poly([_qq(c) for c in x], t, domain=QQ)
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"bad coefficient list {x!r}: {exc}") from None
    if isinstance(x, str):
        try:
            expr = sympy.sympify(x, locals={var: t}, rational=True)
        except (sympy.SympifyError, SyntaxError, TypeError) as exc:
            raise MalformedInput(f"cannot parse polynomial {x!r}") from exc
        try:
            return Poly(expr, t, domain=QQ)
        except sympy.PolynomialError as exc:
            raise MalformedInput(f"{x!r} is not a polynomial in {var}") from exc
    if isinstance(x, sympy.Expr) and not x.is_Number:
        try:
            return Poly(x, t, domain=QQ)
        except sympy.PolynomialError as exc:
            raise MalformedInput(f"{x} is not a polynomial in {var}") from exc
    return Poly(_qq(x), t, domain=QQ)


def poly_coeffs_json(p: Poly) -> list[str]:
    return [fraction_str(_to_fraction(c)) for c in p.all_coeffs()]


def _valuation(p: Poly, q: Poly) -> int:
    if p.is_zero:
        raise ZeroFunction("valuation of the zero polynomial")
    v = 0
    while True:
        quo, r = p.div(q)
        if not r.is_zero:
            return v
        p = quo
        v += 1


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Point:
    """Closed point: monic irreducible polynomial (coefficients, leading first) or infinity."""

    coeffs: tuple | None
    var: str = "t"

    @classmethod
    def infinity(cls, var: str = "t") -> Point:
        return cls(None, var)

    @classmethod
    def from_poly(cls, p, var: str = "t") -> Point:
        p = make_poly(p, var)
        if p.degree() < 1:
            raise UnknownPoint(f"{p.as_expr()} is constant, not a point")
        if p.LC() != 1:
            raise UnknownPoint(f"{p.as_expr()} is not monic")
        if not p.is_irreducible:
            raise UnknownPoint(f"{p.as_expr()} is reducible over Q")
        return cls(tuple(_to_fraction(c) for c in p.all_coeffs()), var)

    @classmethod
    def parse(cls, data, var: str = "t") -> Point:
        if isinstance(data, Point):
            return data
        if data == INF:
            return cls.infinity(var)
        return cls.from_poly(data, var)

    @property
    def is_inf(self) -> bool:
        return self.coeffs is None

    @property
    def poly(self) -> Poly:
        if self.coeffs is None:
            raise DomainError("the point at infinity has no polynomial")
        return Poly([_qq(c) for c in self.coeffs], _sym(self.var), domain=QQ)

    @property
    def degree(self) -> int:
        """Residue degree [κ(p):Q]."""
        return 1 if self.coeffs is None else len(self.coeffs) - 1

    @property
    def name(self) -> str:
        return INF if self.coeffs is None else str(self.poly.as_expr())

    def to_json(self):
        return INF if self.coeffs is None else [fraction_str(c) for c in self.coeffs]

    def __repr__(self) -> str:
        return f"Point({self.name})"


class RationalEvenFunction:
    """Reduced fraction num/den in Q(t) with monic denominator."""

    __slots__ = ("num", "den", "var")

    def __init__(self, num, den=1, var: str = "t"):
        n = make_poly(num, var)
        d = make_poly(den, var)
        if d.is_zero:
            raise ZeroFunction("denominator is zero")
        g = n.gcd(d)
        if not g.is_zero and g.degree() > 0:
            n = n.quo(g)
            d = d.quo(g)
        lc = d.LC()
        self.num = n.quo_ground(lc) if lc != 1 else n
        self.den = d.quo_ground(lc) if lc != 1 else d
        self.var = var

    @classmethod
    def parse(cls, data, var: str = "t") -> RationalEvenFunction:
        """From an expression string, or a record {num, den[, odd]} of coefficient lists."""
        if isinstance(data, RationalEvenFunction):
            return data
        if isinstance(data, dict):
            if any(data.get("odd") or []):
                raise NotEven("function has a nonzero odd component")
            return cls(data["num"], data.get("den", ["1"]), var)
        if isinstance(data, str):
            t = _sym(var)
            try:
                expr = sympy.sympify(data, locals={var: t}, rational=True)
            except (sympy.SympifyError, SyntaxError, TypeError) as exc:
                raise MalformedInput(f"cannot parse function {data!r}") from exc
            n, d = sympy.fraction(sympy.together(expr))
            return cls(n, d, var)
        return cls(data, 1, var)

    def is_zero(self) -> bool:
        return self.num.is_zero

    def _lift(self, other) -> RationalEvenFunction:
        if isinstance(other, RationalEvenFunction):
            if other.var != self.var:
                raise DomainError(f"functions in {self.var} and {other.var} cannot be combined")
            return other
        return RationalEvenFunction(other, 1, self.var)

    def __mul__(self, other):
        o = self._lift(other)
        return RationalEvenFunction(self.num * o.num, self.den * o.den, self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.is_zero():
            raise ZeroFunction("division by the zero function")
        return RationalEvenFunction(self.num * o.den, self.den * o.num, self.var)

    def __add__(self, other):
        o = self._lift(other)
        return RationalEvenFunction(self.num * o.den + o.num * self.den, self.den * o.den, self.var)

    __radd__ = __add__

    def __neg__(self):
        return RationalEvenFunction(-self.num, self.den, self.var)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalEvenFunction(other, 1, self.var)
        if not isinstance(other, RationalEvenFunction):
            return NotImplemented
        return self.var == other.var and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((tuple(self.num.all_coeffs()), tuple(self.den.all_coeffs()), self.var))

    def valuation(self, p: Point) -> int:
        if self.is_zero():
            raise ZeroFunction("order of the zero function is undefined")
        if p.is_inf:
            return self.den.degree() - self.num.degree()
        return _valuation(self.num, p.poly) - _valuation(self.den, p.poly)

    def as_expr(self):
        return self.num.as_expr() / self.den.as_expr()

    def to_json(self) -> dict:
        return {"num": poly_coeffs_json(self.num), "den": poly_coeffs_json(self.den)}

    def __repr__(self) -> str:
        return f"RationalEvenFunction({self.as_expr()})"


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuperCurveModel:
    """Split model O ⊕ ΠL over A1 or P1 in the coordinate ``var``.

    ``twist`` records L as O(Σ n_p p); it does not change local lengths.
    ``torsion`` lists (p, e) summands Q[t]/(p^e) of L.
    """

    base: str = "P1"
    odd_rank: int = 1
    twist: tuple = ()
    torsion: tuple = ()
    var: str = "t"

    def __post_init__(self):
        if self.base not in ("A1", "P1"):
            raise DomainError(f"base must be A1 or P1, got {self.base!r}")
        if self.odd_rank not in (0, 1):
            raise DomainError(f"odd rank must be 0 or 1, got {self.odd_rank}")
        for p, e in self.torsion:
            if int(e) < 1:
                raise DomainError(f"torsion exponent at {p.name} must be >= 1")
            if p.is_inf and self.base == "A1":
                raise UnknownPoint("torsion at infinity on the affine model")

    @classmethod
    def build(cls, base: str = "P1", odd_rank: int = 1, twist=(), torsion=(), var: str = "t") -> SuperCurveModel:
        tw = tuple((Point.parse(p, var), int(n)) for p, n in twist)
        to = tuple((Point.parse(p, var), int(e)) for p, e in torsion)
        return cls(base, odd_rank, tw, to, var)

    @classmethod
    def from_json(cls, data: dict) -> SuperCurveModel:
        return cls.build(data.get("base", "P1"), int(data.get("odd_rank", 1)),
                         data.get("twist", []), data.get("torsion", []), data.get("var", "t"))

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "odd_rank": self.odd_rank,
            "twist": [[p.to_json(), n] for p, n in self.twist],
            "torsion": [[p.to_json(), e] for p, e in self.torsion],
            "var": self.var,
        }

    def point(self, x) -> Point:
        p = Point.parse(x, self.var)
        if p.var != self.var:
            raise UnknownPoint(f"point in {p.var} on a model in {self.var}")
        if p.is_inf and self.base == "A1":
            raise UnknownPoint("the affine model has no point at infinity")
        return p

    def twist_degree(self) -> int:
        return sum(p.degree * n for p, n in self.twist)

    def function(self, g) -> RationalEvenFunction:
        g = RationalEvenFunction.parse(g, self.var)
        if g.var != self.var:
            raise DomainError(f"function in {g.var} on a model in {self.var}")
        return g

    def ord_at(self, p, g) -> Z2Value:
        """ℓ(B_p/(b₁)) − ℓ(B_p/(b₀)) for g = b₁/b₀ reduced."""
        p = self.point(p)
        g = self.function(g)
        if g.is_zero():
            raise ZeroFunction("order of the zero function is undefined")
        v = g.valuation(p)
        tau = 0
        for q, e in self.torsion:
            if q == p:
                # numerator and denominator are coprime, so only one side meets p
                tau += min(v, e) if v > 0 else -min(-v, e)
        return Z2Value(v, v * self.odd_rank + tau)

    def support_points(self, g: RationalEvenFunction) -> list[Point]:
        pts = []
        for poly in (g.num, g.den):
            _, factors = poly.factor_list()
            for f, _mult in factors:
                pts.append(Point.from_poly(f.monic(), self.var))
        if self.base == "P1":
            pts.append(Point.infinity(self.var))
        seen, out = set(), []
        for p in pts:
            if p not in seen:
                seen.add(p)
                out.append(p)
        return out

    def div(self, g) -> SuperCycle:
        g = self.function(g)
        if g.is_zero():
            raise ZeroFunction("divisor of the zero function is undefined")
        terms = []
        for p in self.support_points(g):
            o = self.ord_at(p, g)
            if o:
                terms.append((p.name, o))
        return SuperCycle(0, terms)

    def degree(self, cycle: SuperCycle) -> Z2Value:
        """Σ [κ(p):Q]·coeff over a 0-cycle on this model."""
        total = ZERO
        for name, c in cycle.terms:
            total = total + self.point(name).degree * c
        return total


def ord_at(model: SuperCurveModel, p, g) -> Z2Value:
    return model.ord_at(p, g)


def div_model(model: SuperCurveModel, g) -> SuperCycle:
    return model.div(g)


# ---------------------------------------------------------------------------
# superlattices


def _rf_zero(var):
    return RationalEvenFunction(0, 1, var)


def _rf_one(var):
    return RationalEvenFunction(1, 1, var)


def _rf_matrix(rows, var) -> list[list[RationalEvenFunction]]:
    return [[RationalEvenFunction.parse(x, var) for x in row] for row in rows]


def rf_det(m, var: str = "t") -> RationalEvenFunction:
    return det(m, _rf_zero(var), _rf_one(var))


def rf_inverse(m, var: str = "t"):
    n = len(m)
    zero, one = _rf_zero(var), _rf_one(var)
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if pivot is None:
            raise RankMismatch("lattice matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = one / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def rf_matmul(a, b, var: str = "t"):
    zero = _rf_zero(var)
    out = []
    for i in range(len(a)):
        row = []
        for j in range(len(b[0]) if b else 0):
            acc = zero
            for k in range(len(b)):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def local_smith_exponents(m, p: Point) -> list[int]:
    """Valuations of the elementary divisors of a nonsingular matrix over the DVR at ``p``.

    Pivot on an entry of least valuation and clear its row and column; the
    multipliers then have valuation ≥ 0 so each step is invertible over the
    local ring.
    """
    a = [list(row) for row in m]
    n = len(a)
    out = []
    for k in range(n):
        best = None
        for i in range(k, n):
            for j in range(k, n):
                if not a[i][j].is_zero():
                    v = a[i][j].valuation(p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            raise RankMismatch("lattice matrix is singular")
        v, i, j = best
        a[k], a[i] = a[i], a[k]
        for row in a:
            row[k], row[j] = row[j], row[k]
        piv = a[k][k]
        for r in range(k + 1, n):
            if not a[r][k].is_zero():
                f = a[r][k] / piv
                a[r] = [x - f * y for x, y in zip(a[r], a[k])]
        for c in range(k + 1, n):
            if not a[k][c].is_zero():
                f = a[k][c] / piv
                for row in a:
                    row[c] = row[c] - f * row[k]
        out.append(v)
    return sorted(out)


@dataclass(frozen=True)
class SuperLattice:
    """Lattice at a finite point, generated by the columns of an even and an odd block."""

    point: Point
    even: tuple
    odd: tuple

    @classmethod
    def build(cls, point, even: Sequence[Sequence], odd: Sequence[Sequence], var: str = "t") -> SuperLattice:
        p = Point.parse(point, var)
        if p.is_inf:
            raise UnknownPoint("lattices are taken at finite points")
        ev = tuple(tuple(r) for r in _rf_matrix(even, var))
        od = tuple(tuple(r) for r in _rf_matrix(odd, var))
        for block in (ev, od):
            if any(len(r) != len(block) for r in block):
                raise RankMismatch("lattice blocks must be square")
            if block and rf_det([list(r) for r in block], var).is_zero():
                raise RankMismatch("lattice generators are linearly dependent")
        return cls(p, ev, od)

    @property
    def rank(self) -> tuple[int, int]:
        return len(self.even), len(self.odd)

    def apply(self, even_map, odd_map) -> SuperLattice:
        """φ(M) for an even block-diagonal φ = diag(C₁, C₄)."""
        var = self.point.var
        ev = rf_matmul(_rf_matrix(even_map, var), [list(r) for r in self.even], var)
        od = rf_matmul(_rf_matrix(odd_map, var), [list(r) for r in self.odd], var)
        return SuperLattice.build(self.point, ev, od, var)

    def to_json(self) -> dict:
        ser = lambda block: [[str(x.as_expr()) for x in row] for row in block]
        return {"point": self.point.to_json(), "even": ser(self.even), "odd": ser(self.odd)}

    @classmethod
    def from_json(cls, data: dict) -> SuperLattice:
        var = data.get("var", "t")
        return cls.build(data["point"], data.get("even", []), data.get("odd", []), var)


def _block_distance(m, m2, p: Point) -> int:
    if not m:
        return 0
    var = p.var
    x = rf_matmul(rf_inverse([list(r) for r in m], var), [list(r) for r in m2], var)
    return sum(local_smith_exponents(x, p))


def lattice_distance(M: SuperLattice, M2: SuperLattice) -> Z2Value:
    """ℓ(M/M∩M') − ℓ(M'/M∩M'), even block into the first slot, odd into the second."""
    if M.rank != M2.rank:
        raise RankMismatch(f"lattices of rank {M.rank} and {M2.rank}")
    if M.point != M2.point:
        raise RankMismatch("lattices at different points")
    return Z2Value(_block_distance(M.even, M2.even, M.point), _block_distance(M.odd, M2.odd, M.point))


def distance_vs_berezinian(M: SuperLattice, c1, c4) -> dict:
    """Both sides of d(M, φM) = ord(ber φ) for φ = diag(C₁, C₄).

    The order is taken on the purely even base, where ord(g) = (v(g), 0).
    """
    var = M.point.var
    lhs = lattice_distance(M, M.apply(c1, c4))
    ber = rf_det(_rf_matrix(c1, var), var) / rf_det(_rf_matrix(c4, var), var)
    base = SuperCurveModel("A1", 0, (), (), var)
    rhs = base.ord_at(M.point, ber)
    return {
        "distance": lhs,
        "ord_ber": rhs,
        "full_equal": lhs == rhs,
        "sdim_equal": lhs.sdim() == rhs.sdim(),
    }


# ---------------------------------------------------------------------------
# finite covers t = φ(s), θ ↦ c(s)·η


@dataclass(frozen=True)
class CoverData:
    phi: tuple
    c: tuple
    source_var: str = "s"
    target_var: str = "t"

    @classmethod
    def double_cover(cls) -> CoverData:
        return cls.build("s**2", "s")

    @classmethod
    def build(cls, phi, c, source_var: str = "s", target_var: str = "t") -> CoverData:
        ph = make_poly(phi, source_var)
        cc = make_poly(c, source_var)
        return cls(tuple(_to_fraction(x) for x in ph.all_coeffs()),
                   tuple(_to_fraction(x) for x in cc.all_coeffs()), source_var, target_var)

    @classmethod
    def from_json(cls, data: dict) -> CoverData:
        if data.get("builtin") == "double":
            return cls.double_cover()
        return cls.build(data["phi"], data.get("c", "1"), data.get("source_var", "s"), data.get("target_var", "t"))

    def to_json(self) -> dict:
        return {"phi": [fraction_str(x) for x in self.phi], "c": [fraction_str(x) for x in self.c],
                "source_var": self.source_var, "target_var": self.target_var}

    @property
    def phi_poly(self) -> Poly:
        return make_poly(list(self.phi), self.source_var)

    @property
    def c_poly(self) -> Poly:
        return make_poly(list(self.c), self.source_var)

    @property
    def degree(self) -> int:
        return self.phi_poly.degree()

    def certify(self, target_odd_rank: int = 1) -> None:
        """Check that Q(s)⟨η⟩ has the even basis 1, s, …, s^{n-1} over Q(t)⟨θ⟩."""
        if self.degree < 1:
            raise NoEvenBasis("φ is constant; the source is not finite over the target")
        if target_odd_rank and self.c_poly.is_zero:
            raise NoEvenBasis("θ maps to zero, so the odd part of the source is not generated by even elements")

    def even_basis(self) -> list[str]:
        s = self.source_var
        return ["1"] + [s if i == 1 else f"{s}**{i}" for i in range(1, self.degree)]

    def source_model(self, base: str = "P1") -> SuperCurveModel:
        return SuperCurveModel(base, 1, (), (), self.source_var)

    def target_model(self, base: str = "P1") -> SuperCurveModel:
        return SuperCurveModel(base, 1, (), (), self.target_var)

    def _coords(self, h: Poly) -> list[Poly]:
        """Coordinates of h(s) in the basis s^i over Q[t], using φ(s) = t."""
        s, t = _sym(self.source_var), _sym(self.target_var)
        r = sympy.rem(h.as_expr(), self.phi_poly.as_expr() - t, s)
        rp = Poly(r, s, t, domain=QQ)
        out = [Poly(0, t, domain=QQ) for _ in range(self.degree)]
        for (i, j), c in rp.terms():
            out[i] = out[i] + Poly(c * t**j, t, domain=QQ)
        return out

    def multiplication_matrix(self, h) -> list[list[Poly]]:
        h = make_poly(h, self.source_var)
        s = _sym(self.source_var)
        n = self.degree
        cols = [self._coords(h * Poly(s**j, s, domain=QQ)) for j in range(n)]
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def norm(self, h) -> Poly:
        t = _sym(self.target_var)
        m = self.multiplication_matrix(h)
        return det(m, Poly(0, t, domain=QQ), Poly(1, t, domain=QQ))

    def ber_of_multiplication(self, g) -> RationalEvenFunction:
        self.certify()
        g = RationalEvenFunction.parse(g, self.source_var)
        if g.var != self.source_var:
            raise DomainError(f"function must be in {self.source_var}")
        if g.is_zero():
            raise ZeroFunction("multiplication by zero is not invertible")
        return RationalEvenFunction(self.norm(g.num), self.norm(g.den), self.target_var)

    def image(self, P) -> tuple[Point, int]:
        """Image point of P and the residue degree [κ(P):κ(f(P))]."""
        P = Point.parse(P, self.source_var)
        if P.is_inf:
            return Point.infinity(self.target_var), 1
        s, t = _sym(self.source_var), _sym(self.target_var)
        res = Poly(sympy.resultant(P.poly.as_expr(), self.phi_poly.as_expr() - t, s), t, domain=QQ)
        _, factors = res.factor_list()
        if len(factors) != 1:
            raise DomainError(f"norm of {P.name} is not a prime power")
        Q = factors[0][0].monic()
        return Point.from_poly(Q, self.target_var), P.degree // Q.degree()

    def proper_map_data(self, points: Iterable, line: tuple[str, str] | None = None) -> ProperMapData:
        images = {}
        for P in points:
            P = Point.parse(P, self.source_var)
            Q, d = self.image(P)
            images[P.name] = (Q.name, d)
        if line:
            images[line[0]] = (line[1], self.degree)
        return ProperMapData(images)

    def fiber(self, Q) -> list[tuple[Point, int]]:
        """Points of f⁻¹(Q) with the multiplicity of Q(φ(s)) along each."""
        Q = Point.parse(Q, self.target_var)
        if Q.is_inf:
            raise NotFlat("the cover datum is not flat over infinity")
        s, t = _sym(self.source_var), _sym(self.target_var)
        F = Poly(Q.poly.as_expr().subs(t, self.phi_poly.as_expr()), s, domain=QQ)
        if not F.gcd(self.c_poly).is_ground:
            raise NotFlat(f"θ ↦ c·η degenerates over {Q.name}; the cover is not flat there")
        _, factors = F.factor_list()
        return [(Point.from_poly(f.monic(), self.source_var), a) for f, a in factors]

    def pullback_data(self, points: Iterable, line: tuple[str, str] | None = None) -> FlatPullbackData:
        """Fiber components over each target point; ``line`` = (target name, source name)."""
        comps = {}
        for Q in points:
            Q = Point.parse(Q, self.target_var)
            parts = []
            for P, a in self.fiber(Q):
                if P.degree == 1:
                    parts.append(FiberComponent(P.name, algebra=FiniteSuperAlgebra.truncated_polynomial(a)))
                else:
                    # residue field is a proper extension of Q; the fiber ring is κ(P)[x]/(x^a)
                    parts.append(FiberComponent(P.name, shortcut=Z2Value(a, 0)))
            comps[Q.name] = tuple(parts)
        if line:
            comps[line[0]] = (FiberComponent(line[1], shortcut=Z2Value(1, 0)),)
        return FlatPullbackData(0, comps)


def compose_covers(f: CoverData, h: CoverData) -> CoverData:
    """Cover data of h∘f: s ↦ t = φ_f(s) ↦ u = φ_h(t)."""
    if f.target_var != h.source_var:
        raise DomainError("covers are not composable")
    s, t = _sym(f.source_var), _sym(f.target_var)
    phi = Poly(h.phi_poly.as_expr().subs(t, f.phi_poly.as_expr()), s, domain=QQ)
    c = Poly(h.c_poly.as_expr().subs(t, f.phi_poly.as_expr()) * f.c_poly.as_expr(), s, domain=QQ)
    return CoverData.build(phi, c, f.source_var, h.target_var)
