"""Grassmann coefficients, parity-blocked supermatrices and the berezinian.

A :class:`GrassmannScalar` is an element of the exterior algebra
Λ = Q⟨ε₁..ε_k⟩.  Monomials are stored as bitmasks (bit ``i-1`` set means
ε_i occurs), always in increasing index order, so the sign of a product is
the parity of the number of inversions when two sorted words are merged.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    GeneratorCapExceeded,
    NonInvertibleBlock,
    OddParityViolation,
    RankMismatch,
)

DEFAULT_GENERATOR_CAP = 8
CAP_ENV_VAR = "SUPERGEOM_MAX_GENERATORS"


def generator_cap() -> int:
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None:
        return DEFAULT_GENERATOR_CAP
    return int(raw)


def merge_sign(a: int, b: int) -> int:
    """Sign picked up when the sorted word ``a`` is concatenated with ``b`` and re-sorted.

    Caller guarantees ``a & b == 0``.
    """
    swaps = 0
    bb = b
    while bb:
        low = bb & -bb
        # generators in a with a larger index than this one must hop over it
        swaps += bin(a & ~((low << 1) - 1)).count("1")
        bb ^= low
    return -1 if swaps & 1 else 1


def _popcount(m: int) -> int:
    return bin(m).count("1")


class GrassmannScalar:
    __slots__ = ("terms", "k")

    def __init__(self, terms: dict[int, Fraction] | None = None, k: int = 0):
        if k > generator_cap():
            raise GeneratorCapExceeded(f"{k} generators exceeds cap {generator_cap()}")
        clean = {}
        for m, c in (terms or {}).items():
            if c:
                if m >> k:
                    raise ValueError(f"monomial {m:b} uses generators beyond k={k}")
                clean[m] = Fraction(c)
        self.terms = clean
        self.k = k

    # -- constructors -----------------------------------------------------
    @classmethod
    def scalar(cls, c, k: int = 0) -> GrassmannScalar:
        return cls({0: Fraction(c)}, k)

    @classmethod
    def generator(cls, i: int, k: int) -> GrassmannScalar:
        """ε_i (1-based)."""
        if not 1 <= i <= k:
            raise ValueError(f"generator index {i} outside 1..{k}")
        return cls({1 << (i - 1): Fraction(1)}, k)

    @classmethod
    def from_pairs(cls, pairs: Iterable, k: int) -> GrassmannScalar:
        """Build from ``[(index_list, coefficient), ...]`` with 1-based indices.

        Unsorted index lists are accepted and reordered with the matching sign.
        """
        out = cls({}, k)
        for idx, c in pairs:
            term = cls.scalar(Fraction(c), k)
            for i in idx:
                term = term * cls.generator(int(i), k)
            out = out + term
        return out

    # -- structure --------------------------------------------------------
    @property
    def body(self) -> Fraction:
        return self.terms.get(0, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def is_even(self) -> bool:
        return all(_popcount(m) % 2 == 0 for m in self.terms)

    def is_odd(self) -> bool:
        return all(_popcount(m) % 2 == 1 for m in self.terms)

    def parity(self) -> int | None:
        """0 or 1 for homogeneous elements, None otherwise (zero counts as even)."""
        if self.is_even():
            return 0
        if self.is_odd():
            return 1
        return None

    def nilpotent_part(self) -> GrassmannScalar:
        return GrassmannScalar({m: c for m, c in self.terms.items() if m}, self.k)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> GrassmannScalar:
        if isinstance(other, GrassmannScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return GrassmannScalar.scalar(other, self.k)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return GrassmannScalar(terms, max(self.k, other.k))

    __radd__ = __add__

    def __neg__(self):
        return GrassmannScalar({m: -c for m, c in self.terms.items()}, self.k)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[int, Fraction] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                if a & b:
                    continue
                m = a | b
                terms[m] = terms.get(m, 0) + merge_sign(a, b) * ca * cb
        return GrassmannScalar(terms, max(self.k, other.k))

    def __rmul__(self, other):
        # scalars from Q are central
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __pow__(self, n: int):
        out = GrassmannScalar.scalar(1, self.k)
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> GrassmannScalar:
        """Inverse of an even element with nonzero body.

        x = a + n with n nilpotent and even: x⁻¹ = a⁻¹ Σ_{i ≤ k/2} (−n/a)^i.
        """
        if not self.is_even():
            raise OddParityViolation("only even Grassmann scalars are inverted here")
        a = self.body
        if a == 0:
            raise NonInvertibleBlock("Grassmann scalar with zero body is not invertible")
        u = self.nilpotent_part() * Fraction(-1, 1) * (1 / a)
        term = GrassmannScalar.scalar(1, self.k)
        total = term
        for _ in range(self.k // 2):
            term = term * u
            if term.is_zero():
                break
            total = total + term
        return total * (1 / a)

    # -- serialisation ----------------------------------------------------
    def to_pairs(self) -> list:
        out = []
        for m in sorted(self.terms, key=lambda m: (_popcount(m), m)):
            idx = [i + 1 for i in range(self.k) if m >> i & 1]
            out.append([idx, fraction_str(self.terms[m])])
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx, c in self.to_pairs():
            mon = "".join(f"e{i}" for i in idx)
            if not mon:
                parts.append(c)
            elif c == "1":
                parts.append(mon)
            elif c == "-1":
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")


def fraction_str(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# generic commutative-ring helpers


def det(matrix: Sequence[Sequence], zero, one):
    """Division-free determinant by Laplace expansion with subset memoisation.

    Valid over any commutative ring; entries only need ``+``, ``-``, ``*``.
    Cost is O(n 2^n) ring multiplications, which is fine for n ≤ 10.
    """
    n = len(matrix)
    if n == 0:
        return one
    if any(len(row) != n for row in matrix):
        raise RankMismatch("determinant of a non-square matrix")
    # minors[cols] = det of rows (n-|cols|..n-1) restricted to column set cols
    minors = {0: one}
    for r in range(n - 1, -1, -1):
        new = {}
        for cols, sub in minors.items():
            for c in range(n):
                if cols >> c & 1:
                    continue
                entry = matrix[r][c]
                if entry == zero or sub == zero:
                    continue
                # sign from the position of c among the columns cols ∪ {c}
                pos = bin(cols & ((1 << c) - 1)).count("1")
                term = entry * sub
                if pos & 1:
                    term = zero - term
                key = cols | (1 << c)
                new[key] = new[key] + term if key in new else term
        minors = new
    return minors.get((1 << n) - 1, zero)


def _matmul(a, b, zero):
    rows = len(a)
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = zero
            for k in range(inner):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def invert_even_matrix(m: list[list[GrassmannScalar]], k: int) -> list[list[GrassmannScalar]]:
    """Inverse of a square matrix of even Grassmann scalars.

    Even scalars commute, so Gauss–Jordan works as long as every pivot is a
    unit; a unit pivot exists at each step iff the body matrix is invertible.
    """
    n = len(m)
    zero = GrassmannScalar({}, k)
    one = GrassmannScalar.scalar(1, k)
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col].body != 0), None)
        if pivot is None:
            raise NonInvertibleBlock("even block has singular body")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuperMatrix:
    """Even-rank ``p`` / odd-rank ``q`` matrix in standard block format.

    ``entries`` is the full (p+q)×(p+q) array; the A, B, C, D blocks are
    views.  Parity of the supermatrix is checked on demand, not forced, so
    that odd matrices can still be multiplied.
    """

    p: int
    q: int
    entries: tuple
    k: int = 0

    def __post_init__(self):
        n = self.p + self.q
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise RankMismatch(f"expected a {n}x{n} array for rank {self.p}|{self.q}")

    @classmethod
    def from_blocks(cls, A, B, C, D, k: int) -> SuperMatrix:
        p, q = len(A), len(D)
        rows = []
        for i in range(p):
            rows.append(tuple(_g(x, k) for x in list(A[i]) + list(B[i] if q else [])))
        for i in range(q):
            rows.append(tuple(_g(x, k) for x in list(C[i] if p else []) + list(D[i])))
        return cls(p, q, tuple(rows), k)

    @classmethod
    def identity(cls, p: int, q: int, k: int = 0) -> SuperMatrix:
        n = p + q
        return cls(p, q, tuple(tuple(_g(int(i == j), k) for j in range(n)) for i in range(n)), k)

    def block(self, name: str) -> list[list[GrassmannScalar]]:
        p, q = self.p, self.q
        rows, cols = {
            "A": (range(0, p), range(0, p)),
            "B": (range(0, p), range(p, p + q)),
            "C": (range(p, p + q), range(0, p)),
            "D": (range(p, p + q), range(p, p + q)),
        }[name]
        return [[self.entries[i][j] for j in cols] for i in rows]

    def is_even(self) -> bool:
        n = self.p + self.q
        for i in range(n):
            for j in range(n):
                same = (i < self.p) == (j < self.p)
                x = self.entries[i][j]
                if same and not x.is_even():
                    return False
                if not same and not x.is_odd():
                    return False
        return True

    def __matmul__(self, other: SuperMatrix) -> SuperMatrix:
        return supermatrix_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return (self.p, self.q, self.entries) == (other.p, other.q, other.entries)

    def __hash__(self):
        return hash((self.p, self.q, self.entries))

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "k": self.k,
            "blocks": {name: [[x.to_pairs() for x in row] for row in self.block(name)] for name in "ABCD"},
        }

    @classmethod
    def from_json(cls, data: dict) -> SuperMatrix:
        k = int(data.get("k", 0))
        blocks = data["blocks"]
        conv = lambda rows: [[GrassmannScalar.from_pairs(x, k) for x in row] for row in rows]
        p, q = int(data["p"]), int(data["q"])
        A, B, C, D = (conv(blocks.get(n, [])) for n in "ABCD")
        if len(A) != p or len(D) != q:
            raise RankMismatch(f"blocks do not match declared rank {p}|{q}")
        if q == 0:
            B, C = [[] for _ in range(p)], []
        if p == 0:
            C, B = [[] for _ in range(q)], []
        return cls.from_blocks(A, B, C, D, k)


def _g(x, k: int) -> GrassmannScalar:
    if isinstance(x, GrassmannScalar):
        return x if x.k >= k else GrassmannScalar(x.terms, k)
    return GrassmannScalar.scalar(x, k)


def supermatrix_mul(M: SuperMatrix, N: SuperMatrix) -> SuperMatrix:
    if (M.p, M.q) != (N.p, N.q):
        raise RankMismatch(f"cannot multiply rank {M.p}|{M.q} by rank {N.p}|{N.q}")
    k = max(M.k, N.k)
    prod = _matmul(M.entries, N.entries, GrassmannScalar({}, k))
    return SuperMatrix(M.p, M.q, tuple(tuple(_g(x, k) for x in row) for row in prod), k)


def grassmann_det(m: list[list[GrassmannScalar]], k: int) -> GrassmannScalar:
    """Determinant of a matrix of even Grassmann scalars (commutative subring)."""
    for row in m:
        for x in row:
            if not x.is_even():
                raise OddParityViolation("determinant requires even entries")
    return det(m, GrassmannScalar({}, k), GrassmannScalar.scalar(1, k))


def berezinian(M: SuperMatrix) -> GrassmannScalar:
    """ber(M) = det(A − B·D⁻¹·C) · det(D)⁻¹."""
    if not M.is_even():
        raise OddParityViolation("berezinian is defined for even supermatrices only")
    k = M.k
    zero = GrassmannScalar({}, k)
    A, B, C, D = (M.block(n) for n in "ABCD")
    if M.q == 0:
        return grassmann_det(A, k)
    det_d = grassmann_det(D, k)
    if det_d.body == 0:
        raise NonInvertibleBlock("D block is not invertible")
    if M.p == 0:
        return det_d.inverse()
    d_inv = invert_even_matrix(D, k)
    correction = _matmul(_matmul(B, d_inv, zero), C, zero)
    schur = [[A[i][j] - correction[i][j] for j in range(M.p)] for i in range(M.p)]
    det_s = grassmann_det(schur, k)
    if det_s.body == 0:
        raise NonInvertibleBlock("Schur complement A - B D^-1 C is not invertible")
    return det_s * det_d.inverse()

