"""Exact linear algebra over Q on sparse vectors.

Vectors are ``dict[int, Fraction]`` with zero entries omitted.  Everything
here is division-exact; no floating point is ever involved.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

Vector = dict


def vec(entries: Iterable) -> Vector:
    """Sparse vector from a dense sequence."""
    return {i: Fraction(x) for i, x in enumerate(entries) if x != 0}


def dense(v: Vector, n: int) -> list[Fraction]:
    return [v.get(i, Fraction(0)) for i in range(n)]


def add_scaled(v: Vector, w: Vector, c) -> Vector:
    """Return ``v + c*w`` as a new vector."""
    out = dict(v)
    if c == 0:
        return out
    for k, x in w.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def scale(v: Vector, c) -> Vector:
    if c == 0:
        return {}
    return {k: c * x for k, x in v.items()}


class Echelon:
    """Incrementally built semi-echelon basis of a subspace of Q^n.

    Rows are stored with a pivot entry of 1; each new row is reduced against
    all earlier ones, so reducing a vector against the rows in insertion
    order clears every pivot column.
    """

    def __init__(self, vectors: Iterable[Vector] = ()):
        self.rows: list[tuple[int, Vector]] = []
        self._pivots: set[int] = set()
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> set[int]:
        return set(self._pivots)

    def reduce(self, v: Vector) -> Vector:
        out = dict(v)
        for p, row in self.rows:
            c = out.get(p)
            if c:
                out = add_scaled(out, row, -c)
        return out

    def add(self, v: Vector) -> bool:
        """Insert ``v``; return True if it enlarged the span."""
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        c = r[p]
        self.rows.append((p, {k: x / c for k, x in r.items()}))
        self._pivots.add(p)
        return True

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v)

    def basis(self) -> list[Vector]:
        return [row for _, row in self.rows]


def rank(rows: Iterable[Vector]) -> int:
    return Echelon(rows).dim


def rref(rows: Iterable[Vector]) -> tuple[list[Vector], list[int]]:
    """Fully reduced row echelon form; returns (rows sorted by pivot, pivots)."""
    ech = Echelon(rows)
    pivoted = sorted(ech.rows, key=lambda pr: pr[0])
    out: list[tuple[int, Vector]] = []
    # back-substitute from the bottom so each pivot column is cleared above
    for p, row in reversed(pivoted):
        r = dict(row)
        for q, lower in out:
            c = r.get(q)
            if c:
                r = add_scaled(r, lower, -c)
        out.append((p, r))
    out.reverse()
    return [r for _, r in out], [p for p, _ in out]


def nullspace(rows: Iterable[Vector], ncols: int) -> list[Vector]:
    """Basis of {x : row·x = 0 for every row}, one vector per free column."""
    reduced, pivots = rref(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        x = {free: Fraction(1)}
        for p, row in zip(pivots, reduced):
            c = row.get(free)
            if c:
                x[p] = -c
        basis.append(x)
    return basis


def mat_vec(columns: list[Vector], x: Vector) -> Vector:
    """Apply the matrix whose j-th column is ``columns[j]`` to ``x``."""
    out: Vector = {}
    for j, c in x.items():
        out = add_scaled(out, columns[j], c)
    return out


def solve_in_span(basis: list[Vector], target: Vector) -> Vector | None:
    """Coefficients expressing ``target`` in ``basis``, or None if outside the span."""
    n = len(basis)
    # augment each basis vector with a tag column recording which vector it is
    offset = 1 + max([max(v) for v in basis if v] + [max(target) if target else 0] + [0])
    ech = Echelon()
    for i, b in enumerate(basis):
        tagged = dict(b)
        tagged[offset + i] = Fraction(1)
        ech.add(tagged)
    r = ech.reduce(target)
    if any(k < offset for k in r):
        return None
    # target - sum(x_i b_i) has tag part -x, so negate
    return {k - offset: -c for k, c in r.items()} if n else {}
