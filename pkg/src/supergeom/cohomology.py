"""De Rham complexes of affine superspaces and Hodge tables of split supercurves.

The de Rham algebra of Q[t₁..t_m]⟨θ₁..θ_n⟩ is the free supercommutative
algebra on t (even), θ (odd), dt (odd), dθ (even) with d the odd derivation
t ↦ dt, θ ↦ dθ.  It is graded by weight (total exponent of all generators)
and d preserves weight, so each weight piece is a finite complex whose
cohomology is computed by exact ranks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

from .errors import AmbiguousGenericity, CutoffTooLarge, InconsistentDescriptor
from .linalg import Echelon

KOSZUL_MAX_N = 3
KOSZUL_MAX_W = 8
AFFINE_MAX_M = 2
AFFINE_MAX_N = 2
AFFINE_MAX_CUTOFF = 6


class FormAlgebra:
    """Free supercommutative algebra on generators with given parities and d-targets.

    Monomials are exponent tuples (odd generators have exponent 0 or 1)
    written in generator order.
    """

    def __init__(self, m: int, n: int):
        self.m, self.n = m, n
        # order: t_1..t_m, θ_1..θ_n, dt_1..dt_m, dθ_1..dθ_n
        self.parities = [0] * m + [1] * n + [1] * m + [0] * n
        self.size = 2 * (m + n)
        self.d_of = {i: m + n + i for i in range(m + n)}
        self.is_form = [False] * (m + n) + [True] * (m + n)

    def mul(self, a: tuple, b: tuple):
        """Return (sign, a·b) or None if the product vanishes."""
        out = list(a)
        swaps = 0
        odd_after = 0
        # move each odd factor of b left past odd factors of a with larger index
        for i in range(self.size - 1, -1, -1):
            if self.parities[i] and b[i]:
                swaps += odd_after
            if self.parities[i] and a[i]:
                odd_after += 1
        for i, e in enumerate(b):
            if not e:
                continue
            if self.parities[i] and out[i]:
                return None
            out[i] += e
        return (-1 if swaps & 1 else 1), tuple(out)

    def degree(self, mono: tuple) -> int:
        return sum(e for e, f in zip(mono, self.is_form) if f)

    def d(self, mono: tuple) -> dict[tuple, int]:
        out: dict[tuple, int] = {}
        zero = (0,) * self.size
        prefix_parity = 0
        prefix = zero
        for i, e in enumerate(mono):
            if not e or i not in self.d_of:
                if e:
                    prefix = _set(prefix, i, e)
                    prefix_parity ^= (self.parities[i] * e) & 1
                continue
            # d(g^e) = e·g^{e-1}·dg
            lower = _set(zero, i, e - 1)
            dg = _set(zero, self.d_of[i], 1)
            suffix = tuple(x if j > i else 0 for j, x in enumerate(mono))
            coeff = e * (-1 if prefix_parity else 1)
            acc = (coeff, prefix)
            for piece in (lower, dg, suffix):
                r = self.mul(acc[1], piece)
                if r is None:
                    acc = None
                    break
                acc = (acc[0] * r[0], r[1])
            if acc is not None:
                out[acc[1]] = out.get(acc[1], 0) + acc[0]
            prefix = _set(prefix, i, e)
            prefix_parity ^= (self.parities[i] * e) & 1
        return {k: v for k, v in out.items() if v}

    def monomials(self, weight: int, degree: int) -> list[tuple]:
        """All monomials of the given total weight and form degree."""
        out = []
        for mono in _compositions(weight, self.size, self.parities):
            if self.degree(mono) == degree:
                out.append(mono)
        return out


def _set(t: tuple, i: int, v: int) -> tuple:
    return t[:i] + (v,) + t[i + 1:]


def _compositions(total: int, size: int, parities):
    if size == 0:
        if total == 0:
            yield ()
        return
    top = 1 if parities[0] else total
    for e in range(min(top, total) + 1):
        for rest in _compositions(total - e, size - 1, parities[1:]):
            yield (e,) + rest


@lru_cache(maxsize=None)
def _weight_piece(m: int, n: int, weight: int) -> tuple[int, ...]:
    """Cohomology dimensions H^0..H^weight of the weight piece."""
    A = FormAlgebra(m, n)
    bases = [A.monomials(weight, p) for p in range(weight + 2)]
    ranks = []
    for p in range(weight + 1):
        target = {mono: k for k, mono in enumerate(bases[p + 1])}
        ech = Echelon()
        for mono in bases[p]:
            img = A.d(mono)
            ech.add({target[k]: Fraction(v) for k, v in img.items()})
        ranks.append(ech.dim)
    ranks.append(0)
    out = []
    for p in range(weight + 1):
        prev = ranks[p - 1] if p else 0
        out.append(len(bases[p]) - ranks[p] - prev)
    return tuple(out)


def de_rham_table(m: int, n: int, max_weight: int) -> dict[int, int]:
    """Σ_{w ≤ max_weight} dim H^p_w for every form degree p that occurs."""
    table: dict[int, int] = {}
    for w in range(max_weight + 1):
        for p, h in enumerate(_weight_piece(m, n, w)):
            table[p] = table.get(p, 0) + h
    return table


def check_d_squared(m: int, n: int, weight: int) -> bool:
    A = FormAlgebra(m, n)
    for p in range(weight + 1):
        for mono in A.monomials(weight, p):
            acc: dict[tuple, int] = {}
            for k, v in A.d(mono).items():
                for k2, v2 in A.d(k).items():
                    acc[k2] = acc.get(k2, 0) + v * v2
            if any(acc.values()):
                return False
    return True


@dataclass(frozen=True)
class KoszulVerdict:
    n: int
    wmax: int
    h: tuple[int, ...]
    acyclic: bool

    def to_json(self) -> dict:
        return {"n": self.n, "wmax": self.wmax, "h": list(self.h), "acyclic": self.acyclic,
                "window": f"form degree 0..{self.wmax}"}


def koszul_acyclicity(n: int, wmax: int) -> KoszulVerdict:
    """Cohomology of Q⟨θ₁..θ_n⟩[dθ₁..dθ_n] in form degrees 0..wmax.

    Degree p lives in weights p..p+n, so summing weights up to wmax+n gives
    H^p exactly for every p ≤ wmax.
    """
    if not 1 <= n <= KOSZUL_MAX_N:
        raise CutoffTooLarge(f"odd variable count must be in 1..{KOSZUL_MAX_N}, got {n}")
    if not 0 <= wmax <= KOSZUL_MAX_W:
        raise CutoffTooLarge(f"weight cutoff must be in 0..{KOSZUL_MAX_W}, got {wmax}")
    table = de_rham_table(0, n, wmax + n)
    h = tuple(table.get(p, 0) for p in range(wmax + 1))
    acyclic = h[0] == 1 and all(x == 0 for x in h[1:])
    return KoszulVerdict(n, wmax, h, acyclic)


@dataclass(frozen=True)
class PoincareVerdict:
    m: int
    n: int
    cutoff: int
    super_table: tuple[int, ...]
    even_table: tuple[int, ...]
    equal: bool

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "cutoff": self.cutoff, "super": list(self.super_table),
                "even": list(self.even_table), "equal": self.equal,
                "window": f"weight 0..{self.cutoff}"}


def affine_super_poincare(m: int, n: int, cutoff: int) -> PoincareVerdict:
    """Compare weight-truncated de Rham cohomology of the superspace and its reduction."""
    if not (0 <= m <= AFFINE_MAX_M and 0 <= n <= AFFINE_MAX_N and 0 <= cutoff <= AFFINE_MAX_CUTOFF):
        raise CutoffTooLarge(
            f"need m <= {AFFINE_MAX_M}, n <= {AFFINE_MAX_N}, cutoff <= {AFFINE_MAX_CUTOFF}; got {m}, {n}, {cutoff}")
    sup = de_rham_table(m, n, cutoff)
    bos = de_rham_table(m, 0, cutoff)
    degrees = range(cutoff + 1)
    s = tuple(sup.get(p, 0) for p in degrees)
    b = tuple(bos.get(p, 0) for p in degrees)
    return PoincareVerdict(m, n, cutoff, s, b, s == b)


# ---------------------------------------------------------------------------
# line bundles and Hodge tables


@dataclass(frozen=True)
class LineBundleDescriptor:
    kind: str
    degree: int | None = None
    h0: int | None = None

    KINDS = ("trivial", "canonical", "generic", "explicit")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise InconsistentDescriptor(f"unknown line bundle kind {self.kind!r}")
        if self.kind in ("generic", "explicit") and self.degree is None:
            raise InconsistentDescriptor(f"{self.kind} line bundle needs a degree")
        if self.kind == "explicit" and self.h0 is None:
            raise InconsistentDescriptor("explicit line bundle needs h0")

    @classmethod
    def trivial(cls):
        return cls("trivial")

    @classmethod
    def canonical(cls):
        return cls("canonical")

    @classmethod
    def generic(cls, d: int):
        return cls("generic", int(d))

    @classmethod
    def explicit(cls, d: int, h0: int):
        return cls("explicit", int(d), int(h0))

    def deg(self, g: int) -> int:
        if self.kind == "trivial":
            return 0
        if self.kind == "canonical":
            return 2 * g - 2
        return self.degree

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.degree is not None:
            out["degree"] = self.degree
        if self.h0 is not None:
            out["h0"] = self.h0
        return out

    @classmethod
    def from_json(cls, data) -> LineBundleDescriptor:
        if isinstance(data, str):
            return cls(data)
        return cls(data["kind"], data.get("degree"), data.get("h0"))


def line_cohomology(g: int, L: LineBundleDescriptor) -> tuple[int, int]:
    if g < 0:
        raise InconsistentDescriptor(f"genus must be >= 0, got {g}")
    if L.kind == "trivial":
        return 1, g
    if L.kind == "canonical":
        return g, 1
    d = L.degree
    chi = d - g + 1
    if L.kind == "generic":
        if g >= 2 and 0 <= d < g:
            raise AmbiguousGenericity(
                f"h0 of a generic degree-{d} bundle on a genus-{g} curve depends on choices")
        h0 = max(0, chi)
        return h0, h0 - chi
    h0 = L.h0
    h1 = h0 - chi
    if h0 < 0 or h1 < 0:
        raise InconsistentDescriptor(f"h0={h0} is incompatible with degree {d} in genus {g}")
    return h0, h1


@dataclass(frozen=True, order=True)
class SuperDim:
    even: int = 0
    odd: int = 0

    def __post_init__(self):
        if self.even < 0 or self.odd < 0:
            raise InconsistentDescriptor(f"negative superdimension ({self.even}|{self.odd})")

    def total(self) -> int:
        return self.even + self.odd

    def to_json(self) -> list[int]:
        return [self.even, self.odd]

    def __repr__(self) -> str:
        return f"({self.even}|{self.odd})"


CONVENTIONS = ("merged", "sheaf")


@dataclass(frozen=True)
class HodgeTable:
    genus: int
    entries: dict = field(default_factory=dict)
    convention: str = "merged"

    @property
    def betti(self) -> tuple[int, int, int]:
        return 1, 2 * self.genus, 1

    def h(self, p: int, q: int) -> SuperDim:
        return self.entries[(p, q)]

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "convention": self.convention,
            "hpq": {f"{p},{q}": v.to_json() for (p, q), v in sorted(self.entries.items())},
            "betti": list(self.betti),
        }

    def render(self) -> str:
        lines = [f"genus {self.genus}  convention {self.convention}"]
        lines.append(f"{'':>6}{'q=0':>10}{'q=1':>10}")
        for p in (0, 1):
            cells = "".join(f"{repr(self.entries[(p, q)]):>10}" for q in (0, 1))
            lines.append(f"{'p=' + str(p):>6}{cells}")
        lines.append("betti " + " ".join(str(b) for b in self.betti))
        return "\n".join(lines)


def _derived_bundles(g: int, L: LineBundleDescriptor):
    if L.kind == "trivial" or (L.kind == "canonical" and g == 1):
        return LineBundleDescriptor.trivial(), LineBundleDescriptor.canonical()
    if L.kind == "canonical":
        return LineBundleDescriptor.generic(4 * g - 4), LineBundleDescriptor.generic(4 * g - 4)
    d = L.deg(g)
    return LineBundleDescriptor.generic(2 * d), LineBundleDescriptor.generic(d + 2 * g - 2)


def hodge_table(g: int, L: LineBundleDescriptor, L2: LineBundleDescriptor | None = None,
                L_omega: LineBundleDescriptor | None = None, convention: str = "merged") -> HodgeTable:
    """h^{p,q} for p, q ∈ {0, 1} of the split supercurve O ⊕ ΠL.

    Uses Ω ≃ (Ω_X ⊕ L²) ⊕ Π(L⊗Ω_X ⊕ L) as an O_X-module.  ``convention``
    decides where H^1(L) sits inside h^{0,1}: "merged" counts it in the even
    part next to H^1(O), "sheaf" keeps it in the odd part as ΠH^1(L).
    """
    if convention not in CONVENTIONS:
        raise InconsistentDescriptor(f"unknown convention {convention!r}")
    dL2, dLO = _derived_bundles(g, L)
    L2 = L2 or dL2
    L_omega = L_omega or dLO
    if L2.deg(g) != 2 * L.deg(g):
        raise InconsistentDescriptor(f"L² must have degree {2 * L.deg(g)}, got {L2.deg(g)}")
    if L_omega.deg(g) != L.deg(g) + 2 * g - 2:
        raise InconsistentDescriptor(f"L⊗Ω must have degree {L.deg(g) + 2 * g - 2}, got {L_omega.deg(g)}")
    hO = line_cohomology(g, LineBundleDescriptor.trivial())
    hW = line_cohomology(g, LineBundleDescriptor.canonical())
    hL = line_cohomology(g, L)
    hL2 = line_cohomology(g, L2)
    hLW = line_cohomology(g, L_omega)
    e = {}
    e[(0, 0)] = SuperDim(hO[0], hL[0])
    if convention == "merged":
        e[(0, 1)] = SuperDim(hO[1] + hL[1], 0)
    else:
        e[(0, 1)] = SuperDim(hO[1], hL[1])
    for q in (0, 1):
        e[(1, q)] = SuperDim(hW[q] + hL2[q], hLW[q] + hL[q])
    return HodgeTable(g, e, convention)


def frolicher_report(table: HodgeTable) -> dict:
    """Compare b_n with Σ_{p+q=n} h^{p,q} for n = 0, 1."""
    out = {}
    ok = True
    for n in (0, 1):
        cells = [table.h(p, n - p) for p in range(n + 1)]
        even = sum(c.even for c in cells)
        full = sum(c.total() for c in cells)
        b = table.betti[n]
        match = b == even
        ok = ok and match
        out[str(n)] = {"betti": b, "even_sum": even, "full_sum": full, "even_match": match,
                       "full_match": b == full}
    out["verdict"] = "compatible" if ok else "incompatible"
    return out


def integral_forms_table(table: HodgeTable) -> dict[tuple[int, int], SuperDim]:
    """Dual table: the entry at (p, −q) is h^{p,q}."""
    return {(p, -q): v for (p, q), v in table.entries.items()}
