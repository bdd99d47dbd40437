"""Torsion cosets a + T_L of subtori of G_m^n, torsion subschemes and the Z_{X,F} engine.

T_L = {x : <lambda, x> = 0 mod 1 for all lambda in L} for an integer lattice L.
Everything is written additively on (Q/Z)^n.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .cyclo import format_symbol, parse_symbol, sym
from .intpoly import IntPolynomial
from .lattice import (
    determinant,
    hnf,
    identity,
    left_kernel,
    lattice_coords,
    saturation,
    smith_with_transform,
    solve_mod1,
)


def _dot(row, x) -> Fraction:
    return sum((a * b for a, b in zip(row, x)), Fraction(0))


def _lattice_contains(H, other) -> bool:
    """other (rows) is a sublattice of H."""
    for v in other:
        c = lattice_coords(v, H)
        if c is None or any(x.denominator != 1 for x in c):
            return False
    return True


class TorsionCoset:
    """a + T_L with L in Hermite form and a canonical shift."""

    __slots__ = ("n", "lattice", "shift")

    def __init__(self, n: int, lattice: Iterable[Sequence[int]] = (), shift: Sequence = None):
        L = hnf([list(r) for r in lattice], n)
        for r in L:
            if len(r) != n:
                raise ValueError("lattice rows must have length n")
        a = tuple(sym(s) for s in shift) if shift is not None else (Fraction(0),) * n
        if len(a) != n:
            raise ValueError("shift must have n coordinates")
        values = [_dot(r, a) for r in L]
        canon = solve_mod1([list(r) for r in L], values, n)
        assert canon is not None
        self.n = n
        self.lattice = L
        self.shift = canon

    @classmethod
    def point(cls, P: Sequence) -> TorsionCoset:
        n = len(P)
        return cls(n, identity(n), P)

    @classmethod
    def subgroup(cls, n: int, lattice) -> TorsionCoset:
        return cls(n, lattice)

    def _key(self):
        return (self.n, self.lattice, self.shift)

    def __eq__(self, other):
        return isinstance(other, TorsionCoset) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other):
        return self._key() < other._key()

    def __repr__(self):
        return f"TorsionCoset(n={self.n}, lattice={[list(r) for r in self.lattice]}, shift=[{', '.join(format_symbol(s) for s in self.shift)}])"

    def contains_point(self, P: Sequence) -> bool:
        d = [sym(x) - y for x, y in zip(P, self.shift, strict=True)]
        return all(sym(_dot(r, d)) == 0 for r in self.lattice)

    def contains(self, other: TorsionCoset) -> bool:
        return _lattice_contains(other.lattice, self.lattice) and self.contains_point(other.shift)

    def is_irreducible(self) -> bool:
        return self.lattice == saturation(self.lattice, self.n)

    def dimension(self) -> int:
        return self.n - len(self.lattice)

    def components(self) -> list[TorsionCoset]:
        """Irreducible components: translates of the subtorus T_S, S the saturation of L."""
        L = [list(r) for r in self.lattice]
        S = saturation(L, self.n)
        if S == self.lattice:
            return [self]
        # L = C S; T_L / T_S is dual to S / L
        C = [[int(c) for c in lattice_coords(r, S)] for r in L]
        diag, U, V = smith_with_transform(C, len(S))
        r = len(S)
        ranges = [range(diag[i]) for i in range(r)]
        out = []
        for w in product(*ranges):
            # u = V w' with w'_i = w_i / d_i satisfies C u = 0 mod 1
            wq = [Fraction(w[i], diag[i]) for i in range(r)]
            u = [sum((V[i][j] * wq[j] for j in range(r)), Fraction(0)) for i in range(r)]
            x = solve_mod1([list(s) for s in S], u, self.n)
            shift = tuple(sym(a + b) for a, b in zip(self.shift, x))
            out.append(TorsionCoset(self.n, S, shift))
        return sorted(set(out))

    def translate(self, t: Sequence) -> TorsionCoset:
        return TorsionCoset(self.n, self.lattice, [sym(a + b) for a, b in zip(self.shift, t)])

    def to_json(self) -> dict:
        return {"n": self.n, "lattice": [list(r) for r in self.lattice],
                "shift": [format_symbol(s) for s in self.shift]}

    @classmethod
    def from_json(cls, data) -> TorsionCoset:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["n"]), data.get("lattice", []), [parse_symbol(s) for s in data["shift"]])


class TorsionSubscheme:
    """Finite union of torsion cosets, stored as its irredundant irreducible components."""

    __slots__ = ("n", "cosets")

    def __init__(self, n: int, cosets: Iterable[TorsionCoset] = ()):
        comps = set()
        for c in cosets:
            if c.n != n:
                raise ValueError("coset in the wrong ambient torus")
            comps.update(c.components())
        comps = sorted(comps)
        keep = [c for c in comps if not any(d != c and d.contains(c) for d in comps)]
        self.n = n
        self.cosets = tuple(keep)

    def __eq__(self, other):
        return isinstance(other, TorsionSubscheme) and (self.n, self.cosets) == (other.n, other.cosets)

    def __hash__(self):
        return hash((self.n, self.cosets))

    def __repr__(self):
        return f"TorsionSubscheme(n={self.n}, cosets={list(self.cosets)})"

    def __len__(self):
        return len(self.cosets)

    def __iter__(self):
        return iter(self.cosets)

    def is_empty(self) -> bool:
        return not self.cosets

    def contains_point(self, P) -> bool:
        return any(c.contains_point(P) for c in self.cosets)

    def issubset(self, other: TorsionSubscheme) -> bool:
        # irreducible components are contained in a finite union iff contained in one member
        return all(any(d.contains(c) for d in other.cosets) for c in self.cosets)

    def __or__(self, other: TorsionSubscheme) -> TorsionSubscheme:
        return TorsionSubscheme(self.n, self.cosets + other.cosets)

    def __and__(self, other: TorsionSubscheme) -> TorsionSubscheme:
        out = []
        for a in self.cosets:
            for b in other.cosets:
                out.extend(coset_intersect(a, b).cosets)
        return TorsionSubscheme(self.n, out)

    def translate(self, t) -> TorsionSubscheme:
        return TorsionSubscheme(self.n, [c.translate(t) for c in self.cosets])

    def to_json(self) -> list:
        return [c.to_json() for c in self.cosets]

    @classmethod
    def from_json(cls, data, n: int | None = None) -> TorsionSubscheme:
        if isinstance(data, str):
            data = json.loads(data)
        cosets = [TorsionCoset.from_json(c) for c in data]
        if n is None:
            if not cosets:
                raise ValueError("empty subscheme needs an explicit ambient dimension")
            n = cosets[0].n
        return cls(n, cosets)


def coset_intersect(C1: TorsionCoset, C2: TorsionCoset) -> TorsionSubscheme:
    if C1.n != C2.n:
        raise ValueError("different ambient tori")
    n = C1.n
    rows = [list(r) for r in C1.lattice] + [list(r) for r in C2.lattice]
    t = [_dot(r, C1.shift) for r in C1.lattice] + [_dot(r, C2.shift) for r in C2.lattice]
    x = solve_mod1(rows, t, n)
    if x is None:
        return TorsionSubscheme(n)
    return TorsionSubscheme(n, [TorsionCoset(n, rows, x)])


def _apply(B, a) -> tuple:
    return tuple(sym(_dot(row, a)) for row in B)


def monomial_image(B: Sequence[Sequence[int]], C: TorsionCoset) -> TorsionCoset:
    """Image of C under x -> B x (B an r x n integer matrix)."""
    B = [list(r) for r in B]
    r = len(B)
    if any(len(row) != C.n for row in B):
        raise ValueError("matrix columns must equal the source dimension")
    # characters mu of G_m^r with mu B in L
    stacked = B + [[-v for v in row] for row in C.lattice]
    K = left_kernel(stacked, C.n)
    image_lattice = [k[:r] for k in K]
    return TorsionCoset(r, image_lattice, _apply(B, C.shift))


def monomial_preimage(B: Sequence[Sequence[int]], C: TorsionCoset) -> TorsionSubscheme:
    """Preimage of C under the isogeny x -> B x."""
    B = [list(r) for r in B]
    n = len(B[0]) if B else 0
    if len(B) != n or len(B) != C.n:
        raise ValueError("preimage needs a square matrix on the ambient torus")
    if determinant(B) == 0:
        raise ValueError("monomial map is not an isogeny (singular matrix)")
    LB = [[sum(row[i] * B[i][j] for i in range(n)) for j in range(n)] for row in C.lattice]
    t = [_dot(row, C.shift) for row in C.lattice]
    x = solve_mod1(LB, t, n)
    if x is None:
        return TorsionSubscheme(n)
    return TorsionSubscheme(n, [TorsionCoset(n, LB, x)])


def image(B, Z: TorsionSubscheme) -> TorsionSubscheme:
    return TorsionSubscheme(len(B), [monomial_image(B, c) for c in Z.cosets])


def preimage(B, Z: TorsionSubscheme) -> TorsionSubscheme:
    out = []
    for c in Z.cosets:
        out.extend(monomial_preimage(B, c).cosets)
    return TorsionSubscheme(Z.n, out)


def multiple_image(N: int, Z: TorsionSubscheme | TorsionCoset) -> TorsionSubscheme:
    if N < 1:
        raise ValueError("multiplier must be >= 1")
    if isinstance(Z, TorsionCoset):
        Z = TorsionSubscheme(Z.n, [Z])
    B = [[N * v for v in row] for row in identity(Z.n)]
    return image(B, Z)


def quotient_map(L: Sequence[Sequence[int]], n: int | None = None) -> list[list[int]]:
    """Monomial map G_m^n -> G_m^r with kernel exactly T_L (rows of the Hermite basis)."""
    n = n if n is not None else len(L[0])
    return [list(r) for r in hnf([list(r) for r in L], n)]


def stabilizer(Z: TorsionSubscheme) -> TorsionSubscheme:
    """{t : Z + t = Z}, a finite union of cosets of a subgroup."""
    n = Z.n
    comps = Z.cosets
    if not comps:
        return TorsionSubscheme(n, [TorsionCoset(n)])
    candidates = None
    for ci in comps:
        # t must carry c_i onto a component with the same subtorus
        options = [TorsionCoset(n, ci.lattice, [sym(a - b) for a, b in zip(cj.shift, ci.shift)])
                   for cj in comps if cj.lattice == ci.lattice]
        opt = TorsionSubscheme(n, options)
        candidates = opt if candidates is None else candidates & opt
        if candidates.is_empty():
            break
    # every t in the candidate set maps each component into Z injectively
    return candidates


def is_group(G: TorsionSubscheme) -> bool:
    """Exact closure check (identity, inverses, sums) for a finite union of cosets."""
    n = G.n
    if not G.contains_point((Fraction(0),) * n):
        return False
    for a in G.cosets:
        neg = TorsionCoset(n, a.lattice, [sym(-s) for s in a.shift])
        if not TorsionSubscheme(n, [neg]).issubset(G):
            return False
        for b in G.cosets:
            summed = TorsionCoset(n, _sum_lattice(a, b), [sym(x + y) for x, y in zip(a.shift, b.shift)])
            if not TorsionSubscheme(n, [summed]).issubset(G):
                return False
    return True


def _sum_lattice(a: TorsionCoset, b: TorsionCoset):
    # T_A + T_B = T_{A cap B}
    stacked = [list(r) for r in a.lattice] + [[-v for v in r] for r in b.lattice]
    K = left_kernel(stacked, a.n)
    ra = len(a.lattice)
    return [[sum(k[i] * a.lattice[i][j] for i in range(ra)) for j in range(a.n)] for k in K]


def product_subscheme(parts: Sequence[TorsionSubscheme]) -> TorsionSubscheme:
    """Cartesian product inside the product torus."""
    n_total = sum(z.n for z in parts)
    out = []
    for combo in product(*(z.cosets for z in parts)):
        rows, shift, offset = [], [], 0
        for c in combo:
            for r in c.lattice:
                rows.append([0] * offset + list(r) + [0] * (n_total - offset - c.n))
            shift.extend(c.shift)
            offset += c.n
        out.append(TorsionCoset(n_total, rows, shift))
    return TorsionSubscheme(n_total, out)


# ---------------------------------------------------------------------------
# companion matrices and Z_{X,F}

@dataclass
class CompanionData:
    F: IntPolynomial
    M: list
    n: int
    action: list = field(repr=False)

    @property
    def d(self) -> int:
        return len(self.M)


def companion_matrix(F: IntPolynomial) -> list[list[int]]:
    """Companion matrix with superdiagonal ones and last row (a_0, ..., a_{d-1}),
    for F = T^d - a_{d-1} T^{d-1} - ... - a_0."""
    if not F.is_monic() or F.degree < 1:
        raise ValueError("companion matrix needs a monic polynomial of degree >= 1")
    d = F.degree
    a = [-c for c in F.coeffs[:d]]
    M = [[int(j == i + 1) for j in range(d)] for i in range(d - 1)]
    M.append(a)
    return M


def companion(F: IntPolynomial, n: int) -> CompanionData:
    M = companion_matrix(F)
    d = len(M)
    big = [[M[i][j] * int(a == b) for j in range(d) for b in range(n)] for i in range(d) for a in range(n)]
    return CompanionData(F, M, n, big)


def charpoly(M: Sequence[Sequence[int]]) -> IntPolynomial:
    """Characteristic polynomial det(T I - M) by Faddeev-LeVerrier over Q."""
    d = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    coeffs = [Fraction(1)]
    Mk = [[Fraction(0)] * d for _ in range(d)]
    c = Fraction(1)
    for k in range(1, d + 1):
        # Mk = A (M_{k-1} + c_{k-1} I)
        prev = [[Mk[i][j] + (c if i == j else 0) for j in range(d)] for i in range(d)]
        Mk = [[sum(A[i][t] * prev[t][j] for t in range(d)) for j in range(d)] for i in range(d)]
        c = -sum(Mk[i][i] for i in range(d)) / k
        coeffs.append(c)
    # coeffs are for T^d, T^{d-1}, ...
    return IntPolynomial(int(x) for x in reversed(coeffs))


@dataclass
class CoreResult:
    Z: TorsionSubscheme
    preimage_steps: int
    image_steps: int
    Y_infinity: TorsionSubscheme


class ChainGuardError(RuntimeError):
    pass


def core_of(S: TorsionSubscheme, B, max_steps: int = 200) -> CoreResult:
    """Z = intersection of B^l (intersection of B^{-r}(S)) for an isogeny B of the ambient torus."""
    W = S
    steps = 0
    while True:
        nxt = S & preimage(B, W)
        steps += 1
        if nxt == W:
            break
        W = nxt
        if steps > max_steps:
            raise ChainGuardError("preimage chain did not stabilise")
    Y = W
    V = Y
    l = 0
    while True:
        nxt = image(B, V)
        if nxt == V:
            break
        V = nxt
        l += 1
        if l > max_steps:
            raise ChainGuardError("image chain did not stabilise")
    if image(B, V) != V:
        raise AssertionError("M(Z) != Z after stabilisation")
    return CoreResult(V, steps, l, Y)


def torsion_core(X: TorsionSubscheme, F: IntPolynomial, max_steps: int = 200) -> CoreResult:
    """Z_{X,F} inside G_m^{n d}, coordinates ordered as d blocks of n."""
    if X.is_empty():
        raise ValueError("X must be nonempty")
    if F(0) == 0:
        raise ValueError("F(0) = 0: companion matrix is not an isogeny")
    data = companion(F, X.n)
    Xd = product_subscheme([X] * data.d)
    return core_of(Xd, data.action, max_steps)
