"""Subvarieties of G_m^n given by Laurent generators, and p-adic distances to them.

A generator is a list of terms ``scale * zeta^root * x^exps``.  Distances are
computed on the fixed embedding of local_field; membership is decided only
by exact cyclotomic arithmetic.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Iterable, Sequence

from .cyclo import (
    GaloisElement,
    cyc_sum,
    format_symbol,
    galois_act,
    order,
    parse_symbol,
    sub_points,
    sym,
    torsion_split,
)
from .local_field import (
    DEFAULT_PRECISION,
    TowerSpec,
    embed_root,
    tower_for_level,
    valuation,
)


@dataclass(frozen=True)
class Term:
    exps: tuple
    scale: int = 1
    root: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "exps", tuple(int(a) for a in self.exps))
        object.__setattr__(self, "root", sym(self.root))


Generator = tuple  # tuple[Term, ...]


@dataclass(frozen=True)
class Subvariety:
    n: int
    generators: tuple

    def __post_init__(self):
        gens = tuple(tuple(g) for g in self.generators)
        if self.n < 1:
            raise ValueError("ambient dimension must be >= 1")
        if not gens:
            raise ValueError("a subvariety needs at least one generator")
        for g in gens:
            for t in g:
                if len(t.exps) != self.n:
                    raise ValueError(f"exponent vector {t.exps} has wrong length for n={self.n}")
        object.__setattr__(self, "generators", gens)

    def level(self) -> int:
        return reduce(math.lcm, (t.root.denominator for g in self.generators for t in g), 1)

    def is_rational(self) -> bool:
        return all(t.root == 0 for g in self.generators for t in g)

    def __and__(self, other: Subvariety) -> Subvariety:
        """Intersection: union of generator lists (sum of ideals)."""
        if self.n != other.n:
            raise ValueError("different ambient tori")
        return Subvariety(self.n, self.generators + other.generators)

    def translate(self, Q: Sequence[Fraction]) -> Subvariety:
        """X^{+Q}: substitute x -> x * Q^{-1} in every generator."""
        return Subvariety(self.n, tuple(
            tuple(Term(t.exps, t.scale, t.root - _dot(t.exps, Q)) for t in g)
            for g in self.generators))

    def pullback(self, B: Sequence[Sequence[int]]) -> Subvariety:
        """Pull back along the monomial map x -> x^B from G_m^cols(B) to G_m^n."""
        B = [list(r) for r in B]
        if len(B) != self.n:
            raise ValueError("matrix rows must match the target dimension")
        src = len(B[0])
        gens = []
        for g in self.generators:
            gens.append(tuple(
                Term(tuple(sum(t.exps[i] * B[i][j] for i in range(self.n)) for j in range(src)),
                     t.scale, t.root) for t in g))
        return Subvariety(src, tuple(gens))

    def conjugate(self, sigma: GaloisElement) -> Subvariety:
        """X^sigma: apply sigma to the root-of-unity coefficients."""
        return Subvariety(self.n, tuple(
            tuple(Term(t.exps, t.scale, sigma.act_symbol(t.root)) for t in g)
            for g in self.generators))

    # -- JSON -------------------------------------------------------------
    def to_json(self) -> dict:
        gens = []
        for g in self.generators:
            terms = []
            for t in g:
                coeff = {"scale": t.scale} if t.root == 0 else {"root": format_symbol(t.root), "scale": t.scale}
                terms.append({"exps": list(t.exps), "coeff": coeff})
            gens.append(terms)
        return {"n": self.n, "generators": gens}

    @classmethod
    def from_json(cls, data) -> Subvariety:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            n = int(data["n"])
            gens = []
            for g in data["generators"]:
                terms = []
                for t in g:
                    coeff = t.get("coeff", {"scale": 1})
                    root = parse_symbol(coeff["root"]) if "root" in coeff else Fraction(0)
                    terms.append(Term(tuple(t["exps"]), int(coeff.get("scale", 1)), root))
                if not terms:
                    raise ValueError("empty generator")
                gens.append(tuple(terms))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed subvariety JSON: {exc}") from exc
        return cls(n, tuple(gens))


def _dot(exps, P) -> Fraction:
    return sum((a * s for a, s in zip(exps, P, strict=True)), Fraction(0))


def linear_variety(n: int, terms: Iterable[tuple[Sequence[int], int]]) -> Subvariety:
    """Single-generator variety from (exponent vector, integer coefficient) pairs."""
    return Subvariety(n, (tuple(Term(tuple(e), c) for e, c in terms),))


def coordinate_point_variety(Q: Sequence[Fraction]) -> Subvariety:
    """The point Q as the subvariety x_i - zeta^{Q_i} = 0."""
    n = len(Q)
    gens = []
    for i, q in enumerate(Q):
        e = [0] * n
        e[i] = 1
        gens.append((Term(tuple(e), 1), Term((0,) * n, -1, sym(q))))
    return Subvariety(n, tuple(gens))


# ---------------------------------------------------------------------------
# distance values

@dataclass(frozen=True)
class DistanceValue:
    """``member``, ``val`` (distance p^-value) or ``below_precision``."""

    kind: str
    value: Fraction | None = None

    def __post_init__(self):
        if self.kind not in ("member", "val", "below_precision"):
            raise ValueError(f"unknown distance kind {self.kind}")
        if (self.kind == "val") != (self.value is not None):
            raise ValueError("only 'val' distances carry a value")

    @classmethod
    def member(cls) -> DistanceValue:
        return cls("member")

    @classmethod
    def val(cls, r) -> DistanceValue:
        return cls("val", Fraction(r))

    @classmethod
    def below_precision(cls) -> DistanceValue:
        return cls("below_precision")

    @property
    def is_member(self) -> bool:
        return self.kind == "member"

    def closeness_key(self):
        """Sort key increasing with distance: member < below_precision < val r (by -r)."""
        if self.kind == "member":
            return (0, Fraction(0))
        if self.kind == "below_precision":
            return (1, Fraction(0))
        return (2, -self.value)

    def __str__(self):
        if self.kind == "val":
            return f"Valuation({self.value})"
        return "Member" if self.kind == "member" else "BelowPrecision"


def farther(a: DistanceValue, b: DistanceValue) -> DistanceValue:
    return a if a.closeness_key() >= b.closeness_key() else b


def generator_terms(g, P) -> list[tuple[int, Fraction]]:
    """g(P) as a list of (scale, root) pairs."""
    return [(t.scale, t.root + _dot(t.exps, P)) for t in g]


def tower_for(P: Sequence[Fraction], X: Subvariety, p: int, N: int = DEFAULT_PRECISION) -> TowerSpec:
    return tower_for_level(p, math.lcm(order(P), X.level()), N)


def evaluate_in_tower(g, P, spec: TowerSpec):
    acc = spec.zero()
    for scale, root in generator_terms(g, P):
        acc = acc + embed_root(root, spec) * scale
    return acc


def distance(P: Sequence[Fraction], X: Subvariety, spec: TowerSpec) -> DistanceValue:
    """Max over generators of |g(P)|_p, i.e. min valuation; Member by exact zero test."""
    P = tuple(sym(s) for s in P)
    if len(P) != X.n:
        raise ValueError("point and subvariety live in different tori")
    best = None
    any_nonzero = False
    for g in X.generators:
        terms = generator_terms(g, P)
        if cyc_sum(terms).is_zero():
            continue
        any_nonzero = True
        v = valuation(evaluate_in_tower(g, P, spec))
        if v.is_finite and (best is None or v.value < best):
            best = v.value
    if not any_nonzero:
        return DistanceValue.member()
    if best is None:
        return DistanceValue.below_precision()
    return DistanceValue.val(best)


def distance_at(P, X: Subvariety, p: int, N: int = DEFAULT_PRECISION) -> DistanceValue:
    return distance(P, X, tower_for(P, X, p, N))


# ---------------------------------------------------------------------------
# distance calculus

def distance_intersection_law(P, X: Subvariety, Y: Subvariety, p: int,
                              N: int = DEFAULT_PRECISION) -> tuple[DistanceValue, DistanceValue]:
    """(d(P, X cap Y), max(d(P, X), d(P, Y))) on one common tower."""
    spec = tower_for_level(p, math.lcm(order(P), X.level(), Y.level()), N)
    lhs = distance(P, X & Y, spec)
    rhs = farther(distance(P, X, spec), distance(P, Y, spec))
    return lhs, rhs


def apply_monomial(B: Sequence[Sequence[int]], P: Sequence[Fraction]) -> tuple:
    """Image of a torsion point under x -> x^B (additively, B @ P mod 1)."""
    return tuple(sym(sum((b * s for b, s in zip(row, P, strict=True)), Fraction(0))) for row in B)


def pullback_distance(B, Y: Subvariety, P, p: int,
                      N: int = DEFAULT_PRECISION) -> tuple[DistanceValue, DistanceValue]:
    """(d(P, B^*Y), d(B(P), Y))."""
    BP = apply_monomial(B, P)
    spec = tower_for_level(p, math.lcm(order(P), Y.level()), N)
    return distance(P, Y.pullback(B), spec), distance(BP, Y, spec)


def galois_distance_invariance(sigma: GaloisElement, P, X: Subvariety,
                               N: int = DEFAULT_PRECISION) -> tuple[DistanceValue, DistanceValue]:
    """(d(sigma P, X^sigma), d(P, X)) in the tower of sigma's level."""
    from .local_field import tower_make
    spec = tower_make(sigma.p, sigma.tame, sigma.k, N)
    return distance(galois_act(sigma, P), X.conjugate(sigma), spec), distance(P, X, spec)


def translation_law(P, Q, X: Subvariety, p: int,
                    N: int = DEFAULT_PRECISION) -> tuple[DistanceValue, DistanceValue]:
    """(d(P - Q, X), d(P, X^{+Q}))."""
    spec = tower_for_level(p, math.lcm(order(P), order(Q), X.level()), N)
    return distance(sub_points(P, Q), X, spec), distance(P, X.translate(Q), spec)


def combine_generators(X: Subvariety, cofactors) -> Subvariety:
    """Generators sum_j C[i][j] * g_j for integer Laurent cofactors C[i][j] (lists of Terms)."""
    gens = []
    for row in cofactors:
        if len(row) != len(X.generators):
            raise ValueError("cofactor row length must match number of generators")
        terms = []
        for cof, g in zip(row, X.generators):
            for a in cof:
                for t in g:
                    terms.append(Term(tuple(x + y for x, y in zip(a.exps, t.exps)),
                                      a.scale * t.scale, a.root + t.root))
        if not terms:
            terms = [Term((0,) * X.n, 0)]
        gens.append(tuple(terms))
    return Subvariety(X.n, tuple(gens))


# ---------------------------------------------------------------------------
# torsion enumeration and the discreteness gap

def points_of_exact_order(n: int, m: int):
    """All torsion points of G_m^n of exact order m, in lexicographic numerator order."""
    for nums in product(range(m), repeat=n):
        if math.gcd(m, *nums) == 1:
            yield tuple(Fraction(c, m) for c in nums)


def torsion_points(n: int, B: int):
    """Every torsion point of order <= B exactly once, sorted by (order, point)."""
    for m in range(1, B + 1):
        yield from points_of_exact_order(n, m)


@dataclass
class MattuckResult:
    p: int
    n: int
    bound: int
    gap: DistanceValue
    witness: tuple
    points: int
    kernel_classes: int
    kernel_pairs: int


def kernel_valuation(R: Sequence[Fraction], p: int, N: int = DEFAULT_PRECISION) -> DistanceValue:
    """Distance from a p-primary torsion point R to the identity."""
    best = None
    for s in R:
        s = sym(s)
        if s == 0:
            continue
        spec = tower_for_level(p, s.denominator, N)
        v = valuation(embed_root(s, spec) - 1)
        if v.value is None:
            return DistanceValue.below_precision()
        best = v.value if best is None else min(best, v.value)
    return DistanceValue.member() if best is None else DistanceValue.val(best)


def mattuck_gap(p: int, n: int, B: int, N: int = DEFAULT_PRECISION) -> MattuckResult:
    """Smallest nonzero distance between two torsion points of order <= B.

    Points are grouped by their prime-to-p part.  Inside a group the difference
    is p-primary and its distance is computed in the p-power cyclotomic tower.
    Across groups some coordinate of the difference has a nontrivial prime-to-p
    part; its residue is a power of the residue generator of exact order m',
    hence differs from 1, and the distance is 1 (valuation 0).
    """
    if B < 2:
        raise ValueError("order bound must be >= 2")
    pts = list(torsion_points(n, B))
    groups: dict[tuple, list] = {}
    for P in pts:
        x, y = torsion_split(P, p)
        groups.setdefault(y, []).append((P, x))
    cache: dict[tuple, DistanceValue] = {}
    best = None
    witness = None
    kernel_pairs = 0
    index = {P: i for i, P in enumerate(pts)}
    for members in groups.values():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                P, xP = members[a]
                Q, xQ = members[b]
                R = sub_points(xP, xQ)
                d = cache.get(R)
                if d is None:
                    d = kernel_valuation(R, p, N)
                    cache[R] = d
                kernel_pairs += 1
                pair = (P, Q) if index[P] < index[Q] else (Q, P)
                if best is None or d.closeness_key() < best.closeness_key() or (
                        d == best and (index[pair[0]], index[pair[1]]) < (index[witness[0]], index[witness[1]])):
                    best, witness = d, pair
    if best is None:
        # no two points share a reduction: every nonzero distance equals 1
        best, witness = DistanceValue.val(0), (pts[0], pts[1])
    return MattuckResult(p, n, B, best, witness, len(pts), len(groups), kernel_pairs)
