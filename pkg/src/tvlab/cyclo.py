"""Exact roots of unity, cyclotomic integers and the local cyclotomic Galois group.

Roots of unity are written additively: the symbol ``Fraction(c, m)`` stands for
zeta_m^c, so a torsion point of G_m^n is a tuple of fractions in [0, 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Sequence

from .intpoly import IntPolynomial, cyclotomic, euler_phi

TorusPoint = tuple  # tuple[Fraction, ...]


def sym(c, m: int = 1) -> Fraction:
    """Reduced element of Q/Z, normalised into [0, 1)."""
    if isinstance(c, str):
        return parse_symbol(c) if m == 1 else sym(parse_symbol(c) / m)
    return Fraction(c, m) % 1


def parse_symbol(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        if int(den) <= 0:
            raise ValueError(f"bad root-of-unity symbol {text!r}")
        return sym(int(num), int(den))
    return sym(int(text))


def format_symbol(s: Fraction) -> str:
    s = sym(s)
    return f"{s.numerator}/{s.denominator}"


def parse_point(text: str) -> TorusPoint:
    """Parse ``"1/6,5/6"`` into a torus point."""
    parts = [t for t in text.split(",") if t.strip()]
    if not parts:
        raise ValueError("empty torus point")
    return tuple(parse_symbol(t) for t in parts)


def format_point(P: Sequence[Fraction]) -> str:
    return ",".join(format_symbol(s) for s in P)


def point(*coords) -> TorusPoint:
    return tuple(sym(c) for c in coords)


def order(P: Iterable[Fraction]) -> int:
    return reduce(math.lcm, (sym(s).denominator for s in P), 1)


def add_points(P, Q) -> TorusPoint:
    return tuple(sym(a + b) for a, b in zip(P, Q, strict=True))


def sub_points(P, Q) -> TorusPoint:
    return tuple(sym(a - b) for a, b in zip(P, Q, strict=True))


def scale_point(k: int, P) -> TorusPoint:
    return tuple(sym(k * a) for a in P)


# ---------------------------------------------------------------------------
# cyclotomic integers

@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """T^j mod Phi_m for 0 <= j < m, padded to length phi(m)."""
    phi = cyclotomic(m)
    d = euler_phi(m)
    rows = []
    for j in range(m):
        r = (IntPolynomial.monomial(j) % phi).coeffs
        rows.append(r + (0,) * (d - len(r)))
    return tuple(rows)


class CycInt:
    """Element of Z[zeta_m] in the power basis 1, zeta, ..., zeta^(phi(m)-1)."""

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs: Iterable[int]):
        if level < 1:
            raise ValueError("level must be positive")
        d = euler_phi(level)
        coeffs = tuple(coeffs)
        if len(coeffs) != d:
            # arbitrary-length input gets reduced modulo Phi_m
            coeffs = (IntPolynomial(coeffs) % cyclotomic(level)).coeffs
            coeffs = coeffs + (0,) * (d - len(coeffs))
        self.level = level
        self.coeffs = coeffs

    @classmethod
    def from_int(cls, c: int, level: int = 1) -> CycInt:
        d = euler_phi(level)
        return cls(level, (c,) + (0,) * (d - 1))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def lift(self, level: int) -> CycInt:
        """Image in Z[zeta_level] for a multiple ``level`` of self.level."""
        if level == self.level:
            return self
        if level % self.level:
            raise ValueError(f"level {self.level} does not divide {level}")
        step = level // self.level
        table = _power_table(level)
        out = [0] * euler_phi(level)
        for i, c in enumerate(self.coeffs):
            if c:
                for j, t in enumerate(table[(i * step) % level]):
                    out[j] += c * t
        return CycInt(level, out)

    def _common(self, other):
        if isinstance(other, int):
            other = CycInt.from_int(other, self.level)
        m = math.lcm(self.level, other.level)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        a, b = self._common(other)
        return CycInt(a.level, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.level, [-c for c in self.coeffs])

    def __sub__(self, other):
        a, b = self._common(other)
        return CycInt(a.level, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.level, [other * c for c in self.coeffs])
        a, b = self._common(other)
        prod = IntPolynomial(a.coeffs) * IntPolynomial(b.coeffs)
        return CycInt(a.level, prod.coeffs)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, CycInt)):
            return (self - other).is_zero()
        return NotImplemented

    def __hash__(self):
        # hash on the minimal-level-free form is not cheap; hash by value at own level
        return hash((self.level, self.coeffs))

    def __repr__(self):
        return f"CycInt(level={self.level}, coeffs={list(self.coeffs)})"

    def galois_conjugate(self, u: int) -> CycInt:
        """Apply zeta_m -> zeta_m^u (u a unit mod m)."""
        m = self.level
        if math.gcd(u, m) != 1:
            raise ValueError(f"{u} is not a unit modulo {m}")
        table = _power_table(m)
        out = [0] * len(self.coeffs)
        for i, c in enumerate(self.coeffs):
            if c:
                for j, t in enumerate(table[(i * u) % m]):
                    out[j] += c * t
        return CycInt(m, out)


def cyc_embed(s: Fraction, level: int) -> CycInt:
    """zeta^s as an element of Z[zeta_level]."""
    s = sym(s)
    if level % s.denominator:
        raise ValueError(f"denominator of {s} does not divide level {level}")
    return CycInt(level, _power_table(level)[s.numerator * (level // s.denominator)])


def cyc_is_zero(z: CycInt) -> bool:
    return z.is_zero()


def cyc_sum(terms: Iterable[tuple[int, Fraction]], level: int | None = None) -> CycInt:
    """Sum of scale * zeta^root, evaluated exactly at a common level."""
    terms = [(k, sym(s)) for k, s in terms]
    if level is None:
        level = reduce(math.lcm, (s.denominator for _, s in terms), 1)
    table = _power_table(level)
    out = [0] * euler_phi(level)
    for k, s in terms:
        if level % s.denominator:
            raise ValueError(f"denominator of {s} does not divide level {level}")
        row = table[s.numerator * (level // s.denominator)]
        for j, t in enumerate(row):
            if t:
                out[j] += k * t
    return CycInt(level, out)


# ---------------------------------------------------------------------------
# Galois action

def multiplicative_order(a: int, m: int) -> int:
    if m == 1:
        return 1
    if math.gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit modulo {m}")
    k, x = 1, a % m
    while x != 1:
        x = (x * a) % m
        k += 1
    return k


def split_level(m: int, p: int) -> tuple[int, int]:
    """Write m = p^k * m' with p not dividing m'; return (k, m')."""
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return k, m


def torsion_split(P: Sequence[Fraction], p: int) -> tuple[TorusPoint, TorusPoint]:
    """Unique decomposition P = x + y, x of p-power order, y of order prime to p."""
    xs, ys = [], []
    for s in P:
        s = sym(s)
        k, tame = split_level(s.denominator, p)
        pk = p ** k
        c = s.numerator
        u = (c * pow(tame, -1, pk)) % pk if pk > 1 else 0
        v = (c * pow(pk, -1, tame)) % tame if tame > 1 else 0
        xs.append(sym(u, pk))
        ys.append(sym(v, tame))
    return tuple(xs), tuple(ys)


@dataclass(frozen=True)
class GaloisElement:
    """Element of Gal(Q_p(zeta_{p^k m'}) / Q_p) = <Frob> x (Z/p^k)^*.

    Acts on prime-to-p roots of unity through the Frobenius power p^j and on
    p-power roots of unity through multiplication by ``ramified``.
    """

    p: int
    k: int
    tame: int
    frob: int = 0
    ramified: int = 1

    def __post_init__(self):
        if self.tame % self.p == 0:
            raise ValueError("tame level must be prime to p")
        pk = self.p ** self.k
        if math.gcd(self.ramified, self.p) != 1 and pk > 1:
            raise ValueError("ramified exponent must be a unit mod p^k")
        object.__setattr__(self, "frob", self.frob % self.f)
        object.__setattr__(self, "ramified", self.ramified % pk if pk > 1 else 1)

    @property
    def level(self) -> int:
        return self.p ** self.k * self.tame

    @property
    def f(self) -> int:
        return multiplicative_order(self.p, self.tame)

    @classmethod
    def frobenius(cls, p: int, k: int, tame: int) -> GaloisElement:
        return cls(p, k, tame, 1, 1)

    @classmethod
    def identity(cls, p: int, k: int, tame: int) -> GaloisElement:
        return cls(p, k, tame, 0, 1)

    def unit(self) -> int:
        """The u in (Z/level)^* with zeta -> zeta^u."""
        pk = self.p ** self.k
        a = pow(self.p, self.frob, self.tame) if self.tame > 1 else 0
        b = self.ramified
        if pk == 1:
            return a % self.tame if self.tame > 1 else 1
        if self.tame == 1:
            return b
        # CRT: u = a mod tame, u = b mod p^k
        return (a * pk * pow(pk, -1, self.tame) + b * self.tame * pow(self.tame, -1, pk)) % self.level

    def __mul__(self, other: GaloisElement) -> GaloisElement:
        if (self.p, self.k, self.tame) != (other.p, other.k, other.tame):
            raise ValueError("Galois elements of different towers")
        pk = self.p ** self.k
        return GaloisElement(self.p, self.k, self.tame,
                             self.frob + other.frob, (self.ramified * other.ramified) % pk if pk > 1 else 1)

    def __pow__(self, e: int) -> GaloisElement:
        pk = self.p ** self.k
        b = pow(self.ramified, e, pk) if pk > 1 else 1
        return GaloisElement(self.p, self.k, self.tame, self.frob * e, b)

    def act_symbol(self, s: Fraction) -> Fraction:
        s = sym(s)
        if self.level % s.denominator:
            raise ValueError(f"order of {s} does not divide Galois level {self.level}")
        (x,), (y,) = torsion_split((s,), self.p)
        return sym(x * self.ramified + y * self.p ** self.frob)


def galois_act(g: GaloisElement, P: Sequence[Fraction]) -> TorusPoint:
    return tuple(g.act_symbol(s) for s in P)


def galois_group(p: int, k: int, tame: int) -> list[GaloisElement]:
    """All elements of the local cyclotomic Galois group of the given level."""
    pk = p ** k
    f = multiplicative_order(p, tame)
    units = [b for b in range(1, pk + 1) if math.gcd(b, p) == 1] if pk > 1 else [1]
    return [GaloisElement(p, k, tame, j, b) for j in range(f) for b in units]
