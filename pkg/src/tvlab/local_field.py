"""Finite-precision arithmetic in K = Q_p(zeta_{m'}, zeta_{p^k}).

The ring of integers is W[x] with W = Z_p[y]/(G) unramified of degree f
(G a lift of the deterministic irreducible polynomial over F_p) and
x = zeta_{p^k} - 1 a root of the Eisenstein polynomial Phi_{p^k}(x + 1).
Elements are kept modulo p^N, i.e. in O_K / p^N O_K, where every ring
operation is exact.  Valuations are normalised by v(p) = 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from .cyclo import multiplicative_order, split_level, sym
from .ffield import FiniteField, conway_free_modulus
from .intpoly import IntPolynomial, cyclotomic, is_prime

DEFAULT_PRECISION = 40
# above this field size the residue generator is found by powering instead of enumeration
ENUMERATION_LIMIT = 1 << 16


@dataclass(frozen=True)
class ValuationResult:
    """Exact valuation ``value`` (v(p) = 1), or ``None`` for BelowPrecision."""

    value: Fraction | None

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    @property
    def below_precision(self) -> bool:
        return self.value is None

    def __str__(self):
        return "BelowPrecision" if self.value is None else f"Finite({self.value})"


BELOW_PRECISION = ValuationResult(None)


def Finite(r) -> ValuationResult:
    return ValuationResult(Fraction(r))


def vp_int(n: int, p: int) -> int | None:
    """p-adic valuation of an integer; None for 0."""
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True, eq=True)
class TowerSpec:
    p: int
    tame: int
    k: int
    N: int
    f: int = field(compare=False)
    e: int = field(compare=False)
    unramified_poly: tuple = field(compare=False, repr=False)
    eisenstein_poly: tuple = field(compare=False, repr=False)

    @property
    def q(self) -> int:
        return self.p ** self.f

    @property
    def level(self) -> int:
        return self.p ** self.k * self.tame

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    @property
    def dim(self) -> int:
        return self.e * self.f

    @cached_property
    def residue_field(self) -> FiniteField:
        return FiniteField(self.p, self.f, self.unramified_poly)

    def epsilon_exponent(self) -> Fraction:
        """epsilon_K = p^(-1/e); returns 1/e."""
        return Fraction(1, self.e)

    # -- constructors -----------------------------------------------------
    def element(self, coords) -> TowerElement:
        return TowerElement(self, coords)

    def from_int(self, n: int) -> TowerElement:
        c = [0] * self.dim
        c[0] = n % self.modulus
        return TowerElement(self, c, _trusted=True)

    def zero(self) -> TowerElement:
        return self.from_int(0)

    def one(self) -> TowerElement:
        return self.from_int(1)

    def uniformizer(self) -> TowerElement:
        """x = zeta_{p^k} - 1 (equals p when k = 0)."""
        if self.e == 1:
            return self.from_int(self.p)
        c = [0] * self.dim
        c[self.f] = 1
        return TowerElement(self, c, _trusted=True)

    def y(self) -> TowerElement:
        if self.f == 1:
            raise ValueError("trivial unramified part has no generator y")
        c = [0] * self.dim
        c[1] = 1
        return TowerElement(self, c, _trusted=True)

    def lift_residue(self, a) -> TowerElement:
        """Coordinate-wise lift of a residue-field element."""
        a = self.residue_field.coerce(a)
        c = [0] * self.dim
        c[: self.f] = a
        return TowerElement(self, c, _trusted=True)

    # -- cached embedding data -------------------------------------------
    @cached_property
    def residue_generator(self):
        """Residue of exact order m' fixing the embedding of zeta_{m'}."""
        F = self.residue_field
        m = self.tame
        if m == 1:
            return F.one
        if self.q <= ENUMERATION_LIMIT:
            for t in range(1, self.q):
                a = F.from_int(t)
                if F.has_order(a, m):
                    return a
        cofactor = (self.q - 1) // m
        for t in range(1, self.q):
            a = F.pow(F.from_int(t), cofactor)
            if F.has_order(a, m):
                return a
        raise AssertionError("no residue of the requested order")  # m' | q - 1

    @cached_property
    def tame_root(self) -> TowerElement:
        """omega(residue_generator), a primitive m'-th root of unity."""
        return teichmuller(self, self.residue_generator, order=self.tame)

    @cached_property
    def tame_powers(self) -> tuple:
        z = self.tame_root
        out = [self.one()]
        for _ in range(self.tame - 1):
            out.append(out[-1] * z)
        return tuple(out)

    @cached_property
    def wild_powers(self) -> tuple:
        pk = self.p ** self.k
        z = self.one() + self.uniformizer() if self.k else self.one()
        out = [self.one()]
        for _ in range(pk - 1):
            out.append(out[-1] * z)
        return tuple(out)

    @cached_property
    def _frobenius_y(self) -> TowerElement:
        # the root of G congruent to y^p, by Newton iteration
        G = self.unramified_poly
        dG = tuple(i * G[i] for i in range(1, len(G)))
        r = self.y() ** self.p
        for _ in range(2 * self.N.bit_length() + 2):
            num = _horner(self, G, r)
            if num.is_indistinguishable_from_zero():
                break
            r = r - num * _horner(self, dG, r).inverse()
        return r

    @cached_property
    def _frobenius_y_powers(self) -> tuple:
        z = self._frobenius_y
        out = [self.one()]
        for _ in range(self.f - 1):
            out.append(out[-1] * z)
        return tuple(out)

    @cached_property
    def _yreduce(self) -> tuple:
        # rows: y^t mod G for t = f .. 2f-2, as integer vectors modulo p^N
        G = self.unramified_poly
        f, M = self.f, self.modulus
        rows = []
        cur = [(-c) % M for c in G[:f]]  # y^f
        for _ in range(max(f - 1, 0)):
            rows.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(f):
                    cur[j] = (cur[j] - top * G[j]) % M
        return tuple(rows)

    @cached_property
    def _slot_bits(self) -> int:
        return 2 * self.modulus.bit_length() + (self.dim).bit_length() + 2


def _horner(spec: TowerSpec, coeffs, z: TowerElement) -> TowerElement:
    acc = spec.zero()
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


@lru_cache(maxsize=None)
def tower_make(p: int, tame: int = 1, k: int = 0, N: int = DEFAULT_PRECISION) -> TowerSpec:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if tame < 1 or tame % p == 0:
        raise ValueError(f"tame level {tame} must be positive and prime to p={p}")
    if k < 0 or N < 1:
        raise ValueError("need k >= 0 and N >= 1")
    f = multiplicative_order(p, tame)
    e = (p - 1) * p ** (k - 1) if k else 1
    unram = conway_free_modulus(p, f)
    if k:
        eis = cyclotomic(p ** k)(IntPolynomial((1, 1))).coeffs
    else:
        eis = (-p, 1)
    return TowerSpec(p, tame, k, N, f, e, unram, tuple(eis))


def tower_for_level(p: int, level: int, N: int = DEFAULT_PRECISION) -> TowerSpec:
    k, tame = split_level(level, p)
    return tower_make(p, tame, k, N)


class TowerElement:
    """Element of O_K / p^N with coordinates c[j*f + i] on the basis y^i x^j."""

    __slots__ = ("spec", "c")

    def __init__(self, spec: TowerSpec, coords, _trusted: bool = False):
        self.spec = spec
        if _trusted:
            self.c = tuple(coords)
        else:
            coords = list(coords)
            if len(coords) != spec.dim:
                raise ValueError(f"expected {spec.dim} coordinates, got {len(coords)}")
            M = spec.modulus
            self.c = tuple(int(a) % M for a in coords)

    def __repr__(self):
        return f"TowerElement({list(self.c)})"

    def _coerce(self, other) -> TowerElement:
        if isinstance(other, TowerElement):
            if other.spec != self.spec:
                raise ValueError("elements of different towers")
            return other
        if isinstance(other, int):
            return self.spec.from_int(other)
        raise TypeError(f"cannot combine TowerElement with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        M = self.spec.modulus
        return TowerElement(self.spec, [(a + b) % M for a, b in zip(self.c, o.c)], _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        M = self.spec.modulus
        return TowerElement(self.spec, [(-a) % M for a in self.c], _trusted=True)

    def __sub__(self, other):
        o = self._coerce(other)
        M = self.spec.modulus
        return TowerElement(self.spec, [(a - b) % M for a, b in zip(self.c, o.c)], _trusted=True)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            M = self.spec.modulus
            return TowerElement(self.spec, [(a * other) % M for a in self.c], _trusted=True)
        o = self._coerce(other)
        return TowerElement(self.spec, _multiply(self.spec, self.c, o.c), _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.spec.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, TowerElement)):
            return self.c == self._coerce(other).c
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def is_indistinguishable_from_zero(self) -> bool:
        return not any(self.c)

    def valuation(self) -> ValuationResult:
        return valuation(self)

    def residue(self):
        """Image in the residue field F_q."""
        return self.spec.residue_field.coerce(self.c[: self.spec.f])

    def inverse(self) -> TowerElement:
        spec = self.spec
        r = self.residue()
        F = spec.residue_field
        if F.is_zero(r):
            raise ZeroDivisionError("element is not a unit")
        v = spec.lift_residue(F.inv(r))
        target = spec.N * spec.e
        prec = 1
        while True:
            v = v * (2 - self * v)
            prec *= 2
            if prec >= target:
                break
        assert (self * v - 1).is_indistinguishable_from_zero()
        return v


def _pack(vals, bits):
    n = 0
    for v in reversed(vals):
        n = (n << bits) | v
    return n


def _multiply(spec: TowerSpec, a, b):
    e, f, M = spec.e, spec.f, spec.modulus
    bits = spec._slot_bits
    mask = (1 << bits) - 1
    # Kronecker substitution: x-stride of (2f - 1) y-slots
    stride = 2 * f - 1
    A = [0] * (e * stride)
    B = [0] * (e * stride)
    for j in range(e):
        A[j * stride: j * stride + f] = a[j * f:(j + 1) * f]
        B[j * stride: j * stride + f] = b[j * f:(j + 1) * f]
    prod = _pack(A, bits) * _pack(B, bits)
    nslots = (2 * e - 1) * stride
    raw = []
    for _ in range(nslots):
        raw.append(prod & mask)
        prod >>= bits
    # reduce in y
    ypolys = []
    rows = spec._yreduce
    for j in range(2 * e - 1):
        seg = raw[j * stride:(j + 1) * stride]
        low = seg[:f]
        for t in range(f, stride):
            c = seg[t]
            if c:
                row = rows[t - f]
                for i in range(f):
                    low[i] += c * row[i]
        ypolys.append([v % M for v in low])
    # reduce in x using x^e = -(E_0 + ... + E_{e-1} x^{e-1})
    if e > 1:
        E = spec.eisenstein_poly
        for j in range(2 * e - 2, e - 1, -1):
            top = ypolys[j]
            if any(top):
                for t in range(e):
                    et = E[t]
                    if et:
                        tgt = ypolys[j - e + t]
                        for i in range(f):
                            tgt[i] = (tgt[i] - et * top[i]) % M
        ypolys = ypolys[:e]
    out = []
    for poly in ypolys[:e]:
        out.extend(poly)
    return out


def valuation(z: TowerElement) -> ValuationResult:
    """min over x-degrees j of v_p(coefficient) + j/e; BelowPrecision if z = 0 mod p^N."""
    spec = z.spec
    e, f, p = spec.e, spec.f, spec.p
    best = None
    for j in range(e):
        coeffs = z.c[j * f:(j + 1) * f]
        vs = [vp_int(c, p) for c in coeffs if c]
        if not vs:
            continue
        r = Fraction(min(vs)) + Fraction(j, e)
        if best is None or r < best:
            best = r
    return ValuationResult(best)


def teichmuller(spec: TowerSpec, a, order: int | None = None) -> TowerElement:
    """Teichmuller lift of a nonzero residue ``a``.

    Newton iteration for z^d = 1 with d the multiplicative order of ``a``
    (or q - 1 if unknown); quadratic convergence from the naive lift.
    """
    F = spec.residue_field
    a = F.coerce(a) if not isinstance(a, int) else F.coerce(a)
    if F.is_zero(a):
        raise ValueError("Teichmuller lift of zero residue")
    d = order if order is not None else spec.q - 1
    if F.pow(a, d) != F.one:
        raise ValueError(f"residue order does not divide {d}")
    if d == 1:
        return spec.one()
    dinv = pow(d, -1, spec.modulus)
    z = spec.lift_residue(a)
    for _ in range(spec.N.bit_length() + 2):
        err = z ** d - 1
        if err.is_indistinguishable_from_zero():
            break
        z = z * (1 - err * dinv)
    assert (z ** d - 1).is_indistinguishable_from_zero()
    return z


def teichmuller_by_qpower(spec: TowerSpec, a) -> TowerElement:
    """Teichmuller lift as the fixed point of z -> z^q (slow reference route)."""
    F = spec.residue_field
    a = F.coerce(a)
    if F.is_zero(a):
        raise ValueError("Teichmuller lift of zero residue")
    z = spec.lift_residue(a)
    for _ in range(spec.N + 1):
        nxt = z ** spec.q
        if nxt == z:
            return z
        z = nxt
    raise AssertionError("q-power iteration did not stabilise")


def embed_root(s, spec: TowerSpec) -> TowerElement:
    """Image of zeta^s under the fixed embedding into the tower."""
    s = sym(s)
    m = s.denominator
    if spec.level % m:
        raise ValueError(f"order {m} of {s} does not divide tower level {spec.level}")
    k, tame = split_level(m, spec.p)
    pk = spec.p ** k
    c = s.numerator
    u = (c * pow(tame, -1, pk)) % pk if pk > 1 else 0
    v = (c * pow(pk, -1, tame)) % tame if tame > 1 else 0
    wild = spec.wild_powers[u * spec.p ** (spec.k - k)] if u else None
    tame_part = spec.tame_powers[v * (spec.tame // tame)] if v else None
    if wild is None:
        return tame_part if tame_part is not None else spec.one()
    if tame_part is None:
        return wild
    return wild * tame_part


def reduce_level(z: TowerElement, n: int) -> tuple:
    """Coordinates of z modulo m^(n+1), m the maximal ideal."""
    spec = z.spec
    if n < 0 or n + 1 > spec.N * spec.e:
        raise ValueError(f"level {n} exceeds working precision {spec.N * spec.e} (pi-adic)")
    e, f, p = spec.e, spec.f, spec.p
    out = []
    for j in range(e):
        digits = -(-(n + 1 - j) // e) if j <= n else 0
        mod = p ** digits
        out.extend(c % mod for c in z.c[j * f:(j + 1) * f])
    return tuple(out)


def congruent_at_level(z: TowerElement, w: TowerElement, n: int) -> bool:
    return reduce_level(z, n) == reduce_level(w, n)


def frobenius_apply(spec: TowerSpec, z: TowerElement) -> TowerElement:
    """Arithmetic Frobenius (lift of a -> a^p) on an unramified tower."""
    if spec.k != 0:
        raise ValueError("frobenius_apply needs an unramified tower (k = 0)")
    if z.spec != spec:
        raise ValueError("element of another tower")
    if spec.f == 1:
        return z
    powers = spec._frobenius_y_powers
    acc = spec.zero()
    for i, c in enumerate(z.c):
        if c:
            acc = acc + powers[i] * c
    return acc


def habegger_valuations(p: int, n_max: int, N: int | None = None) -> list[dict]:
    """v_p(2^((p-1)p^(n-1)) - 1) for n = 1..n_max, by integers and in the tower."""
    N = N or max(DEFAULT_PRECISION, n_max + 10)
    spec = tower_make(p, 1, 0, N)
    two = spec.from_int(2)
    rows = []
    for n in range(1, n_max + 1):
        exp = (p - 1) * p ** (n - 1)
        exact = 2 ** exp - 1
        z = two ** exp - 1
        rows.append({
            "n": n,
            "exponent": exp,
            "v_exact": vp_int(exact, p),
            "v_tower": z.valuation().value,
            "digits_agree": z.c[0] == exact % spec.modulus,
        })
    return rows
