"""Finite fields F_{p^f} as F_p[y]/(g) with a deterministic modulus g."""
from __future__ import annotations

from functools import lru_cache
from itertools import product

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from .intpoly import prime_factors


def _digits(t: int, p: int, f: int) -> tuple[int, ...]:
    out = []
    for _ in range(f):
        t, r = divmod(t, p)
        out.append(r)
    return tuple(out)


@lru_cache(maxsize=None)
def conway_free_modulus(p: int, f: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree f over F_p.

    Candidates y^f + a_{f-1} y^{f-1} + ... + a_0 are ordered by the integer
    a_0 + a_1 p + ... + a_{f-1} p^{f-1}.  Returned constant term first,
    including the leading 1.
    """
    if f == 1:
        return (0, 1)
    for t in range(p ** f):
        low = _digits(t, p, f)
        if low[0] == 0:
            continue
        coeffs = low + (1,)
        if gf_irreducible_p([ZZ(c) for c in reversed(coeffs)], p, ZZ):
            return coeffs
    raise AssertionError("no irreducible polynomial found")  # impossible


def poly_mulmod(a, b, mod, p):
    """Product of const-first coefficient sequences reduced by a monic ``mod`` over F_p."""
    f = len(mod) - 1
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    for i in range(len(out) - 1, f - 1, -1):
        c = out[i] % p
        if c:
            for j in range(f):
                out[i - f + j] -= c * mod[j]
        out[i] = 0
    res = [c % p for c in out[:f]]
    return tuple(res + [0] * (f - len(res)))


class FiniteField:
    """F_q with q = p^f; elements are tuples of f residues, constant term first."""

    def __init__(self, p: int, f: int = 1, modulus=None):
        self.p = p
        self.f = f
        self.q = p ** f
        self.modulus = tuple(modulus) if modulus is not None else conway_free_modulus(p, f)
        if len(self.modulus) != f + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree f")

    def __repr__(self):
        return f"FiniteField(p={self.p}, f={self.f})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    @property
    def zero(self):
        return (0,) * self.f

    @property
    def one(self):
        return (1,) + (0,) * (self.f - 1)

    @property
    def gen(self):
        if self.f == 1:
            raise ValueError("prime field has no polynomial generator")
        return (0, 1) + (0,) * (self.f - 2)

    def from_int(self, t: int):
        """Element whose base-p digits are its coordinates."""
        return _digits(t % self.q, self.p, self.f)

    def to_int(self, a) -> int:
        return sum(c * self.p ** i for i, c in enumerate(a))

    def coerce(self, a):
        if isinstance(a, int):
            return ((a % self.p),) + (0,) * (self.f - 1)
        a = tuple(c % self.p for c in a)
        return a + (0,) * (self.f - len(a))

    def elements(self):
        return (tuple(reversed(t)) for t in product(range(self.p), repeat=self.f))

    def units(self):
        return (a for a in self.elements() if any(a))

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        if self.f == 1:
            return ((a[0] * b[0]) % self.p,)
        return poly_mulmod(a, b, self.modulus, self.p)

    def scalar(self, k: int, a):
        return tuple((k * x) % self.p for x in a)

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero in finite field")
        return self.pow(a, self.q - 2)

    def is_zero(self, a) -> bool:
        return not any(a)

    def has_order(self, a, d: int) -> bool:
        """True iff a has exact multiplicative order d."""
        if self.pow(a, d) != self.one:
            return False
        return all(self.pow(a, d // r) != self.one for r in prime_factors(d))

    def is_square(self, a) -> bool:
        if not any(a):
            return True
        if self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == self.one

    def frobenius(self, a, times: int = 1):
        """a -> a^(p^times)."""
        for _ in range(times % self.f if self.f > 1 else 0):
            a = self.pow(a, self.p)
        return a


def subfield_embedding(small: FiniteField, big: FiniteField):
    """Deterministic embedding F_q -> F_{q^r}: send the small generator to the
    smallest (by integer encoding) root of its modulus in the big field."""
    if small.p != big.p or big.f % small.f:
        raise ValueError("not a subfield")
    if small.f == 1:
        return lambda a: big.coerce(a[0])
    mod = small.modulus
    for t in range(big.q):
        r = big.from_int(t)
        acc = big.zero
        for c in reversed(mod):
            acc = big.add(big.mul(acc, r), big.coerce(c))
        if not any(acc):
            root = r
            break
    else:
        raise AssertionError("no root of the subfield modulus")

    def embed(a):
        acc = big.zero
        for c in reversed(a):
            acc = big.add(big.mul(acc, root), big.coerce(c))
        return acc

    return embed
