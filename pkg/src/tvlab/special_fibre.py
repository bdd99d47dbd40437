"""Frobenius identities over finite fields: G_m and short Weierstrass curves (p > 3)."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .ffield import FiniteField, subfield_embedding
from .galois_poly import cyclotomic_factor_free
from .intpoly import IntPolynomial, prime_factors

T = IntPolynomial.T()
ENUMERATION_LIMIT = 10 ** 4


def field_for(q: int, r: int = 1) -> tuple[FiniteField, FiniteField]:
    """(F_q, F_{q^r}) with their deterministic moduli."""
    ps = prime_factors(q)
    if len(ps) != 1:
        raise ValueError(f"{q} is not a prime power")
    p = ps[0]
    f = 0
    while p ** f < q:
        f += 1
    return FiniteField(p, f), FiniteField(p, f * r)


def parse_field_spec(text: str) -> FiniteField:
    """``"p=5,f=2"`` -> F_25."""
    kv = dict(part.split("=") for part in text.replace(" ", "").split(","))
    return FiniteField(int(kv["p"]), int(kv.get("f", 1)))


def gm_frobenius_identity(q: int, r: int = 1) -> dict:
    """Check Frob(x) = [q]x, i.e. Frob(x) * x^(-q) = 1, on every unit of F_{q^r}.

    Frob is the F_p-linear map y^i -> (y^i)^q applied to coordinates;
    [q]x is square-and-multiply exponentiation.
    """
    Fq, F = field_for(q, r)
    if F.q > ENUMERATION_LIMIT:
        raise ValueError("field too large for exhaustive check")
    f_small = Fq.f
    basis_images = []
    for i in range(F.f):
        e = F.coerce([0] * i + [1])
        basis_images.append(F.frobenius(e, f_small) if F.f > 1 else e)
    checked = 0
    for x in F.units():
        lin = F.zero
        for i, c in enumerate(x):
            if c:
                lin = F.add(lin, F.scalar(c, basis_images[i]))
        if lin != F.pow(x, q):
            return {"q": q, "r": r, "checked": checked, "ok": False, "counterexample": x}
        checked += 1
    return {"q": q, "r": r, "checked": checked, "ok": True}


class SingularCurveError(ValueError):
    pass


class EllipticCurveFq:
    """y^2 = x^3 + a4 x + a6 over F_q (p > 3), with points over F_{q^r}."""

    def __init__(self, q: int, a4, a6, r: int = 1):
        self.base, self.field = field_for(q, r)
        self.q = q
        self.r = r
        if self.base.p <= 3:
            raise ValueError("short Weierstrass model needs p > 3")
        emb = subfield_embedding(self.base, self.field)
        self.a4_base = self.base.coerce(a4)
        self.a6_base = self.base.coerce(a6)
        self.a4 = emb(self.a4_base)
        self.a6 = emb(self.a6_base)
        B = self.base
        disc = B.add(B.scalar(4, B.pow(self.a4_base, 3)), B.scalar(27, B.pow(self.a6_base, 2)))
        if B.is_zero(disc):
            raise SingularCurveError("singular curve (4 a4^3 + 27 a6^2 = 0)")

    def __repr__(self):
        return f"EllipticCurveFq(q={self.q}, a4={self.a4_base}, a6={self.a6_base}, r={self.r})"

    def extension(self, r: int) -> EllipticCurveFq:
        return EllipticCurveFq(self.q, self.a4_base, self.a6_base, r)

    def rhs(self, x):
        F = self.field
        return F.add(F.add(F.pow(x, 3), F.mul(self.a4, x)), self.a6)

    def is_on_curve(self, P) -> bool:
        if P is None:
            return True
        x, y = P
        return self.field.mul(y, y) == self.rhs(x)

    def neg(self, P):
        if P is None:
            return None
        return (P[0], self.field.neg(P[1]))

    def add(self, P, Q):
        F = self.field
        if P is None:
            return Q
        if Q is None:
            return P
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if F.add(y1, y2) == F.zero:
                return None
            lam = F.mul(F.add(F.scalar(3, F.mul(x1, x1)), self.a4), F.inv(F.scalar(2, y1)))
        else:
            lam = F.mul(F.sub(y2, y1), F.inv(F.sub(x2, x1)))
        x3 = F.sub(F.sub(F.mul(lam, lam), x1), x2)
        y3 = F.sub(F.mul(lam, F.sub(x1, x3)), y1)
        return (x3, y3)

    def mul(self, k: int, P):
        if k < 0:
            return self.mul(-k, self.neg(P))
        R = None
        while k:
            if k & 1:
                R = self.add(R, P)
            P = self.add(P, P)
            k >>= 1
        return R

    def frobenius(self, P):
        """(x, y) -> (x^q, y^q)."""
        if P is None:
            return None
        F = self.field
        return (F.pow(P[0], self.q), F.pow(P[1], self.q))

    @cached_property
    def points(self) -> list:
        if self.field.q > ENUMERATION_LIMIT:
            raise ValueError("field too large for naive enumeration")
        F = self.field
        roots: dict = {}
        for y in F.elements():
            roots.setdefault(F.mul(y, y), []).append(y)
        pts = [None]
        for x in F.elements():
            for y in roots.get(self.rhs(x), []):
                pts.append((x, y))
        return pts

    def count(self) -> int:
        if self.field.q > ENUMERATION_LIMIT:
            raise ValueError("field too large for naive enumeration")
        F = self.field
        n = 1
        for x in F.elements():
            v = self.rhs(x)
            n += 1 if F.is_zero(v) else (2 if F.is_square(v) else 0)
        return n


def parse_curve_spec(text: str) -> tuple[int, int]:
    """``"a4=1,a6=0"`` -> (1, 0)."""
    kv = dict(part.split("=") for part in text.replace(" ", "").split(","))
    return int(kv["a4"]), int(kv["a6"])


@dataclass
class WeilData:
    count: int
    trace: int
    F0: IntPolynomial

    @property
    def hasse_ok(self) -> bool:
        return self.trace * self.trace <= 4 * self.F0(0)


def ec_point_count(E: EllipticCurveFq) -> WeilData:
    """#E(F_q), trace a = q + 1 - #E and F_0 = T^2 - a T + q."""
    base = E if E.r == 1 else E.extension(1)
    n = base.count()
    a = E.q + 1 - n
    F0 = T ** 2 - T * a + E.q
    w = WeilData(n, a, F0)
    assert F0(1) == n
    assert w.hasse_ok, "Hasse bound violated"
    assert cyclotomic_factor_free(F0)
    return w


def count_from_weil(a: int, q: int, r: int) -> int:
    """#E(F_{q^r}) = q^r + 1 - (alpha^r + beta^r) via Newton sums."""
    s_prev, s = 2, a
    if r == 0:
        return q ** 0 + 1 - 2
    for _ in range(r - 1):
        s_prev, s = s, a * s - q * s_prev
    return q ** r + 1 - s


def ec_frobenius_annihilate(E: EllipticCurveFq, r: int) -> dict:
    """Check Frob^2(P) - [a] Frob(P) + [q] P = O for every P in E(F_{q^r})."""
    w = ec_point_count(E)
    Er = E.extension(r)
    pts = Er.points
    bad = None
    for P in pts:
        F1 = Er.frobenius(P)
        F2 = Er.frobenius(F1)
        R = Er.add(Er.add(F2, Er.neg(Er.mul(w.trace, F1))), Er.mul(E.q, P))
        if R is not None:
            bad = P
            break
    return {"q": E.q, "r": r, "points": len(pts), "trace": w.trace,
            "expected_points": count_from_weil(w.trace, E.q, r), "ok": bad is None, "counterexample": bad}


def all_smooth_curves(q: int):
    Fq, _ = field_for(q)
    for a4 in range(Fq.q):
        for a6 in range(Fq.q):
            try:
                yield EllipticCurveFq(q, Fq.from_int(a4), Fq.from_int(a6))
            except SingularCurveError:
                continue
