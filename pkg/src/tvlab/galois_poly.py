"""Z[T] identities: cyclotomic-factor freeness, minimal integer multipliers with
cofactor certificates, and the (T - 1)^3 congruences."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .intpoly import IntPolynomial, cyclotomic, euler_phi, is_prime, prime_factors
from .lattice import hnf_with_transform, lattice_coords

T = IntPolynomial.T()


def cyclotomic_factor_free(F: IntPolynomial) -> bool:
    """True iff F has no root of unity among its complex roots."""
    if F.is_zero():
        raise ValueError("zero polynomial")
    deg = F.degree
    if deg < 1:
        return True
    # phi(m) >= sqrt(m/2), so phi(m) <= deg forces m <= 2 deg^2
    for m in range(1, 2 * deg * deg + 1):
        if euler_phi(m) <= deg and F.divmod_monic(cyclotomic(m))[1].is_zero():
            return False
    return True


@dataclass
class MultiplierCertificate:
    target: IntPolynomial
    generators: list
    multiplier: int
    cofactors: list
    window: list = field(default_factory=list)

    def verify(self) -> bool:
        total = IntPolynomial()
        for A, h in zip(self.cofactors, self.generators):
            total = total + A * h
        return total == self.target * self.multiplier

    def __str__(self):
        terms = " + ".join(f"({A})*({h})" for A, h in zip(self.cofactors, self.generators))
        return f"{self.multiplier}*({self.target}) = {terms}"


class NoMultiplierError(ValueError):
    pass


def _window(g: IntPolynomial, hs: Sequence[IntPolynomial]) -> list[int]:
    total = sum(h.degree for h in hs)
    return [int(total - h.degree + g.degree) for h in hs]


def _solve_window(g, hs, degs):
    width = max([int(g.degree)] + [int(h.degree) + d for h, d in zip(hs, degs)]) + 1
    rows, labels = [], []
    for idx, (h, d) in enumerate(zip(hs, degs)):
        for s in range(d + 1):
            v = [0] * width
            for i, c in enumerate(h.coeffs):
                v[i + s] = c
            rows.append(v)
            labels.append((idx, s))
    H, U = hnf_with_transform(rows, width)
    target = list(g.coeffs) + [0] * (width - len(g.coeffs))
    coords = lattice_coords(target, H)
    if coords is None:
        return None
    c = lcm(*(x.denominator for x in coords)) if coords else 1
    cof = [[0] * (d + 1) for d in degs]
    for k, x in enumerate(coords):
        w = int(x * c)
        if w:
            for j, u in enumerate(U[k]):
                if u:
                    idx, s = labels[j]
                    cof[idx][s] += w * u
    return c, [IntPolynomial(a) for a in cof]


def minimal_multiplier(g: IntPolynomial, hs: Sequence[IntPolynomial]) -> MultiplierCertificate:
    """Least c > 0 with c*g in the ideal (h_1, ..., h_r) of Z[T], with cofactors.

    Cofactor degrees are bounded by sum_{j != i} deg h_j + deg g; when that
    window yields nothing the bound is doubled once.  The multiplier is the lcm
    of the denominators of g's coordinates in the Hermite basis of the
    window lattice, so {c : c g in lattice} = c Z exactly.
    """
    if g.is_zero():
        raise ValueError("target must be nonzero")
    hs = [h for h in hs if not h.is_zero()]
    if not hs:
        raise NoMultiplierError("empty ideal")
    degs = _window(g, hs)
    res = _solve_window(g, hs, degs)
    if res is None:
        degs = [2 * d + 1 for d in degs]
        res = _solve_window(g, hs, degs)
    if res is None:
        raise NoMultiplierError("target is not in the rational span of the ideal (gcd obstruction)")
    c, cof = res
    cert = MultiplierCertificate(g, list(hs), c, cof, degs)
    if not cert.verify():
        raise AssertionError("cofactor certificate failed to verify")
    return cert


def boxall_congruence(m: int) -> IntPolynomial:
    """Quotient of T^m - 1 - m(T-1) - m(m-1)/2 (T-1)^2 by (T-1)^3; asserts exactness."""
    if m < 1:
        raise ValueError("m must be >= 1")
    u = T - 1
    R = (T ** m - 1) - u * m - (u ** 2) * (m * (m - 1) // 2)
    q, r = R.divmod_monic(u ** 3)
    if not r.is_zero():
        raise AssertionError(f"(T-1)^3 does not divide the remainder for m={m}")
    assert q * u ** 3 + u * m + (u ** 2) * (m * (m - 1) // 2) == T ** m - 1
    return q


def printed_tame_identity(q: int) -> dict:
    """Evaluate the tame-descent combination as printed, for comparison with a certificate.

    Returns the right-hand side and whether it equals q(T - 1).
    """
    u = T - 1
    Q = (T ** q - 1).divmod_monic(u ** 3)[0]
    num = IntPolynomial(((q + 1), (q - 1)))  # (q-1)T + (q+1)
    # scale by 4 to stay in Z[T]
    rhs4 = u ** 3 * (num * Q * 2 + q * (q - 1) ** 2) - (T ** q - 1) * num * 2
    lhs4 = u * (4 * q)
    diff4 = rhs4 - lhs4
    exact = all(c % 4 == 0 for c in rhs4.coeffs)
    rhs = IntPolynomial(c // 4 for c in rhs4.coeffs) if exact else None
    return {"q": q, "rhs": rhs, "rhs_times_4": rhs4, "balances": diff4.is_zero()}


@dataclass
class TameMembership:
    q: int
    claimed: int
    certificate: MultiplierCertificate
    claimed_certificate: MultiplierCertificate
    divides_claim: bool
    printed: dict


def tame_membership(q: int) -> TameMembership:
    """Certify claimed*(T-1) in ((T-1)^3, T^q - 1), claimed = q (q odd) or 4q (q even)."""
    if q < 2 or len(prime_factors(q)) != 1:
        raise ValueError(f"{q} is not a prime power")
    claimed = q if q % 2 else 4 * q
    u = T - 1
    hs = [u ** 3, T ** q - 1]
    cert = minimal_multiplier(u, hs)
    divides = claimed % cert.multiplier == 0
    if not divides:
        raise AssertionError(f"minimal multiplier {cert.multiplier} does not divide {claimed}")
    k = claimed // cert.multiplier
    claimed_cert = MultiplierCertificate(u, hs, claimed, [A * k for A in cert.cofactors], cert.window)
    assert claimed_cert.verify()
    return TameMembership(q, claimed, cert, claimed_cert, divides, printed_tame_identity(q))


def frobenius_poly_torus(q: int) -> tuple[int, IntPolynomial]:
    """(N, F) with [N] F(Frob) = 0 on torsion of G_m over an unramified base: (1, T - q)."""
    if q < 2 or len(prime_factors(q)) != 1:
        raise ValueError(f"{q} is not a prime power")
    F = T - q
    assert cyclotomic_factor_free(F) and F(q) == 0
    return 1, F


def resultant(a: IntPolynomial, b: IntPolynomial) -> int:
    """Resultant over Z via the Sylvester determinant."""
    from .lattice import determinant
    m, n = int(a.degree), int(b.degree)
    if m < 0 or n < 0:
        return 0
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(reversed(a.coeffs)) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(reversed(b.coeffs)) + [0] * (size - n - 1 - i))
    return determinant(rows)
