from __future__ import annotations

import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from tvlab.cyclo import (
    CycInt,
    GaloisElement,
    cyc_embed,
    cyc_is_zero,
    cyc_sum,
    format_point,
    galois_act,
    galois_group,
    parse_point,
    sym,
    torsion_split,
)
from tvlab.intpoly import IntPolynomial, cyclotomic, euler_phi


def test_cyclotomic_matches_sympy():
    T = sympy.Symbol("T")
    for m in range(1, 80):
        ref = sympy.Poly(sympy.cyclotomic_poly(m, T), T).all_coeffs()[::-1]
        assert list(cyclotomic(m).coeffs) == [int(c) for c in ref]


def test_embed_examples():
    assert cyc_embed(sym(0), 6) == CycInt.from_int(1, 6)
    z = cyc_embed(sym(1, 6), 6)
    assert z.coeffs == (0, 1)
    assert z * z - z + 1 == 0
    assert cyc_embed(sym(1, 2), 6) == CycInt.from_int(-1, 6)
    with pytest.raises(ValueError):
        cyc_embed(sym(1, 4), 6)


def test_is_zero_examples():
    assert cyc_is_zero(cyc_sum([(1, sym(1, 6)), (1, sym(5, 6)), (-1, sym(0))]))
    assert not cyc_is_zero(cyc_sum([(1, sym(1, 5)), (-1, sym(0))]))
    assert cyc_is_zero(CycInt.from_int(0, 7))


def test_point_serialisation():
    P = parse_point("1/6,5/6")
    assert P == (Fraction(1, 6), Fraction(5, 6))
    assert format_point(P) == "1/6,5/6"
    assert parse_point("7/6") == (Fraction(1, 6),)


def test_galois_examples():
    tau7 = GaloisElement.frobenius(7, 0, 6)
    assert galois_act(tau7, (sym(1, 6),)) == (sym(1, 6),)
    tau5 = GaloisElement.frobenius(5, 0, 6)
    assert galois_act(tau5, (sym(1, 6),)) == (sym(5, 6),)
    g = GaloisElement(3, 2, 1, 0, 2)
    assert galois_act(g, (sym(1, 9),)) == (sym(2, 9),)


def test_galois_group_size():
    G = galois_group(5, 1, 6)
    assert len(G) == 2 * 4
    assert len({g.unit() for g in G}) == len(G)


def test_torsion_split_examples():
    assert torsion_split((sym(5, 12),), 2) == ((sym(3, 4),), (sym(2, 3),))
    assert torsion_split((sym(1, 5),), 2) == ((sym(0),), (sym(1, 5),))
    assert torsion_split((sym(1, 8),), 2) == ((sym(1, 8),), (sym(0),))


levels = st.sampled_from([1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 20, 24, 30])


@given(levels, st.integers(0, 1000), st.integers(0, 1000))
def test_embed_multiplicative(m, a, b):
    s, t = sym(a, m), sym(b, m)
    assert cyc_embed(s + t, m) == cyc_embed(s, m) * cyc_embed(t, m)


@given(levels, st.lists(st.integers(-5, 5), min_size=1, max_size=6),
       st.lists(st.integers(-5, 5), min_size=1, max_size=6))
def test_cycint_matches_polynomial_remainder(m, a, b):
    # ring operations agree with reduction of the product polynomial mod Phi_m
    A, B = CycInt(m, a), CycInt(m, b)
    prod = (IntPolynomial(a) * IntPolynomial(b)) % cyclotomic(m)
    assert (A * B).coeffs == prod.coeffs + (0,) * (euler_phi(m) - len(prod.coeffs))


@given(st.sampled_from([3, 5, 7]), st.integers(0, 2), st.sampled_from([1, 2, 4, 8]),
       st.integers(0, 50), st.integers(0, 50), st.integers(1, 100), st.integers(1, 100),
       st.integers(0, 10 ** 4))
def test_galois_action_is_a_group_action(p, k, tame, j1, j2, b1, b2, c):
    if tame % p == 0:
        return
    pk = p ** k
    b1 = b1 if b1 % p else b1 + 1
    b2 = b2 if b2 % p else b2 + 1
    g = GaloisElement(p, k, tame, j1, b1)
    h = GaloisElement(p, k, tame, j2, b2)
    P = (sym(c, pk * tame), sym(c * 7 + 1, pk * tame))
    assert galois_act(g * h, P) == galois_act(g, galois_act(h, P))
    assert galois_act(GaloisElement.identity(p, k, tame), P) == P


@given(st.integers(1, 300), st.integers(0, 299), st.sampled_from([2, 3, 5, 7]))
def test_torsion_split_properties(m, c, p):
    P = (sym(c, m),)
    x, y = torsion_split(P, p)
    assert sym(x[0] + y[0]) == P[0]
    kx = x[0].denominator
    while kx % p == 0:
        kx //= p
    assert kx == 1
    assert math.gcd(y[0].denominator, p) == 1
    assert torsion_split(x, p) == (x, (sym(0),))


@given(st.sampled_from([5, 7, 11]), st.integers(1, 40))
def test_frobenius_fixes_exactly_when_order_divides_p_minus_1(p, m):
    if m % p == 0:
        return
    tau = GaloisElement.frobenius(p, 0, m)
    P = (sym(1, m),)
    assert (galois_act(tau, P) == P) == ((p - 1) % m == 0)
