from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tvlab.cyclo import cyc_sum, sym
from tvlab.intpoly import IntPolynomial, cyclotomic
from tvlab.local_field import (
    congruent_at_level,
    embed_root,
    frobenius_apply,
    habegger_valuations,
    reduce_level,
    teichmuller,
    teichmuller_by_qpower,
    tower_make,
    valuation,
    vp_int,
)


def test_tower_examples():
    t = tower_make(5, 1, 1, 20)
    assert (t.e, t.f) == (4, 1)
    x = IntPolynomial.T()
    assert IntPolynomial(t.eisenstein_poly) == cyclotomic(5)(x + 1)
    assert tower_make(7, 6, 0, 20).f == 1
    assert tower_make(5, 6, 0, 20).f == 2
    with pytest.raises(ValueError):
        tower_make(5, 10, 0, 20)


def test_eisenstein_shape():
    for p, k in [(2, 3), (3, 2), (5, 1), (7, 1)]:
        E = IntPolynomial(tower_make(p, 1, k, 10).eisenstein_poly)
        assert E.is_monic()
        assert all(c % p == 0 for c in E.coeffs[:-1])
        assert E.coeffs[0] % (p * p) != 0


def test_valuation_examples():
    t = tower_make(5, 1, 1, 20)
    assert valuation(embed_root(sym(1, 5), t) - 1).value == Fraction(1, 4)
    assert valuation(t.from_int(5)).value == 1
    s = tower_make(7, 6, 0, 20)
    z = teichmuller(s, 2) + teichmuller(s, 6) - 1
    assert valuation(z).value == 1
    assert valuation(s.zero()).below_precision


def test_teichmuller_examples():
    s = tower_make(7, 6, 0, 20)
    assert teichmuller(s, 2).c[0] % 49 == 30
    assert teichmuller(s, 6).c[0] % 49 == 48
    s5 = tower_make(5, 1, 0, 20)
    w2 = teichmuller(s5, 2)
    assert w2.c[0] % 25 == 7
    assert (w2 * w2).c[0] % 25 == 24


@pytest.mark.parametrize("p,tame", [(7, 6), (5, 6), (3, 8), (2, 7), (5, 13), (11, 3)])
def test_teichmuller_newton_matches_qpower_oracle(p, tame):
    s = tower_make(p, tame, 0, 12)
    F = s.residue_field
    for a in list(F.units())[:12]:
        assert teichmuller(s, a) == teichmuller_by_qpower(s, a)
        w = teichmuller(s, a)
        assert (w ** (s.q - 1) - 1).is_indistinguishable_from_zero()
        assert w.residue() == F.coerce(a)


def test_embed_root_examples():
    s = tower_make(7, 6, 0, 20)
    z = embed_root(sym(1, 6), s)
    assert (z * z - z + 1).is_indistinguishable_from_zero()
    assert z.residue()[0] in (3, 5)
    t = tower_make(5, 1, 1, 20)
    assert embed_root(sym(1, 5), t) == t.uniformizer() + 1
    assert embed_root(sym(0), t) == t.one()


def test_distinct_teichmuller_lifts_are_far_apart():
    s = tower_make(7, 6, 0, 20)
    lifts = [teichmuller(s, a) for a in range(1, 7)]
    for i in range(6):
        for j in range(i + 1, 6):
            assert valuation(lifts[i] - lifts[j]).value == 0


def test_reduce_level_examples():
    t = tower_make(5, 1, 1, 20)
    assert reduce_level(embed_root(sym(1, 5), t), 0) == reduce_level(t.one(), 0)
    s = tower_make(7, 6, 0, 20)
    assert reduce_level(teichmuller(s, 2), 0) == (2,)
    assert reduce_level(s.from_int(49), 1) == (0,)
    assert reduce_level(s.from_int(49), 2) == (49,)
    with pytest.raises(ValueError):
        reduce_level(s.one(), 20)


@given(st.integers(0, 19), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_congruence_level_matches_valuation(n, a, b):
    t = tower_make(5, 1, 1, 8)
    za = t.element([a % 7, b % 5, 0, 0])
    zb = t.element([b % 7, a % 5, 0, 0])
    v = valuation(za - zb)
    expect = v.value is None or v.value * t.e > n
    assert congruent_at_level(za, zb, n) == expect


def test_frobenius_examples():
    s = tower_make(7, 6, 0, 20)
    w2 = teichmuller(s, 2)
    assert frobenius_apply(s, w2) == w2
    assert frobenius_apply(s, s.one()) == s.one()
    s2 = tower_make(5, 6, 0, 20)
    for a in list(s2.residue_field.units())[:10]:
        w = teichmuller(s2, a)
        assert valuation(frobenius_apply(s2, w) - w ** 5).below_precision
    with pytest.raises(ValueError):
        frobenius_apply(tower_make(5, 1, 1, 10), tower_make(5, 1, 1, 10).one())


def test_frobenius_is_ring_homomorphism():
    s = tower_make(3, 13, 0, 10)
    import random
    rng = random.Random(5)
    for _ in range(20):
        a = s.element([rng.randrange(3 ** 10) for _ in range(s.dim)])
        b = s.element([rng.randrange(3 ** 10) for _ in range(s.dim)])
        assert frobenius_apply(s, a * b) == frobenius_apply(s, a) * frobenius_apply(s, b)
        assert frobenius_apply(s, a + b) == frobenius_apply(s, a) + frobenius_apply(s, b)


towers = st.sampled_from([(5, 1, 1), (7, 6, 0), (5, 6, 0), (3, 2, 2), (2, 3, 2), (5, 3, 1)])


def _elem(spec, coords, scale_exp):
    return spec.element([c * spec.p ** scale_exp for c in coords[: spec.dim]] + [0] * max(0, spec.dim - len(coords)))


@given(towers, st.lists(st.integers(-10 ** 6, 10 ** 6), min_size=12, max_size=12),
       st.lists(st.integers(-10 ** 6, 10 ** 6), min_size=12, max_size=12), st.integers(0, 3), st.integers(0, 3))
def test_ultrametric_and_multiplicative(tw, ca, cb, ea, eb):
    spec = tower_make(*tw, 16)
    x, y = _elem(spec, ca, ea), _elem(spec, cb, eb)
    vx, vy = valuation(x), valuation(y)
    if vx.value is None or vy.value is None:
        return
    vs = valuation(x + y)
    if vs.value is not None:
        assert vs.value >= min(vx.value, vy.value)
    if vx.value != vy.value:
        assert vs.value == min(vx.value, vy.value)
    if vx.value + vy.value < spec.N - 1:
        assert valuation(x * y).value == vx.value + vy.value


@given(st.sampled_from([(7, 6, 1), (5, 3, 1), (3, 4, 2), (2, 3, 3)]), st.integers(0, 10 ** 4), st.integers(0, 10 ** 4))
def test_embed_root_multiplicative(tw, a, b):
    spec = tower_make(*tw, 12)
    m = spec.level
    s, t = sym(a, m), sym(b, m)
    assert embed_root(s, spec) * embed_root(t, spec) == embed_root(s + t, spec)


def test_nonzero_cyclotomic_integers_have_finite_valuation():
    spec = tower_make(7, 6, 1, 40)
    for a in range(42):
        for b in range(0, 42, 5):
            terms = [(1, sym(a, 42)), (2, sym(b, 42)), (-1, sym(0))]
            if cyc_sum(terms).is_zero():
                continue
            z = sum((embed_root(r, spec) * k for k, r in terms), spec.zero())
            assert valuation(z).is_finite


def test_habegger_rows():
    for p in (3, 5):
        for r in habegger_valuations(p, 6):
            assert r["v_exact"] >= r["n"]
            assert r["v_tower"] == r["v_exact"]
            assert r["digits_agree"]
    assert vp_int(2 ** 2 - 1, 3) == 1 and vp_int(63, 3) == 2 and vp_int(15, 5) == 1
