from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from tvlab.boxall import (
    Automorphism,
    FiniteModule,
    FixedPointError,
    GaloisAction,
    HypothesisError,
    boxall_construct,
    boxall_oracle,
    check_hypotheses,
    identity_automorphism,
)
from tvlab.verify import random_boxall_instance


def test_module_parsing():
    assert FiniteModule.parse("9,3") == FiniteModule(3, (2, 1))
    assert FiniteModule.parse("3^2, 3") == FiniteModule(3, (2, 1))
    assert FiniteModule.parse("8").size() == 8
    with pytest.raises(ValueError):
        FiniteModule.parse("6")
    with pytest.raises(ValueError):
        FiniteModule.parse("9,4")


def test_torsion_generators():
    A = FiniteModule.parse("9,3")
    assert A.torsion_generators(3) == [(3, 0), (0, 1)]
    assert sum(1 for v in A.elements() if A.in_torsion(v, 3)) == 9


def test_automorphism_well_definedness():
    A = FiniteModule.parse("9,3")
    Automorphism(A, ((1, 3), (1, 1)))
    with pytest.raises(ValueError):
        Automorphism(A, ((1, 1), (0, 1)))
    with pytest.raises(ValueError):
        Automorphism(A, ((1,),))


def test_automorphism_algebra():
    A = FiniteModule.parse("27")
    g = Automorphism(A, ((4,),))
    assert (g ** 9).matrix == ((1,),)
    assert (g ** 3).matrix == ((10,),)
    assert g.is_bijective()
    assert (g * identity_automorphism(A)) == g
    assert not Automorphism(A, ((3,),)).is_bijective()


def test_worked_examples():
    A9 = FiniteModule.parse("9")
    act = GaloisAction(A9, [[[4]]])
    r = boxall_construct(A9, act, (1,))
    assert r.n == 1 and r.sigma.matrix == ((4,),) and r.x == (3,)
    oracle = {(g.matrix, x) for g, x in boxall_oracle(A9, act, (1,))}
    assert oracle == {(((4,),), (3,)), (((7,),), (6,))}

    A27 = FiniteModule.parse("27")
    r = boxall_construct(A27, GaloisAction(A27, [[[4]]]), (1,))
    assert r.n == 2 and r.sigma.matrix == ((10,),) and r.x == (9,) and r.trace == [(9,), (9,)]
    assert r.sigma_word == (0, 0, 0)


def test_p2_needs_four_torsion_fixed():
    A8 = FiniteModule.parse("8")
    assert check_hypotheses(A8, GaloisAction(A8, [[[5]]]))
    assert not check_hypotheses(A8, GaloisAction(A8, [[[3]]]))
    with pytest.raises(HypothesisError):
        boxall_construct(A8, GaloisAction(A8, [[[3]]]), (1,))
    r = boxall_construct(A8, GaloisAction(A8, [[[5]]]), (1,))
    assert r.x == (4,)


def test_hypothesis_failure_and_fixed_point():
    A9 = FiniteModule.parse("9")
    with pytest.raises(HypothesisError):
        boxall_construct(A9, GaloisAction(A9, [[[2]]]), (1,))
    with pytest.raises(FixedPointError):
        boxall_construct(A9, GaloisAction(A9, [[[4]]]), (3,))
    with pytest.raises(FixedPointError):
        boxall_construct(A9, GaloisAction(A9, []), (1,))


def test_group_enumeration():
    A = FiniteModule.parse("27")
    group = GaloisAction(A, [[[4]]]).group()
    assert len(group) == 9
    assert {g.matrix[0][0] for _, g in group} == {1, 4, 7, 10, 13, 16, 19, 22, 25}


@settings(max_examples=80)
@given(st.integers(0, 10 ** 9))
def test_random_instances_land_in_oracle(seed):
    A, action, Q = random_boxall_instance(random.Random(seed))
    r = boxall_construct(A, action, Q)
    assert r.x != A.zero and A.in_torsion(r.x, A.p)
    assert A.sub(r.sigma(Q), Q) == r.x
    assert all(x == r.x for x in r.trace)
    assert action.fixes(A.scale(A.p ** r.n, Q)) and not action.fixes(A.scale(A.p ** (r.n - 1), Q))
    assert any(g.matrix == r.sigma.matrix and x == r.x for g, x in boxall_oracle(A, action, Q))
